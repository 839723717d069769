#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gmdep/errors.hpp"

namespace gmdep {

// Cluster structure of a two-sample dataset. Observations are indexed
// 0..n1-1 within sample 1 and 0..n2-1 within sample 2. Blocks keep their
// member lists per sample; an empty slot left by a removed block is filled
// by swapping in the last block, so callers holding per-block side data
// must mirror that move (see RemoveResult::moved_block).
class TwoSamplePartition {
 public:
  static constexpr int kNewBlock = -1;

  struct Block {
    std::vector<int> members1;
    std::vector<int> members2;
  };

  struct RemoveResult {
    int block = -1;           // block the item was removed from
    bool block_removed = false;
    int moved_block = -1;     // former id of the block swapped into `block`
    bool became_sample1_only = false;  // was shared, sample-2 side emptied
    bool became_sample2_only = false;  // was shared, sample-1 side emptied
  };

  TwoSamplePartition(int n1, int n2);
  static TwoSamplePartition singletons(int n1, int n2);
  // labels: one block id per observation, sample 1 first; ids need not be
  // contiguous, they are renumbered by first appearance.
  static TwoSamplePartition from_block_labels(int n1, int n2,
                                              std::span<const int> labels);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int b) const { return blocks_[b]; }
  int count1(int b) const { return static_cast<int>(blocks_[b].members1.size()); }
  int count2(int b) const { return static_cast<int>(blocks_[b].members2.size()); }
  int block_size(int b) const { return count1(b) + count2(b); }
  bool is_shared(int b) const { return count1(b) > 0 && count2(b) > 0; }
  bool is_sample1_only(int b) const { return count2(b) == 0; }
  bool is_sample2_only(int b) const { return count1(b) == 0; }
  // -1 while an item is detached mid-move
  int block_of(int sample, int index) const;

  RemoveResult remove_item(int sample, int index);
  // target = existing block id or kNewBlock; returns the block seated into
  int insert_item(int sample, int index, int target = kNewBlock);

  // Restricted-growth-string over observations in global order (sample 1
  // then sample 2); equal strings == equal partitions.
  std::vector<int> canonical_labels() const;

  // Recomputes all block membership from the assignment arrays and
  // compares; throws NumericError on any mismatch.
  void check_invariants() const;

 private:
  int n1_ = 0, n2_ = 0;
  std::vector<int> assign1_, assign2_;
  std::vector<Block> blocks_;
};

// Every set partition of n1+n2 labeled observations, exactly once.
// Guarded to n1+n2 <= 10 (Bell(10) = 115975); oracle use only.
void enumerate_partitions(int n1, int n2,
                          const std::function<void(const TwoSamplePartition&)>& fn);

long bell_number(int n);

}  // namespace gmdep
