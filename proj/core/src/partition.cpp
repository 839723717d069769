#include "gmdep/partition.hpp"

#include <algorithm>
#include <map>

namespace gmdep {

TwoSamplePartition::TwoSamplePartition(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 0 || n2 < 0)
    throw DomainError("TwoSamplePartition: negative sample size");
  assign1_.assign(n1, -1);
  assign2_.assign(n2, -1);
}

TwoSamplePartition TwoSamplePartition::singletons(int n1, int n2) {
  TwoSamplePartition p(n1, n2);
  for (int i = 0; i < n1; ++i) p.insert_item(1, i, kNewBlock);
  for (int j = 0; j < n2; ++j) p.insert_item(2, j, kNewBlock);
  return p;
}

TwoSamplePartition TwoSamplePartition::from_block_labels(
    int n1, int n2, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != n1 + n2)
    throw DomainError("from_block_labels: label vector has wrong length");
  TwoSamplePartition p(n1, n2);
  std::map<int, int> remap;
  for (int g = 0; g < n1 + n2; ++g) {
    auto it = remap.find(labels[g]);
    int target = (it == remap.end()) ? kNewBlock : it->second;
    int b = (g < n1) ? p.insert_item(1, g, target)
                     : p.insert_item(2, g - n1, target);
    remap[labels[g]] = b;
  }
  return p;
}

int TwoSamplePartition::block_of(int sample, int index) const {
  const auto& a = (sample == 1) ? assign1_ : assign2_;
  if (index < 0 || index >= static_cast<int>(a.size()))
    throw DomainError("block_of: index out of range");
  return a[index];
}

TwoSamplePartition::RemoveResult TwoSamplePartition::remove_item(int sample,
                                                                 int index) {
  auto& a = (sample == 1) ? assign1_ : assign2_;
  if (index < 0 || index >= static_cast<int>(a.size()) || a[index] < 0)
    throw DomainError("remove_item: invalid index");
  RemoveResult res;
  res.block = a[index];
  Block& blk = blocks_[res.block];
  const bool was_shared = is_shared(res.block);
  auto& members = (sample == 1) ? blk.members1 : blk.members2;
  members.erase(std::find(members.begin(), members.end(), index));
  a[index] = -1;
  if (blk.members1.empty() && blk.members2.empty()) {
    res.block_removed = true;
    const int last = num_blocks() - 1;
    if (res.block != last) {
      blocks_[res.block] = std::move(blocks_[last]);
      for (int i : blocks_[res.block].members1) assign1_[i] = res.block;
      for (int i : blocks_[res.block].members2) assign2_[i] = res.block;
      res.moved_block = last;
    }
    blocks_.pop_back();
  } else if (was_shared) {
    res.became_sample1_only = blk.members2.empty();
    res.became_sample2_only = blk.members1.empty();
  }
  return res;
}

int TwoSamplePartition::insert_item(int sample, int index, int target) {
  auto& a = (sample == 1) ? assign1_ : assign2_;
  if (index < 0 || index >= static_cast<int>(a.size()) || a[index] >= 0)
    throw DomainError("insert_item: invalid index");
  if (target == kNewBlock) {
    blocks_.emplace_back();
    target = num_blocks() - 1;
  } else if (target < 0 || target >= num_blocks()) {
    throw DomainError("insert_item: no such block");
  }
  auto& members = (sample == 1) ? blocks_[target].members1
                                : blocks_[target].members2;
  members.push_back(index);
  a[index] = target;
  return target;
}

std::vector<int> TwoSamplePartition::canonical_labels() const {
  std::vector<int> out(n1_ + n2_, -1);
  std::vector<int> remap(num_blocks(), -1);
  int next = 0;
  for (int g = 0; g < n1_ + n2_; ++g) {
    const int b = (g < n1_) ? assign1_[g] : assign2_[g - n1_];
    if (b < 0) throw NumericError("canonical_labels: detached item");
    if (remap[b] < 0) remap[b] = next++;
    out[g] = remap[b];
  }
  return out;
}

void TwoSamplePartition::check_invariants() const {
  std::vector<Block> rebuilt(num_blocks());
  for (int i = 0; i < n1_; ++i) {
    if (assign1_[i] < 0 || assign1_[i] >= num_blocks())
      throw NumericError("partition invariant: sample-1 item detached");
    rebuilt[assign1_[i]].members1.push_back(i);
  }
  for (int j = 0; j < n2_; ++j) {
    if (assign2_[j] < 0 || assign2_[j] >= num_blocks())
      throw NumericError("partition invariant: sample-2 item detached");
    rebuilt[assign2_[j]].members2.push_back(j);
  }
  int tot1 = 0, tot2 = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    auto sorted = [](std::vector<int> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(rebuilt[b].members1) != sorted(blocks_[b].members1) ||
        sorted(rebuilt[b].members2) != sorted(blocks_[b].members2))
      throw NumericError("partition invariant: membership mismatch");
    if (block_size(b) == 0)
      throw NumericError("partition invariant: empty block");
    tot1 += count1(b);
    tot2 += count2(b);
  }
  if (tot1 != n1_ || tot2 != n2_)
    throw NumericError("partition invariant: frequency totals do not match");
}

namespace {

void enumerate_rgs(std::vector<int>& labels, int pos, int max_used,
                   int n1, int n2,
                   const std::function<void(const TwoSamplePartition&)>& fn) {
  const int n = static_cast<int>(labels.size());
  if (pos == n) {
    fn(TwoSamplePartition::from_block_labels(n1, n2, labels));
    return;
  }
  for (int b = 0; b <= max_used + 1; ++b) {
    labels[pos] = b;
    enumerate_rgs(labels, pos + 1, std::max(max_used, b), n1, n2, fn);
  }
}

}  // namespace

void enumerate_partitions(int n1, int n2,
                          const std::function<void(const TwoSamplePartition&)>& fn) {
  const int n = n1 + n2;
  if (n <= 0) throw DomainError("enumerate_partitions: empty dataset");
  if (n > 10)
    throw DomainError("enumerate_partitions: guarded to n1+n2 <= 10");
  std::vector<int> labels(n, 0);
  enumerate_rgs(labels, 1, 0, n1, n2, fn);
}

long bell_number(int n) {
  // Bell triangle
  std::vector<std::vector<long>> tri{{1}};
  for (int i = 1; i <= n; ++i) {
    std::vector<long> row{tri.back().back()};
    for (long v : tri.back()) row.push_back(row.back() + v);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

}  // namespace gmdep
