#include <doctest.h>

#include <algorithm>
#include <map>

#include "gmdep/partition.hpp"
#include "gmdep/peppf.hpp"
#include "gmdep/rng.hpp"

using namespace gmdep;

TEST_CASE("singleton removal drops the block") {
  auto p = TwoSamplePartition::singletons(2, 1);
  CHECK(p.num_blocks() == 3);
  auto rr = p.remove_item(1, 1);
  CHECK(rr.block_removed);
  CHECK(p.num_blocks() == 2);
}

TEST_CASE("shared block losing one side becomes single-sample") {
  // shared block with q = (1,3)
  TwoSamplePartition p(1, 3);
  const int b = p.insert_item(1, 0, TwoSamplePartition::kNewBlock);
  for (int j = 0; j < 3; ++j) p.insert_item(2, j, b);
  CHECK(p.is_shared(b));
  auto rr = p.remove_item(1, 0);
  CHECK_FALSE(rr.block_removed);
  CHECK(rr.became_sample2_only);
  CHECK(p.is_sample2_only(b));
  CHECK(p.count2(b) == 3);
}

TEST_CASE("remove + insert round-trips the frequencies") {
  auto p = TwoSamplePartition::from_block_labels(3, 2,
                                                 std::vector<int>{0, 0, 1, 1, 2});
  const auto before = frequencies_of(p);
  const int b = p.block_of(1, 1);
  p.remove_item(1, 1);
  p.insert_item(1, 1, b);
  const auto after = frequencies_of(p);
  CHECK(before.n1_sizes == after.n1_sizes);
  CHECK(before.n2_sizes == after.n2_sizes);
  CHECK(before.q1 == after.q1);
  CHECK(before.q2 == after.q2);
}

TEST_CASE("random mutation fuzz keeps bookkeeping consistent") {
  RngStream rng(7);
  auto p = TwoSamplePartition::singletons(5, 4);
  for (int step = 0; step < 2000; ++step) {
    const int sample = 1 + static_cast<int>(rng.uniform() * 2.0);
    const int n = (sample == 1) ? p.n1() : p.n2();
    const int idx = static_cast<int>(rng.uniform() * n);
    p.remove_item(sample, idx);
    const int nb = p.num_blocks();
    const int target = static_cast<int>(rng.uniform() * (nb + 1));
    p.insert_item(sample, idx,
                  target == nb ? TwoSamplePartition::kNewBlock : target);
    p.check_invariants();  // throws on any incremental-vs-recomputed mismatch
  }
}

TEST_CASE("enumeration counts match Bell numbers") {
  CHECK(bell_number(1) == 1);
  CHECK(bell_number(2) == 2);
  CHECK(bell_number(3) == 5);
  CHECK(bell_number(8) == 4140);
  long count = 0;
  enumerate_partitions(1, 0, [&](const TwoSamplePartition&) { ++count; });
  CHECK(count == 1);
  count = 0;
  enumerate_partitions(1, 1, [&](const TwoSamplePartition&) { ++count; });
  CHECK(count == 2);
  count = 0;
  enumerate_partitions(2, 1, [&](const TwoSamplePartition&) { ++count; });
  CHECK(count == 5);
  for (int n1 = 1; n1 <= 4; ++n1) {
    for (int n2 = 0; n1 + n2 <= 8 && n2 <= 4; ++n2) {
      count = 0;
      std::map<std::vector<int>, int> seen;
      enumerate_partitions(n1, n2, [&](const TwoSamplePartition& q) {
        ++count;
        ++seen[q.canonical_labels()];
      });
      CHECK(count == bell_number(n1 + n2));
      CHECK(static_cast<long>(seen.size()) == count);  // each exactly once
    }
  }
  CHECK_THROWS_AS(enumerate_partitions(6, 5, [](const TwoSamplePartition&) {}),
                  DomainError);
}

TEST_CASE("canonical labels ignore block numbering") {
  auto a = TwoSamplePartition::from_block_labels(2, 2,
                                                 std::vector<int>{5, 9, 5, 9});
  auto b = TwoSamplePartition::from_block_labels(2, 2,
                                                 std::vector<int>{1, 0, 1, 0});
  CHECK(a.canonical_labels() == b.canonical_labels());
}
