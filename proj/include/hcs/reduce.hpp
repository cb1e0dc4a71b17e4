#pragma once

#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace hcs {

// Worker cap for the parallel summation loops.  HERMITE_CS_THREADS caps the
// count (default: hardware concurrency).  The summation trees below have a
// shape fixed by the problem size alone, so the result is bit-identical for
// any worker count.
inline int worker_count() {
  static const int n = [] {
    unsigned hw = std::thread::hardware_concurrency();
    int workers = hw == 0 ? 1 : int(hw);
    if (const char* s = std::getenv("HERMITE_CS_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(s, &end, 10);
      if (end != s && v >= 1 && v < workers) workers = int(v);
    }
    return workers < 1 ? 1 : workers;
  }();
  return n;
}

namespace detail {

// Recursive halving: leaf i contributes leaf(i); combination order depends
// only on [lo, hi).  Parallel splits happen at the top levels only and do not
// change the association pattern.
template <class Acc, class LeafFn>
Acc tree_sum_range(std::size_t lo, std::size_t hi, const LeafFn& leaf, int par_depth) {
  if (hi - lo == 1) return leaf(lo);
  std::size_t mid = lo + (hi - lo) / 2;
  if (par_depth > 0 && hi - lo >= 2048) {
    auto rhs = std::async(std::launch::async, [&] {
      return tree_sum_range<Acc>(mid, hi, leaf, par_depth - 1);
    });
    Acc left = tree_sum_range<Acc>(lo, mid, leaf, par_depth - 1);
    Acc right = rhs.get();
    left += right;
    return left;
  }
  Acc left = tree_sum_range<Acc>(lo, mid, leaf, 0);
  Acc right = tree_sum_range<Acc>(mid, hi, leaf, 0);
  left += right;
  return left;
}

}  // namespace detail

// Deterministic pairwise reduction of leaf(0) + ... + leaf(count-1).
// Acc needs operator+=; leaf(i) returns Acc.
template <class Acc, class LeafFn>
Acc tree_sum(std::size_t count, const LeafFn& leaf) {
  if (count == 0) return Acc{};
  int depth = 0;
  for (int w = worker_count(); (1 << depth) < w && depth < 8; ++depth) {}
  return detail::tree_sum_range<Acc>(0, count, leaf, depth);
}

// Blocked variant for accumulator types that are expensive to create (dense
// matrices): indices are grouped into fixed blocks of `block` consecutive
// leaves; each block is accumulated left to right into one Acc, and block
// partials combine pairwise.  Block boundaries depend only on count/block.
template <class Acc, class MakeFn, class AddFn>
Acc blocked_tree_sum(std::size_t count, std::size_t block, const MakeFn& make,
                     const AddFn& add_into) {
  if (count == 0) return make();
  std::size_t nblocks = (count + block - 1) / block;
  auto block_leaf = [&](std::size_t b) {
    Acc acc = make();
    std::size_t lo = b * block;
    std::size_t hi = lo + block < count ? lo + block : count;
    for (std::size_t i = lo; i < hi; ++i) add_into(acc, i);
    return acc;
  };
  int depth = 0;
  for (int w = worker_count(); (1 << depth) < w && depth < 8; ++depth) {}
  return detail::tree_sum_range<Acc>(0, nblocks, block_leaf, depth);
}

}  // namespace hcs
