#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace mstperc {

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  DisjointSets() = default;
  explicit DisjointSets(std::size_t n) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0);
    size_.assign(n, 1);
    num_sets_ = n;
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false when a and b were already in the same set.
  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --num_sets_;
    return true;
  }

  bool same(std::int32_t a, std::int32_t b) { return find(a) == find(b); }
  std::int32_t set_size(std::int32_t x) { return size_[find(x)]; }
  std::size_t num_sets() const { return num_sets_; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
  std::size_t num_sets_ = 0;
};

}  // namespace mstperc
