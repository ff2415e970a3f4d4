#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace ccm {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  std::size_t components() const { return components_; }

  std::size_t component_size(std::size_t x) { return size_[find(x)]; }

  // all component sizes, descending
  std::vector<std::uint64_t> sizes() {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (find(i) == i) out.push_back(size_[i]);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint64_t> size_;
  std::size_t components_;
};

}  // namespace ccm
