#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace hcx {

/// Finite indexed set {0, ..., size-1}, optionally decorated with distinct
/// element labels. Labels never affect semantics; compatibility between sets
/// is cardinality only.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::size_t size) : size_(size) {}
  FiniteSet(std::size_t size, std::vector<std::string> labels)
      : size_(size), labels_(std::move(labels)) {
    if (labels_.empty()) return;
    if (labels_.size() != size_) throw std::invalid_argument("FiniteSet: label count differs from size");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second) throw std::invalid_argument("FiniteSet: duplicate label \"" + l + "\"");
  }

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const {
    if (i >= size_ || !has_labels()) throw std::out_of_range("FiniteSet: no label at index");
    return labels_[i];
  }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::string> labels_;
};

inline bool compatible(const FiniteSet& a, const FiniteSet& b) { return a.size() == b.size(); }

/// Subset of a FiniteSet: sorted, duplicate-free element indices.
using IndexSet = std::vector<std::size_t>;

inline void normalize(IndexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline IndexSet normalized(IndexSet s) {
  normalize(s);
  return s;
}

inline bool index_set_contains(const IndexSet& s, std::size_t i) {
  return std::binary_search(s.begin(), s.end(), i);
}

inline IndexSet index_set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet index_set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool index_set_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet full_index_set(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

inline void check_index_set(const IndexSet& s, std::size_t bound, const char* what) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] >= s[i + 1]) throw std::invalid_argument(std::string(what) + ": index set not sorted/unique");
  if (!s.empty() && s.back() >= bound)
    throw std::out_of_range(std::string(what) + ": index out of bounds");
}

}  // namespace hcx
