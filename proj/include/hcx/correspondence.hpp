#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hcx/finite_set.hpp"

namespace hcx {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Finite binary relation between a source set W and a target set Y.
///
/// Storage is a dense bit matrix when |W|*|Y| <= kDenseCellLimit and a sorted
/// pair list otherwise. The representation is invisible: every operation
/// behaves identically in both modes (the test suite checks this by forcing
/// each mode explicitly).
class Correspondence {
 public:
  enum class Storage { auto_select, dense, sparse };
  static constexpr std::size_t kDenseCellLimit = std::size_t{1} << 20;

  Correspondence(FiniteSet source, FiniteSet target, Storage mode = Storage::auto_select)
      : source_(std::move(source)), target_(std::move(target)) {
    dense_ = pick_dense(source_.size(), target_.size(), mode);
    if (dense_) {
      row_words_ = (target_.size() + 63) / 64;
      bits_.assign(source_.size() * row_words_, 0);
    }
  }

  static Correspondence from_pairs(FiniteSet source, FiniteSet target,
                                   const std::vector<IndexPair>& pairs,
                                   Storage mode = Storage::auto_select) {
    Correspondence r(std::move(source), std::move(target), mode);
    if (r.dense_) {
      for (auto [w, y] : pairs) r.add(w, y);
    } else {
      for (auto [w, y] : pairs) r.check_bounds(w, y);
      r.list_ = pairs;
      std::sort(r.list_.begin(), r.list_.end());
      r.list_.erase(std::unique(r.list_.begin(), r.list_.end()), r.list_.end());
    }
    return r;
  }

  const FiniteSet& source() const { return source_; }
  const FiniteSet& target() const { return target_; }
  bool uses_dense_storage() const { return dense_; }

  bool contains(std::size_t w, std::size_t y) const {
    check_bounds(w, y);
    if (dense_) return (bits_[w * row_words_ + y / 64] >> (y % 64)) & 1u;
    return std::binary_search(list_.begin(), list_.end(), IndexPair{w, y});
  }

  void add(std::size_t w, std::size_t y) {
    check_bounds(w, y);
    if (dense_) {
      bits_[w * row_words_ + y / 64] |= std::uint64_t{1} << (y % 64);
    } else {
      auto it = std::lower_bound(list_.begin(), list_.end(), IndexPair{w, y});
      if (it == list_.end() || *it != IndexPair{w, y}) list_.insert(it, {w, y});
    }
  }

  void remove(std::size_t w, std::size_t y) {
    check_bounds(w, y);
    if (dense_) {
      bits_[w * row_words_ + y / 64] &= ~(std::uint64_t{1} << (y % 64));
    } else {
      auto it = std::lower_bound(list_.begin(), list_.end(), IndexPair{w, y});
      if (it != list_.end() && *it == IndexPair{w, y}) list_.erase(it);
    }
  }

  std::size_t pair_count() const {
    if (!dense_) return list_.size();
    std::size_t n = 0;
    for (auto word : bits_) n += static_cast<std::size_t>(__builtin_popcountll(word));
    return n;
  }

  bool empty() const { return pair_count() == 0; }

  /// All pairs in lexicographic order.
  std::vector<IndexPair> pairs() const {
    if (!dense_) return list_;
    std::vector<IndexPair> out;
    out.reserve(pair_count());
    for (std::size_t w = 0; w < source_.size(); ++w)
      for_each_in_row(w, [&](std::size_t y) { out.emplace_back(w, y); });
    return out;
  }

  /// {w : w R y}.
  IndexSet foreset(std::size_t y) const {
    if (y >= target_.size()) throw std::out_of_range("Correspondence: target index out of bounds");
    IndexSet out;
    if (dense_) {
      const std::size_t word = y / 64;
      const std::uint64_t mask = std::uint64_t{1} << (y % 64);
      for (std::size_t w = 0; w < source_.size(); ++w)
        if (bits_[w * row_words_ + word] & mask) out.push_back(w);
    } else {
      for (auto [w, yy] : list_)
        if (yy == y) out.push_back(w);
    }
    return out;
  }

  /// {y : w R y}.
  IndexSet afterset(std::size_t w) const {
    if (w >= source_.size()) throw std::out_of_range("Correspondence: source index out of bounds");
    IndexSet out;
    if (dense_) {
      for_each_in_row(w, [&](std::size_t y) { out.push_back(y); });
    } else {
      auto it = std::lower_bound(list_.begin(), list_.end(), IndexPair{w, 0});
      for (; it != list_.end() && it->first == w; ++it) out.push_back(it->second);
    }
    return out;
  }

  /// Union of foresets over B.
  IndexSet foreset_of_set(const IndexSet& b) const {
    check_index_set(b, target_.size(), "foreset_of_set");
    std::vector<char> hit(source_.size(), 0);
    if (dense_) {
      for (std::size_t w = 0; w < source_.size(); ++w) {
        for (std::size_t y : b)
          if ((bits_[w * row_words_ + y / 64] >> (y % 64)) & 1u) {
            hit[w] = 1;
            break;
          }
      }
    } else {
      for (auto [w, y] : list_)
        if (index_set_contains(b, y)) hit[w] = 1;
    }
    return collect(hit);
  }

  /// Union of aftersets over A.
  IndexSet afterset_of_set(const IndexSet& a) const {
    check_index_set(a, source_.size(), "afterset_of_set");
    std::vector<char> hit(target_.size(), 0);
    if (dense_) {
      for (std::size_t w : a)
        for_each_in_row(w, [&](std::size_t y) { hit[y] = 1; });
    } else {
      for (auto [w, y] : list_)
        if (index_set_contains(a, w)) hit[y] = 1;
    }
    return collect(hit);
  }

  /// {w : afterset(w) nonempty}.
  IndexSet domain() const {
    std::vector<char> hit(source_.size(), 0);
    if (dense_) {
      for (std::size_t w = 0; w < source_.size(); ++w)
        for (std::size_t k = 0; k < row_words_; ++k)
          if (bits_[w * row_words_ + k]) {
            hit[w] = 1;
            break;
          }
    } else {
      for (const auto& p : list_) hit[p.first] = 1;
    }
    return collect(hit);
  }

  /// {y : foreset(y) nonempty}.
  IndexSet range() const {
    std::vector<char> hit(target_.size(), 0);
    if (dense_) {
      for (std::size_t w = 0; w < source_.size(); ++w)
        for_each_in_row(w, [&](std::size_t y) { hit[y] = 1; });
    } else {
      for (const auto& p : list_) hit[p.second] = 1;
    }
    return collect(hit);
  }

  Correspondence inverse() const {
    Correspondence out(target_, source_, dense_ ? Storage::dense : Storage::sparse);
    if (dense_) {
      for (std::size_t w = 0; w < source_.size(); ++w)
        for_each_in_row(w, [&](std::size_t y) { out.add(y, w); });
    } else {
      out.list_.reserve(list_.size());
      for (auto [w, y] : list_) out.list_.emplace_back(y, w);
      std::sort(out.list_.begin(), out.list_.end());
    }
    return out;
  }

  bool is_subset_of(const Correspondence& other) const {
    require_same_shape(other, "is_subset_of");
    for (auto [w, y] : pairs())
      if (!other.contains(w, y)) return false;
    return true;
  }

  /// Equality of shape and pair set; labels and storage mode are ignored.
  friend bool operator==(const Correspondence& a, const Correspondence& b) {
    if (a.source_.size() != b.source_.size() || a.target_.size() != b.target_.size()) return false;
    if (a.dense_ && b.dense_) return a.bits_ == b.bits_;
    return a.pairs() == b.pairs();
  }

 private:
  static bool pick_dense(std::size_t n, std::size_t m, Storage mode) {
    if (mode == Storage::dense) return true;
    if (mode == Storage::sparse) return false;
    if (m != 0 && n > kDenseCellLimit / m) return false;
    return true;
  }

  void check_bounds(std::size_t w, std::size_t y) const {
    if (w >= source_.size()) throw std::out_of_range("Correspondence: source index out of bounds");
    if (y >= target_.size()) throw std::out_of_range("Correspondence: target index out of bounds");
  }

  void require_same_shape(const Correspondence& other, const char* what) const {
    if (source_.size() != other.source_.size() || target_.size() != other.target_.size())
      throw std::invalid_argument(std::string(what) + ": shapes differ");
  }

  template <class F>
  void for_each_in_row(std::size_t w, F&& body) const {
    for (std::size_t k = 0; k < row_words_; ++k) {
      std::uint64_t word = bits_[w * row_words_ + k];
      while (word) {
        const int bit = __builtin_ctzll(word);
        body(k * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

  static IndexSet collect(const std::vector<char>& hit) {
    IndexSet out;
    for (std::size_t i = 0; i < hit.size(); ++i)
      if (hit[i]) out.push_back(i);
    return out;
  }

  friend Correspondence compose(const Correspondence&, const Correspondence&);

  FiniteSet source_;
  FiniteSet target_;
  bool dense_ = true;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;    // dense: row-major, one bit per cell
  std::vector<IndexPair> list_;        // sparse: sorted, unique
};

/// r ; s = {(w, v) : exists x with w r x and x s v}. Requires
/// |target(r)| == |source(s)|.
inline Correspondence compose(const Correspondence& r, const Correspondence& s) {
  if (!compatible(r.target(), s.source()))
    throw std::invalid_argument("compose: middle sets have different sizes");
  Correspondence out(r.source(), s.target());
  if (r.dense_ && s.dense_ && out.dense_) {
    for (std::size_t w = 0; w < r.source().size(); ++w) {
      r.for_each_in_row(w, [&](std::size_t x) {
        for (std::size_t k = 0; k < s.row_words_; ++k)
          out.bits_[w * out.row_words_ + k] |= s.bits_[x * s.row_words_ + k];
      });
    }
    return out;
  }
  std::vector<IndexSet> after(s.source().size());
  for (std::size_t x = 0; x < after.size(); ++x) after[x] = s.afterset(x);
  for (auto [w, x] : r.pairs())
    for (std::size_t v : after[x]) out.add(w, v);
  return out;
}

inline Correspondence unite(const Correspondence& r, const Correspondence& s) {
  if (r.source().size() != s.source().size() || r.target().size() != s.target().size())
    throw std::invalid_argument("unite: shapes differ");
  Correspondence out(r.source(), r.target());
  for (auto [w, y] : r.pairs()) out.add(w, y);
  for (auto [w, y] : s.pairs()) out.add(w, y);
  return out;
}

inline Correspondence intersect(const Correspondence& r, const Correspondence& s) {
  if (r.source().size() != s.source().size() || r.target().size() != s.target().size())
    throw std::invalid_argument("intersect: shapes differ");
  Correspondence out(r.source(), r.target());
  for (auto [w, y] : r.pairs())
    if (s.contains(w, y)) out.add(w, y);
  return out;
}

/// A x B as a relation.
inline Correspondence rectangle(FiniteSet source, FiniteSet target,
                                const IndexSet& a, const IndexSet& b) {
  check_index_set(a, source.size(), "rectangle");
  check_index_set(b, target.size(), "rectangle");
  Correspondence out(std::move(source), std::move(target));
  for (std::size_t w : a)
    for (std::size_t y : b) out.add(w, y);
  return out;
}

inline Correspondence identity_correspondence(const FiniteSet& s) {
  Correspondence out(s, s);
  for (std::size_t i = 0; i < s.size(); ++i) out.add(i, i);
  return out;
}

/// Graph of the (total) mapping w -> theta[w].
inline Correspondence graph_of_mapping(FiniteSet source, FiniteSet target,
                                       const std::vector<std::size_t>& theta) {
  if (theta.size() != source.size())
    throw std::invalid_argument("graph_of_mapping: table size differs from source size");
  Correspondence out(std::move(source), std::move(target));
  for (std::size_t w = 0; w < theta.size(); ++w) out.add(w, theta[w]);
  return out;
}

/// Graph of the set-valued mapping w -> images[w]; empty images are allowed.
inline Correspondence graph_of_set_valued(FiniteSet source, FiniteSet target,
                                          const std::vector<IndexSet>& images) {
  if (images.size() != source.size())
    throw std::invalid_argument("graph_of_set_valued: image count differs from source size");
  Correspondence out(std::move(source), std::move(target));
  for (std::size_t w = 0; w < images.size(); ++w) {
    check_index_set(images[w], out.target().size(), "graph_of_set_valued");
    for (std::size_t y : images[w]) out.add(w, y);
  }
  return out;
}

/// Index of (w, y) in the product set W x Y; w varies fastest.
inline std::size_t product_index(std::size_t w, std::size_t y, std::size_t w_size) {
  return w + y * w_size;
}

inline FiniteSet product_set(const FiniteSet& w, const FiniteSet& y) {
  return FiniteSet(w.size() * y.size());
}

/// Relation from W x Y onto Y matching each product element to its second
/// component: (w, y) ~ y.
inline Correspondence marginal_correspondence(const FiniteSet& w, const FiniteSet& y) {
  Correspondence out(product_set(w, y), y);
  for (std::size_t yy = 0; yy < y.size(); ++yy)
    for (std::size_t ww = 0; ww < w.size(); ++ww) out.add(product_index(ww, yy, w.size()), yy);
  return out;
}

}  // namespace hcx
