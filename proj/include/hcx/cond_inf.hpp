#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hcx/correspondence.hpp"
#include "hcx/ext_real.hpp"

namespace hcx {

/// Total table from a finite set to the extended reals.
class ExtRealFunction {
 public:
  ExtRealFunction(FiniteSet domain, std::vector<ExtReal> values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw std::invalid_argument("ExtRealFunction: value count differs from domain size");
  }

  static ExtRealFunction constant(FiniteSet domain, ExtReal v) {
    std::vector<ExtReal> vals(domain.size(), v);
    return ExtRealFunction(std::move(domain), std::move(vals));
  }

  const FiniteSet& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<ExtReal>& values() const { return values_; }

  ExtReal operator()(std::size_t w) const {
    if (w >= values_.size()) throw std::out_of_range("ExtRealFunction: index out of bounds");
    return values_[w];
  }

  void set(std::size_t w, ExtReal v) {
    if (w >= values_.size()) throw std::out_of_range("ExtRealFunction: index out of bounds");
    values_[w] = v;
  }

  /// Equality of cardinality and values; labels are ignored.
  friend bool operator==(const ExtRealFunction& a, const ExtRealFunction& b) {
    return a.values_ == b.values_;
  }

 private:
  FiniteSet domain_;
  std::vector<ExtReal> values_;
};

/// inf over an index set; +inf on the empty set.
inline ExtReal inf_over_subset(const ExtRealFunction& f, const IndexSet& a) {
  check_index_set(a, f.size(), "inf_over_subset");
  ExtReal out = ExtReal::pos_inf();
  for (std::size_t w : a) out = min(out, f(w));
  return out;
}

/// sup over an index set; -inf on the empty set.
inline ExtReal sup_over_subset(const ExtRealFunction& f, const IndexSet& a) {
  check_index_set(a, f.size(), "sup_over_subset");
  ExtReal out = ExtReal::neg_inf();
  for (std::size_t w : a) out = max(out, f(w));
  return out;
}

/// All minimizers of f over a (every w in a with f(w) equal to the inf).
/// Empty when a is empty.
inline IndexSet argmin_over_subset(const ExtRealFunction& f, const IndexSet& a) {
  const ExtReal v = inf_over_subset(f, a);
  IndexSet out;
  for (std::size_t w : a)
    if (f(w) == v) out.push_back(w);
  return out;
}

/// Conditional infimum of f with respect to r: the function on target(r)
/// whose value at y is the inf of f over the foreset {w : w r y}. Empty
/// foresets (in particular everything off range(r)) get +inf.
inline ExtRealFunction cond_inf(const ExtRealFunction& f, const Correspondence& r) {
  if (!compatible(f.domain(), r.source()))
    throw std::invalid_argument("cond_inf: function domain differs from relation source");
  std::vector<ExtReal> out(r.target().size(), ExtReal::pos_inf());
  for (auto [w, y] : r.pairs()) out[y] = min(out[y], f(w));
  return ExtRealFunction(r.target(), std::move(out));
}

/// Conditional supremum; empty foresets get -inf.
inline ExtRealFunction cond_sup(const ExtRealFunction& f, const Correspondence& r) {
  if (!compatible(f.domain(), r.source()))
    throw std::invalid_argument("cond_sup: function domain differs from relation source");
  std::vector<ExtReal> out(r.target().size(), ExtReal::neg_inf());
  for (auto [w, y] : r.pairs()) out[y] = max(out[y], f(w));
  return ExtRealFunction(r.target(), std::move(out));
}

/// Pushforward along the mapping w -> theta[w]: value at y is the inf of f
/// over the preimage of y.
inline ExtRealFunction cond_inf_mapping(const ExtRealFunction& f,
                                        const std::vector<std::size_t>& theta,
                                        const FiniteSet& target) {
  if (theta.size() != f.size())
    throw std::invalid_argument("cond_inf_mapping: table size differs from function domain");
  std::vector<ExtReal> out(target.size(), ExtReal::pos_inf());
  for (std::size_t w = 0; w < theta.size(); ++w) {
    if (theta[w] >= target.size()) throw std::out_of_range("cond_inf_mapping: table value out of bounds");
    out[theta[w]] = min(out[theta[w]], f(w));
  }
  return ExtRealFunction(target, std::move(out));
}

/// g composed with the mapping w -> theta[w], as a plain table.
inline ExtRealFunction compose_table(const ExtRealFunction& g,
                                     const std::vector<std::size_t>& theta,
                                     const FiniteSet& source) {
  if (theta.size() != source.size())
    throw std::invalid_argument("compose_table: table size differs from source size");
  std::vector<ExtReal> out;
  out.reserve(theta.size());
  for (std::size_t w = 0; w < theta.size(); ++w) {
    if (theta[w] >= g.size()) throw std::out_of_range("compose_table: table value out of bounds");
    out.push_back(g(theta[w]));
  }
  return ExtRealFunction(source, std::move(out));
}

/// g(theta(.)) computed as a conditional infimum with respect to the inverse
/// of the mapping's graph. The pointwise composition is recomputed and
/// compared; a mismatch would be a defect in the calculus, so it throws.
inline ExtRealFunction compose_via_inverse_graph(const ExtRealFunction& g,
                                                 const std::vector<std::size_t>& theta,
                                                 const FiniteSet& source) {
  const Correspondence graph = graph_of_mapping(source, g.domain(), theta);
  ExtRealFunction via_relation = cond_inf(g, graph.inverse());
  if (!(via_relation == compose_table(g, theta, source)))
    throw std::logic_error("compose_via_inverse_graph: relation route disagrees with pointwise composition");
  return via_relation;
}

/// 0 on u, +inf elsewhere.
inline ExtRealFunction characteristic(const FiniteSet& s, const IndexSet& u) {
  check_index_set(u, s.size(), "characteristic");
  std::vector<ExtReal> out(s.size(), ExtReal::pos_inf());
  for (std::size_t w : u) out[w] = ExtReal(0.0);
  return ExtRealFunction(s, std::move(out));
}

/// Partial minimization of a function on the product W x Y over the W slot.
inline ExtRealFunction marginalize_inf(const ExtRealFunction& h, const FiniteSet& w,
                                       const FiniteSet& y) {
  if (h.size() != w.size() * y.size())
    throw std::invalid_argument("marginalize_inf: domain is not the product of the factors");
  std::vector<ExtReal> out(y.size(), ExtReal::pos_inf());
  for (std::size_t yy = 0; yy < y.size(); ++yy)
    for (std::size_t ww = 0; ww < w.size(); ++ww)
      out[yy] = min(out[yy], h(product_index(ww, yy, w.size())));
  return ExtRealFunction(y, std::move(out));
}

inline ExtRealFunction marginalize_sup(const ExtRealFunction& h, const FiniteSet& w,
                                       const FiniteSet& y) {
  if (h.size() != w.size() * y.size())
    throw std::invalid_argument("marginalize_sup: domain is not the product of the factors");
  std::vector<ExtReal> out(y.size(), ExtReal::neg_inf());
  for (std::size_t yy = 0; yy < y.size(); ++yy)
    for (std::size_t ww = 0; ww < w.size(); ++ww)
      out[yy] = max(out[yy], h(product_index(ww, yy, w.size())));
  return ExtRealFunction(y, std::move(out));
}

/// Strict epigraph of f sliced at finitely many thresholds: w relates to
/// slot t exactly when f(w) < grid[t]. The grid must be strictly increasing
/// and finite.
inline Correspondence strict_epigraph(const ExtRealFunction& f, const std::vector<double>& grid) {
  for (std::size_t t = 0; t < grid.size(); ++t) {
    if (!std::isfinite(grid[t]))
      throw std::invalid_argument("strict_epigraph: grid values must be finite");
    if (t > 0 && !(grid[t - 1] < grid[t]))
      throw std::invalid_argument("strict_epigraph: grid must be strictly increasing");
  }
  Correspondence out(f.domain(), FiniteSet(grid.size()));
  for (std::size_t w = 0; w < f.size(); ++w) {
    const ExtReal v = f(w);
    for (std::size_t t = 0; t < grid.size(); ++t)
      if (v < ExtReal(grid[t])) out.add(w, t);
  }
  return out;
}

/// Threshold grid that separates every finite level of f: all finite values,
/// midpoints between consecutive ones, and one value on each side.
inline std::vector<double> default_epigraph_grid(const ExtRealFunction& f) {
  std::vector<double> fin;
  for (ExtReal v : f.values())
    if (v.is_finite()) fin.push_back(v.value());
  std::sort(fin.begin(), fin.end());
  fin.erase(std::unique(fin.begin(), fin.end()), fin.end());
  if (fin.empty()) return {-1.0, 0.0, 1.0};
  std::vector<double> grid;
  grid.push_back(fin.front() - 1.0);
  for (std::size_t i = 0; i < fin.size(); ++i) {
    grid.push_back(fin[i]);
    if (i + 1 < fin.size()) grid.push_back(fin[i] + (fin[i + 1] - fin[i]) / 2.0);
  }
  grid.push_back(fin.back() + 1.0);
  return grid;
}

inline ExtRealFunction pointwise_min(const ExtRealFunction& a, const ExtRealFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_min: domains differ");
  std::vector<ExtReal> out;
  out.reserve(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out.push_back(min(a(w), b(w)));
  return ExtRealFunction(a.domain(), std::move(out));
}

inline ExtRealFunction pointwise_max(const ExtRealFunction& a, const ExtRealFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_max: domains differ");
  std::vector<ExtReal> out;
  out.reserve(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out.push_back(max(a(w), b(w)));
  return ExtRealFunction(a.domain(), std::move(out));
}

/// Pointwise min over a finite family; the empty family gives constant +inf.
inline ExtRealFunction pointwise_min(const std::vector<ExtRealFunction>& family,
                                     const FiniteSet& domain) {
  ExtRealFunction out = ExtRealFunction::constant(domain, ExtReal::pos_inf());
  for (const auto& f : family) out = pointwise_min(out, f);
  return out;
}

/// Pointwise max over a finite family; the empty family gives constant -inf.
inline ExtRealFunction pointwise_max(const std::vector<ExtRealFunction>& family,
                                     const FiniteSet& domain) {
  ExtRealFunction out = ExtRealFunction::constant(domain, ExtReal::neg_inf());
  for (const auto& f : family) out = pointwise_max(out, f);
  return out;
}

inline ExtRealFunction pointwise_upper_add(const ExtRealFunction& a, const ExtRealFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_upper_add: domains differ");
  std::vector<ExtReal> out;
  out.reserve(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out.push_back(upper_add(a(w), b(w)));
  return ExtRealFunction(a.domain(), std::move(out));
}

inline ExtRealFunction pointwise_lower_add(const ExtRealFunction& a, const ExtRealFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_lower_add: domains differ");
  std::vector<ExtReal> out;
  out.reserve(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out.push_back(lower_add(a(w), b(w)));
  return ExtRealFunction(a.domain(), std::move(out));
}

inline ExtRealFunction shift_upper_add(const ExtRealFunction& f, ExtReal r) {
  std::vector<ExtReal> out;
  out.reserve(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) out.push_back(upper_add(f(w), r));
  return ExtRealFunction(f.domain(), std::move(out));
}

inline ExtRealFunction negate(const ExtRealFunction& f) {
  std::vector<ExtReal> out;
  out.reserve(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) out.push_back(negate(f(w)));
  return ExtRealFunction(f.domain(), std::move(out));
}

inline bool pointwise_leq(const ExtRealFunction& a, const ExtRealFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_leq: domains differ");
  for (std::size_t w = 0; w < a.size(); ++w)
    if (!(a(w) <= b(w))) return false;
  return true;
}

}  // namespace hcx
