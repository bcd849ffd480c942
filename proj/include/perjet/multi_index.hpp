#ifndef PERJET_MULTI_INDEX_HPP
#define PERJET_MULTI_INDEX_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "errors.hpp"

namespace perjet {

/// Exponent tuple (q_1, ..., q_d) with |q| = sum of entries.
using MultiIndex = std::vector<unsigned>;

inline unsigned degree(const MultiIndex& q) {
  unsigned s = 0;
  for (unsigned e : q) s += e;
  return s;
}

inline std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Graded enumeration; within one total degree the first coordinate decreases,
/// matching (2,0),(1,1),(0,2) for d = 2.
inline void enumerate_degree(unsigned d, unsigned g, MultiIndex& prefix, std::vector<MultiIndex>& out) {
  if (d == 1) {
    prefix.push_back(g);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned e = g + 1; e-- > 0;) {
    prefix.push_back(e);
    enumerate_degree(d - 1, g - e, prefix, out);
    prefix.pop_back();
  }
}

/// All multi-indices with d entries and total degree at most r, graded-lex.
/// Cardinality is binom(d + r, d).
inline std::vector<MultiIndex> multiindex_enumerate(unsigned d, unsigned r) {
  if (d < 1) fail(Errc::DimensionMismatch, "multiindex_enumerate needs d >= 1");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binomial(d + r, d)));
  MultiIndex prefix;
  for (unsigned g = 0; g <= r; ++g) enumerate_degree(d, g, prefix, out);
  return out;
}

/// Shared index table for one series shape (d, r): the ordered enumeration
/// plus a position lookup. Immutable once built; cached per shape.
class IndexTable {
public:
  IndexTable(unsigned d, unsigned r) : d_(d), r_(r), list_(multiindex_enumerate(d, r)) {
    for (std::size_t i = 0; i < list_.size(); ++i) pos_[list_[i]] = i;
  }

  unsigned dim() const { return d_; }
  unsigned order() const { return r_; }
  std::size_t size() const { return list_.size(); }
  const std::vector<MultiIndex>& indices() const { return list_; }
  const MultiIndex& at(std::size_t i) const { return list_[i]; }

  std::size_t position(const MultiIndex& q) const {
    auto it = pos_.find(q);
    if (it == pos_.end()) fail(Errc::ShapeMismatch, "multi-index outside table");
    return it->second;
  }
  bool contains(const MultiIndex& q) const { return pos_.count(q) != 0; }

  static std::shared_ptr<const IndexTable> get(unsigned d, unsigned r) {
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const IndexTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{d, r}];
    if (!slot) slot = std::make_shared<IndexTable>(d, r);
    return slot;
  }

private:
  unsigned d_, r_;
  std::vector<MultiIndex> list_;
  std::map<MultiIndex, std::size_t> pos_;
};

inline std::uint64_t factorial(unsigned n) {
  std::uint64_t r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Product of the entrywise factorials q_1! ... q_d!.
inline std::uint64_t multinomial_denominator(const MultiIndex& q) {
  std::uint64_t r = 1;
  for (unsigned e : q) r *= factorial(e);
  return r;
}

} // namespace perjet

#endif
