#pragma once

// Hilbert series of monomial ideals and the affine dimension/degree read
// off them.
//
// For a monomial ideal M in n variables the Hilbert series is N(t)/(1-t)^n.
// Summing the Hilbert function up to degree s (the affine Hilbert function)
// divides by one more (1-t). Writing N(t) = (1-t)^k Q(t) with Q(1) != 0, the
// affine Hilbert polynomial has degree n-k and leading coefficient
// Q(1)/(n-k)!, so dimension = n-k and degree = Q(1).

#include "dlocus/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dlocus {

/// Dense integer polynomial in t, index = exponent.
using HilbertNumerator = std::vector<std::int64_t>;

struct DimensionDegree {
  int dimension = -1;  // -1 for the unit ideal
  std::int64_t degree = 0;
  friend bool operator==(const DimensionDegree&, const DimensionDegree&) = default;
};

namespace detail {

inline void trim(HilbertNumerator& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline HilbertNumerator poly_mul(const HilbertNumerator& a, const HilbertNumerator& b) {
  if (a.empty() || b.empty()) return {};
  HilbertNumerator r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline HilbertNumerator one_minus_t_pow(unsigned d) {
  HilbertNumerator r(d + 1, 0);
  r[0] += 1;
  r[d] -= 1;
  trim(r);
  return r;
}

/// Drops generators divisible by another; duplicates collapse.
inline std::vector<Monomial> minimalize(std::vector<Monomial> gens) {
  std::sort(gens.begin(), gens.end(), [](const Monomial& a, const Monomial& b) {
    return a.deg != b.deg ? a.deg < b.deg : a.exp < b.exp;
  });
  std::vector<Monomial> out;
  for (const auto& g : gens) {
    bool redundant = std::any_of(out.begin(), out.end(), [&](const Monomial& m) { return divides(m, g); });
    if (!redundant) out.push_back(g);
  }
  return out;
}

inline HilbertNumerator numerator(std::vector<Monomial> gens, int nvars) {
  gens = minimalize(std::move(gens));
  if (gens.empty()) return {1};

  // base case: pairwise coprime generators contribute independently
  std::vector<std::uint64_t> masks;
  for (const auto& g : gens) masks.push_back(g.support_mask());
  std::vector<int> count(static_cast<std::size_t>(nvars), 0);
  for (auto m : masks)
    for (int v = 0; v < nvars; ++v)
      if (m >> v & 1u) ++count[static_cast<std::size_t>(v)];
  int pivot_var = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
  if (count[static_cast<std::size_t>(pivot_var)] <= 1) {
    HilbertNumerator r{1};
    for (const auto& g : gens) r = poly_mul(r, one_minus_t_pow(g.deg));
    return r;
  }

  // pivot p = v^e with e the smallest positive exponent of v; p is not in M
  // because M is minimal and v occurs in at least two generators
  unsigned e = 255;
  for (const auto& g : gens)
    if (g[pivot_var]) e = std::min<unsigned>(e, g[pivot_var]);
  Monomial p;
  p.set(pivot_var, e);

  // N(M) = N(M + p) + t^e N(M : p)
  auto with_p = gens;
  with_p.push_back(p);
  std::vector<Monomial> colon;
  for (const auto& g : gens) {
    Monomial q = g;
    q.set(pivot_var, g[pivot_var] > e ? g[pivot_var] - e : 0u);
    colon.push_back(q);
  }
  auto a = numerator(std::move(with_p), nvars);
  auto b = numerator(std::move(colon), nvars);
  HilbertNumerator r(std::max(a.size(), b.size() + e), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i + e] += b[i];
  trim(r);
  return r;
}

}  // namespace detail

/// Numerator N(t) of the Hilbert series N(t)/(1-t)^n of the monomial ideal
/// generated by `gens` in `nvars` variables.
inline HilbertNumerator hilbert_numerator(const std::vector<Monomial>& gens, int nvars) {
  if (nvars < 0 || nvars > kMaxVars) throw std::invalid_argument("bad variable count");
  return detail::numerator(gens, nvars);
}

/// Affine dimension and degree of the monomial ideal (the leading-term ideal
/// of a degree-compatible Groebner basis).
inline DimensionDegree monomial_dimension_degree(const std::vector<Monomial>& gens, int nvars) {
  auto N = hilbert_numerator(gens, nvars);
  if (N.empty()) return {-1, 0};
  int k = 0;
  // synthetic division by (1 - t) while t = 1 is a root
  while (true) {
    std::int64_t at_one = 0;
    for (auto c : N) at_one += c;
    if (at_one != 0) return {nvars - k, at_one};
    HilbertNumerator q(N.size() - 1, 0);
    // N = (1 - t) q  =>  q_i = sum_{j<=i} N_j
    std::int64_t acc = 0;
    for (std::size_t i = 0; i + 1 < N.size(); ++i) {
      acc += N[i];
      q[i] = acc;
    }
    N = std::move(q);
    detail::trim(N);
    ++k;
  }
}

}  // namespace dlocus
