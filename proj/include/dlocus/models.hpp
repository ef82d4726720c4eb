#pragma once

// Builders for the example varieties: determinantal and Hankel matrices,
// the rational normal surface, Cayley-Menger distance varieties and 2x2x3
// tensors of bounded rank. Each model carries its subvarieties A (always
// X plus extra generators), a recommended Gamma family, a sampler producing
// points of X, and the expected data-locus invariants where they are known.

#include "dlocus/geometry.hpp"
#include "dlocus/poly_io.hpp"

#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlocus {

class ModelError : public std::invalid_argument {
 public:
  explicit ModelError(const std::string& what) : std::invalid_argument(what) {}
};

/// Known invariants of a data locus. `stretch` marks results too expensive
/// for routine verification.
struct Expectation {
  std::optional<int> codimension;
  std::optional<std::int64_t> degree;
  std::optional<std::size_t> generators;
  std::optional<std::string> equals;  // a generator list in the u ring
  bool stretch = false;
};

template <class Field>
struct Subvariety {
  std::string name;
  std::vector<Polynomial<Field>> extra;  // added to the generators of X
  Ideal<Field> ideal;
  Expectation expected;
};

template <class Field>
struct VarietyModel {
  using Scalar = typename Field::value_type;

  std::string name;
  RingPtr<Field> ring;  // x block only
  Ideal<Field> X;
  std::vector<Subvariety<Field>> subvarieties;
  std::string gamma = "unit_ed";  // weighted_ed, unit_ed, hadamard_ml or water_filling
  std::optional<std::vector<Scalar>> weights;
  std::vector<std::string> notes;
  std::function<std::vector<Scalar>(std::mt19937_64&)> sample;  // random points of X

  Ambient<Field> ambient() const { return Ambient<Field>::of(ring); }

  const Subvariety<Field>& subvariety(const std::string& which = "") const {
    if (subvarieties.empty()) throw ModelError("model " + name + " has no subvariety");
    if (which.empty()) return subvarieties.front();
    for (const auto& s : subvarieties)
      if (s.name == which) return s;
    throw ModelError("model " + name + " has no subvariety named " + which);
  }

  GammaFamily<Field> recommended_gamma() const {
    auto amb = ambient();
    if (gamma == "weighted_ed") return gamma::weighted_ed(amb, *weights);
    if (gamma == "hadamard_ml") return gamma::hadamard_ml(amb);
    if (gamma == "water_filling") return gamma::water_filling(amb);
    return gamma::unit_ed(amb);
  }
};

namespace detail {

template <class Field>
VarietyModel<Field> start_model(std::string name, RingPtr<Field> ring) {
  auto X = Ideal<Field>::zero(ring);
  return VarietyModel<Field>{std::move(name), std::move(ring), std::move(X), {}, "unit_ed", {}, {}, {}};
}

inline std::string matrix_entry(int i, int j, char letter = 'x') {
  return letter + std::to_string(i) + std::to_string(j);
}

inline std::vector<std::string> matrix_names(int m, int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) names.push_back(matrix_entry(i, j));
  return names;
}

template <class Field>
PolyMatrix<Field> generic_matrix(const RingPtr<Field>& R, int m, int n, char letter = 'x') {
  std::vector<std::vector<Polynomial<Field>>> rows(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      rows[static_cast<std::size_t>(i - 1)].push_back(Polynomial<Field>::variable(R, matrix_entry(i, j, letter)));
  return PolyMatrix<Field>::from_rows(rows);
}

template <class Field>
std::vector<Polynomial<Field>> minors_or_empty(const PolyMatrix<Field>& M, int k) {
  if (k > M.rows() || k > M.cols()) return {};
  return M.minors(k);
}

template <class Field>
Subvariety<Field> make_subvariety(const Ideal<Field>& X, std::string name, std::vector<Polynomial<Field>> extra,
                                  Expectation expected = {}) {
  auto ideal = ideal_sum(X, extra);
  return {std::move(name), std::move(extra), std::move(ideal), std::move(expected)};
}

/// Row-major entries of a random m x n matrix of rank at most r.
template <class Field>
std::vector<typename Field::value_type> random_low_rank(const Field& F, int m, int n, int r, std::mt19937_64& rng) {
  using Scalar = typename Field::value_type;
  std::vector<Scalar> out(static_cast<std::size_t>(m * n), F.zero());
  for (int k = 0; k < r; ++k) {
    std::vector<Scalar> a, b;
    for (int i = 0; i < m; ++i) a.push_back(F.random(rng));
    for (int j = 0; j < n; ++j) b.push_back(F.random(rng));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        auto& e = out[static_cast<std::size_t>(i * n + j)];
        e = F.add(e, F.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]));
      }
  }
  return out;
}

inline std::vector<int> parse_int_args(const std::string& args) {
  std::vector<int> out;
  if (args.empty()) return out;
  std::stringstream ss(args);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ModelError("bad model argument '" + part + "'");
    }
  }
  return out;
}

}  // namespace detail

namespace models {

/// m x n matrices of rank <= r, with the subvariety of rank <= q.
template <class Field>
VarietyModel<Field> determinantal(int m, int n, int r, int q, Field field = Field{}) {
  if (m < 1 || n < 1 || m > 9 || n > 9) throw ModelError("determinantal model needs 1 <= m, n <= 9");
  if (q < 0 || q > r || r >= std::min(m, n)) throw ModelError("determinantal model needs 0 <= q <= r < min(m, n)");
  auto model = detail::start_model<Field>(
      "det(" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(r) + "," + std::to_string(q) + ")",
      Ring<Field>::from_blocks(field, {{Block::x, detail::matrix_names(m, n)}}));
  auto M = detail::generic_matrix(model.ring, m, n);
  model.X = Ideal<Field>(model.ring, detail::minors_or_empty(M, r + 1));
  Expectation e;
  // the data locus is the rank <= min(m, n) - r + q variety
  int rank = std::min(m, n) - r + q;
  if (m == n && rank == n - 1) {
    e.equals = detail::generic_matrix(model.ambient().u(), m, n, 'u').determinant().normalized().to_string();
    e.codimension = 1;
    e.degree = n;
    e.generators = 1;
  }
  e.stretch = m * n > 4;
  auto extra = q == r ? std::vector<Polynomial<Field>>{} : detail::minors_or_empty(M, q + 1);
  auto sub = detail::make_subvariety(model.X, "rank" + std::to_string(q), std::move(extra), e);
  model.subvarieties.push_back(std::move(sub));
  model.notes.push_back("data locus of rank <= " + std::to_string(q) + ": matrices of rank <= " + std::to_string(rank));
  model.sample = [field, m, n, r](std::mt19937_64& rng) { return detail::random_low_rank(field, m, n, r, rng); };
  return model;
}

/// Closure of (t1^3, t1^2 t2, t1 t2^2, t2^3) with the moment curve x1 = 1.
template <class Field>
VarietyModel<Field> rational_normal_surface(Field field = Field{}) {
  auto model = detail::start_model<Field>("rational_normal_surface",
                                          Ring<Field>::from_blocks(field, {{Block::x, {"x1", "x2", "x3", "x4"}}}));
  model.X = Ideal<Field>(model.ring, parse_polynomial_list(model.ring, "x3^2-x2*x4, x2*x3-x1*x4, x2^2-x1*x3"));
  Expectation e;
  e.codimension = 1;
  e.degree = 7;
  e.generators = 1;
  model.subvarieties.push_back(
      detail::make_subvariety(model.X, "moment_curve", {parse_polynomial(model.ring, "x1-1")}, e));
  model.gamma = "weighted_ed";
  model.weights = std::vector<typename Field::value_type>{field.from_int(1), field.from_int(3), field.from_int(3),
                                                           field.from_int(1)};
  model.notes.push_back("weights are the binomial coefficients (1, 3, 3, 1)");
  model.notes.push_back("data locus of the moment curve: a hypersurface of degree 7");
  model.sample = [field](std::mt19937_64& rng) {
    auto s = field.random(rng), t = field.random(rng);
    return std::vector<typename Field::value_type>{field.mul(s, field.mul(s, s)), field.mul(field.mul(s, s), t),
                                                   field.mul(s, field.mul(t, t)), field.mul(t, field.mul(t, t))};
  };
  return model;
}

/// n x n matrices of rank <= r; the subvariety forces the Hankel pattern
/// (entry (i, j) depends only on i + j).
template <class Field>
VarietyModel<Field> hankel(int n, int r, Field field = Field{}) {
  if (n < 2 || n > 9 || r < 1 || r >= n) throw ModelError("hankel model needs 2 <= n <= 9 and 1 <= r < n");
  auto model = detail::start_model<Field>("hankel(" + std::to_string(n) + "," + std::to_string(r) + ")",
                                          Ring<Field>::from_blocks(field, {{Block::x, detail::matrix_names(n, n)}}));
  auto M = detail::generic_matrix(model.ring, n, n);
  model.X = Ideal<Field>(model.ring, detail::minors_or_empty(M, r + 1));
  std::vector<Polynomial<Field>> extra;
  for (int s = 3; s <= 2 * n - 1; ++s) {
    // consecutive entries along the anti-diagonal i + j = s
    std::optional<Polynomial<Field>> prev;
    for (int i = 1; i <= n; ++i) {
      int j = s - i;
      if (j < 1 || j > n) continue;
      auto v = Polynomial<Field>::variable(model.ring, detail::matrix_entry(i, j));
      if (prev) extra.push_back(*prev - v);
      prev = v;
    }
  }
  Expectation e;
  if (n == 3 && r == 1) {
    e.codimension = 1;
    e.degree = 3;
    e.generators = 1;
  }
  e.stretch = true;
  model.subvarieties.push_back(detail::make_subvariety(model.X, "hankel", std::move(extra), e));
  model.notes.push_back("subvariety: rank <= " + std::to_string(r) + " Hankel matrices inside the full matrix space");
  model.sample = [field, n, r](std::mt19937_64& rng) { return detail::random_low_rank(field, n, n, r, rng); };
  return model;
}

/// Squared distances x_ij = |p_i - p_j|^2 of p points realizable in
/// dimension d: the (d+1)-minors of the (p-1) x (p-1) Cayley-Menger matrix
/// with entries x_ip + x_jp - x_ij (2 x_ip on the diagonal), point p as base.
template <class Field>
VarietyModel<Field> cayley_menger(int p, int d, Field field = Field{}) {
  if (p < 3 || p > 9 || d < 1) throw ModelError("cayley_menger model needs 3 <= p <= 9 and d >= 1");
  using Poly = Polynomial<Field>;
  std::vector<std::string> names;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) names.push_back(detail::matrix_entry(i, j));
  auto model = detail::start_model<Field>("cayley_menger(" + std::to_string(p) + "," + std::to_string(d) + ")",
                                          Ring<Field>::from_blocks(field, {{Block::x, names}}));
  const auto& R = model.ring;
  auto dist = [&](int i, int j) {
    if (i == j) return Poly(R);
    return Poly::variable(R, detail::matrix_entry(std::min(i, j), std::max(i, j)));
  };
  std::vector<std::vector<Poly>> rows(static_cast<std::size_t>(p - 1));
  for (int i = 1; i < p; ++i)
    for (int j = 1; j < p; ++j) rows[static_cast<std::size_t>(i - 1)].push_back(dist(i, p) + dist(j, p) - dist(i, j));
  auto CM = PolyMatrix<Field>::from_rows(rows);
  model.X = Ideal<Field>(R, detail::minors_or_empty(CM, d + 1));
  if (p == 4 && d == 2) {
    Expectation e;
    e.codimension = 3;
    e.degree = 13;
    e.generators = 26;
    e.stretch = true;
    model.subvarieties.push_back(
        detail::make_subvariety(model.X, "square", parse_polynomial_list(R, "x12-x23, x23-x34, x34-x14"), e));
    model.notes.push_back("subvariety: equal side lengths x12 = x23 = x34 = x14");
  }
  model.sample = [field, p, d](std::mt19937_64& rng) {
    using Scalar = typename Field::value_type;
    std::vector<std::vector<Scalar>> pts(static_cast<std::size_t>(p));
    for (auto& pt : pts)
      for (int k = 0; k < d; ++k) pt.push_back(field.random(rng));
    std::vector<Scalar> out;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        Scalar s = field.zero();
        for (int k = 0; k < d; ++k) {
          auto diff = field.sub(pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
          s = field.add(s, field.mul(diff, diff));
        }
        out.push_back(s);
      }
    return out;
  };
  return model;
}

namespace detail_tensor {

inline std::string entry(int i, int j, int k) {
  return "x" + std::to_string(i) + std::to_string(j) + std::to_string(k);
}

/// The three flattenings of a 2 x 2 x 3 tensor: modes 1 and 2 give 2 x 6
/// matrices, mode 3 gives a 3 x 4 matrix.
template <class Field>
std::vector<PolyMatrix<Field>> flattenings(const RingPtr<Field>& R) {
  using Poly = Polynomial<Field>;
  auto v = [&](int i, int j, int k) { return Poly::variable(R, entry(i, j, k)); };
  std::vector<std::vector<Poly>> m1(2), m2(2), m3(3);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 3; ++k) {
        m1[static_cast<std::size_t>(i - 1)].push_back(v(i, j, k));
        m2[static_cast<std::size_t>(j - 1)].push_back(v(i, j, k));
        m3[static_cast<std::size_t>(k - 1)].push_back(v(i, j, k));
      }
  return {PolyMatrix<Field>::from_rows(m1), PolyMatrix<Field>::from_rows(m2), PolyMatrix<Field>::from_rows(m3)};
}

}  // namespace detail_tensor

/// 2 x 2 x 3 tensors whose flattenings have rank <= 2, with the subvarieties
/// of the singular locus (mode-2 and mode-3 flattenings of rank <= 1) and of
/// rank-one tensors.
template <class Field>
VarietyModel<Field> tensor223(Field field = Field{}) {
  std::vector<std::string> names;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 3; ++k) names.push_back(detail_tensor::entry(i, j, k));
  auto model = detail::start_model<Field>("tensor223", Ring<Field>::from_blocks(field, {{Block::x, names}}));
  auto flats = detail_tensor::flattenings(model.ring);
  std::vector<Polynomial<Field>> rk2, sing, rk1;
  for (std::size_t f = 0; f < flats.size(); ++f) {
    for (auto& m : detail::minors_or_empty(flats[f], 3)) rk2.push_back(m);
    for (auto& m : detail::minors_or_empty(flats[f], 2)) {
      rk1.push_back(m);
      if (f != 0) sing.push_back(m);
    }
  }
  model.X = Ideal<Field>(model.ring, rk2);
  Expectation sing_expected;
  sing_expected.stretch = true;
  sing_expected.codimension = model.X.codimension();
  model.subvarieties.push_back(detail::make_subvariety(model.X, "sing_rank2", sing, sing_expected));
  Expectation rk1_expected;
  rk1_expected.codimension = 3;
  rk1_expected.degree = 40;
  rk1_expected.generators = 10;
  rk1_expected.stretch = true;
  model.subvarieties.push_back(detail::make_subvariety(model.X, "rank1", rk1, rk1_expected));
  model.notes.push_back("data locus of sing_rank2 is expected to be the rank <= 2 variety itself");
  model.sample = [field](std::mt19937_64& rng) {
    using Scalar = typename Field::value_type;
    std::vector<Scalar> out(12, field.zero());
    for (int term = 0; term < 2; ++term) {
      Scalar a[2], b[2], c[3];
      for (auto& s : a) s = field.random(rng);
      for (auto& s : b) s = field.random(rng);
      for (auto& s : c) s = field.random(rng);
      std::size_t idx = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 3; ++k, ++idx) out[idx] = field.add(out[idx], field.mul(a[i], field.mul(b[j], c[k])));
    }
    return out;
  };
  return model;
}

/// Model from "name" or "name:a,b,...": det:m,n,r,q | surface |
/// hankel:n,r | cayley_menger:p,d | tensor223.
template <class Field>
VarietyModel<Field> by_name(const std::string& spec, Field field = Field{}) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  auto args = detail::parse_int_args(colon == std::string::npos ? "" : spec.substr(colon + 1));
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw ModelError("model " + name + " takes " + std::to_string(k) + " arguments, got " + std::to_string(args.size()));
  };
  if (name == "det") {
    need(4);
    return determinantal(args[0], args[1], args[2], args[3], field);
  }
  if (name == "surface" || name == "rational_normal_surface") {
    need(0);
    return rational_normal_surface(field);
  }
  if (name == "hankel") {
    need(2);
    return hankel(args[0], args[1], field);
  }
  if (name == "cayley_menger" || name == "cm") {
    need(2);
    return cayley_menger(args[0], args[1], field);
  }
  if (name == "tensor223") {
    need(0);
    return tensor223(field);
  }
  throw ModelError("unknown model '" + name + "'");
}

}  // namespace models
}  // namespace dlocus
