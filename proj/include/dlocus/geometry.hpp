#pragma once

// Data loci of parametric optimization problems on an affine variety X.
//
// Coordinates come in three blocks of equal length n: points x of X, dual
// (gradient) vectors y and data parameters u. A Gamma family is the rational
// map u = Gamma(x, y) inverting the gradient of the objective d_u. The data
// locus of a subvariety A of X is the closure of the u-projection of
//
//   { (x, y, u) : x in A, (x, y) in Con(X), u = Gamma(x, y) },
//
// computed either with explicit y variables or, when Gamma can be solved for
// y = phi(x, u), directly in the (x, u) ring by a rank condition on the
// Jacobian of X augmented with the row phi.

#include "dlocus/ideals.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlocus {

class NoSubstitutionForm : public std::invalid_argument {
 public:
  explicit NoSubstitutionForm(const std::string& family)
      : std::invalid_argument("gamma family '" + family + "' has no substitution form y = phi(x, u)") {}
};

class SubvarietyViolation : public std::invalid_argument {
 public:
  SubvarietyViolation() : std::invalid_argument("the subvariety A is not contained in X") {}
};

class NotCompleteIntersection : public std::invalid_argument {
 public:
  NotCompleteIntersection(std::size_t gens, int codim)
      : std::invalid_argument("Lagrange equations need a complete intersection, got " + std::to_string(gens) +
                              " generators for codimension " + std::to_string(codim)) {}
};

class PointNotOnVariety : public std::invalid_argument {
 public:
  explicit PointNotOnVariety(const std::string& what) : std::invalid_argument(what) {}
};

class PointInForbiddenLocus : public std::invalid_argument {
 public:
  PointInForbiddenLocus() : std::invalid_argument("Gamma is undefined at the point (it lies on H)") {}
};

enum class Pipeline { substituted, explicit_y };

inline const char* pipeline_name(Pipeline p) { return p == Pipeline::substituted ? "substituted" : "explicit"; }

/// Names of the companion variables of an x-variable: x11 -> y11, u11.
inline std::string companion_name(const std::string& xname, char letter) {
  if (!xname.empty() && xname[0] == 'x') return letter + xname.substr(1);
  return std::string(1, letter) + "_" + xname;
}

/// The x, y and u coordinates of one problem and the rings built from them.
/// Every ring uses grevlex with blocks in the order x, y, u.
template <class Field>
class Ambient {
 public:
  Ambient(Field field, std::vector<std::string> x_names) : field_(std::move(field)), x_(std::move(x_names)) {
    if (x_.empty()) throw std::invalid_argument("ambient space needs at least one x variable");
    for (const auto& name : x_) {
      y_.push_back(companion_name(name, 'y'));
      u_.push_back(companion_name(name, 'u'));
    }
    x_ring_ = Ring<Field>::from_blocks(field_, {{Block::x, x_}});
    u_ring_ = Ring<Field>::from_blocks(field_, {{Block::u, u_}});
    xy_ = Ring<Field>::from_blocks(field_, {{Block::x, x_}, {Block::y, y_}});
    xu_ = Ring<Field>::from_blocks(field_, {{Block::x, x_}, {Block::u, u_}});
    xyu_ = Ring<Field>::from_blocks(field_, {{Block::x, x_}, {Block::y, y_}, {Block::u, u_}});
  }

  /// The ambient space of the x block of `ring`.
  static Ambient of(const RingPtr<Field>& ring) {
    std::vector<std::string> names;
    for (int i : ring->indices_of(Block::x)) names.push_back(ring->variable(i).name);
    if (names.empty()) throw std::invalid_argument("ring has no x block");
    return Ambient(ring->field(), std::move(names));
  }

  int n() const { return static_cast<int>(x_.size()); }
  const Field& field() const { return field_; }
  const std::vector<std::string>& x_names() const { return x_; }
  const std::vector<std::string>& y_names() const { return y_; }
  const std::vector<std::string>& u_names() const { return u_; }

  const RingPtr<Field>& x() const { return x_ring_; }
  const RingPtr<Field>& u() const { return u_ring_; }
  const RingPtr<Field>& xy() const { return xy_; }
  const RingPtr<Field>& xu() const { return xu_; }
  const RingPtr<Field>& xyu() const { return xyu_; }

 private:
  Field field_;
  std::vector<std::string> x_, y_, u_;
  RingPtr<Field> x_ring_, u_ring_, xy_, xu_, xyu_;
};

template <class Field>
struct RationalFunction {
  Polynomial<Field> num, den;
};

namespace detail {

/// p with each variable vars[j] replaced by nums[j]/dens[j], multiplied by
/// prod dens[j]^D[j] where D[j] is the degree of p in vars[j].
template <class Field>
Polynomial<Field> compose_cleared(const Polynomial<Field>& p, const std::vector<int>& vars,
                                  const std::vector<Polynomial<Field>>& nums,
                                  const std::vector<Polynomial<Field>>& dens, std::vector<unsigned> bounds = {}) {
  using Poly = Polynomial<Field>;
  if (bounds.empty())
    for (int v : vars) bounds.push_back(static_cast<unsigned>(p.degree_in(v)));
  std::map<std::pair<std::size_t, unsigned>, Poly> num_pow, den_pow;
  auto power = [](std::map<std::pair<std::size_t, unsigned>, Poly>& cache, const Poly& base, std::size_t j,
                  unsigned e) -> const Poly& {
    auto key = std::make_pair(j, e);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, base.pow(e)).first;
    return it->second;
  };
  Poly out(nums.front().ring());
  for (const auto& t : p.terms()) {
    Monomial rest = t.mono;
    for (int v : vars) rest.set(v, 0);
    auto term = Poly::monomial(out.ring(), rest, t.coeff);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      unsigned e = t.mono[vars[j]];
      if (e) term *= power(num_pow, nums[j], j, e);
      if (bounds[j] > e) term *= power(den_pow, dens[j], j, bounds[j] - e);
    }
    out += term;
  }
  return out;
}

/// Product of the distinct nonconstant polynomials in `fs` (1 if none).
template <class Field>
Polynomial<Field> distinct_product(const RingPtr<Field>& ring, const std::vector<Polynomial<Field>>& fs) {
  auto prod = Polynomial<Field>::constant(ring, 1);
  std::vector<Polynomial<Field>> seen;
  for (const auto& f : fs) {
    if (f.is_constant()) continue;
    auto g = f.monic();
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    prod *= g;
  }
  return prod;
}

template <class Field>
std::vector<Polynomial<Field>> nonconstant(const std::vector<Polynomial<Field>>& fs) {
  std::vector<Polynomial<Field>> out;
  for (const auto& f : fs)
    if (!f.is_constant()) out.push_back(f);
  return out;
}

template <class Field>
std::vector<Polynomial<Field>> mapped(const std::vector<Polynomial<Field>>& fs, const RingPtr<Field>& ring) {
  std::vector<Polynomial<Field>> out;
  for (const auto& f : fs) out.push_back(f.map_to(ring));
  return out;
}

template <class Field>
std::map<std::string, typename Field::value_type> named_point(const std::vector<std::string>& names,
                                                             const std::vector<typename Field::value_type>& values) {
  if (names.size() != values.size()) throw SizeError("point has the wrong number of coordinates");
  std::map<std::string, typename Field::value_type> pt;
  for (std::size_t i = 0; i < names.size(); ++i) pt.emplace(names[i], values[i]);
  return pt;
}

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// A rational inverse-gradient map u = Gamma(x, y), regular off V(prod H).
template <class Field>
struct GammaFamily {
  using Scalar = typename Field::value_type;
  using Poly = Polynomial<Field>;

  std::string name;
  RingPtr<Field> ring;  // the x, y, u ring of an Ambient
  std::vector<RationalFunction<Field>> components;  // over x, y
  std::vector<Poly> forbidden;  // H; contains every denominator locus
  std::optional<std::vector<RationalFunction<Field>>> substitution;  // y = phi(x, u)
  std::string objective;
  std::optional<std::vector<Scalar>> weights;

  int n() const { return static_cast<int>(components.size()); }

  /// Throws unless the structural invariants hold.
  void validate() const {
    auto xs = ring->indices_of(Block::x), ys = ring->indices_of(Block::y), us = ring->indices_of(Block::u);
    if (static_cast<int>(xs.size()) != n()) throw SizeError("gamma needs one component per x variable");
    auto xy = xs;
    xy.insert(xy.end(), ys.begin(), ys.end());
    auto xu = xs;
    xu.insert(xu.end(), us.begin(), us.end());
    for (const auto& c : components) {
      if (c.den.is_zero()) throw DivisionByZero();
      if (!c.num.uses_only(xy) || !c.den.uses_only(xy)) throw std::invalid_argument("gamma components must use only x and y");
    }
    for (const auto& h : forbidden)
      if (!h.uses_only(xy)) throw std::invalid_argument("H must use only x and y");
    if (substitution) {
      if (static_cast<int>(substitution->size()) != n()) throw SizeError("phi needs one component per y variable");
      for (const auto& c : *substitution) {
        if (c.den.is_zero()) throw DivisionByZero();
        if (!c.num.uses_only(xu) || !c.den.uses_only(xu)) throw std::invalid_argument("phi must use only x and u");
      }
    }
  }

  /// Every denominator vanishes only where some generator of H vanishes.
  bool denominators_inside_forbidden_locus() const {
    auto prod = detail::distinct_product(ring, forbidden);
    for (const auto& c : components) {
      if (c.den.is_constant()) continue;
      if (!radical_membership(prod, Ideal<Field>(ring, {c.den}))) return false;
    }
    return true;
  }

  /// phi(x, Gamma(x, y)) == y after clearing denominators.
  bool round_trip_holds() const {
    if (!substitution) throw NoSubstitutionForm(name);
    auto us = ring->indices_of(Block::u), ys = ring->indices_of(Block::y);
    std::vector<Poly> nums, dens;
    for (const auto& c : components) {
      nums.push_back(c.num);
      dens.push_back(c.den);
    }
    for (std::size_t i = 0; i < substitution->size(); ++i) {
      const auto& phi = (*substitution)[i];
      std::vector<unsigned> bounds;
      for (int u : us) bounds.push_back(static_cast<unsigned>(std::max(phi.num.degree_in(u), phi.den.degree_in(u))));
      auto top = detail::compose_cleared(phi.num, us, nums, dens, bounds);
      auto bottom = detail::compose_cleared(phi.den, us, nums, dens, bounds);
      if (bottom.is_zero() || top != Poly::variable(ring, ys[i]) * bottom) return false;
    }
    return true;
  }

  /// Gamma's denominators together with H, as polynomials in x, y.
  std::vector<Poly> undefined_locus() const {
    auto out = forbidden;
    for (const auto& c : components) out.push_back(c.den);
    return detail::nonconstant(out);
  }
};

namespace gamma {

/// Weighted Euclidean distance sum w_i (u_i - x_i)^2 / 2:
/// u_i = x_i + y_i / w_i, y_i = w_i (u_i - x_i).
template <class Field>
GammaFamily<Field> weighted_ed(const Ambient<Field>& amb, std::vector<typename Field::value_type> w) {
  using Poly = Polynomial<Field>;
  if (static_cast<int>(w.size()) != amb.n()) throw SizeError("weighted_ed needs one weight per coordinate");
  const auto& F = amb.field();
  const auto& R = amb.xyu();
  GammaFamily<Field> g;
  g.name = "weighted_ed";
  g.ring = R;
  g.objective = "sum_i w_i (u_i - x_i)^2";
  std::vector<RationalFunction<Field>> phi;
  for (int i = 0; i < amb.n(); ++i) {
    if (F.is_zero(w[static_cast<std::size_t>(i)])) throw DivisionByZero();
    auto wi = Poly::constant(R, w[static_cast<std::size_t>(i)]);
    auto x = Poly::variable(R, amb.x_names()[static_cast<std::size_t>(i)]);
    auto y = Poly::variable(R, amb.y_names()[static_cast<std::size_t>(i)]);
    auto u = Poly::variable(R, amb.u_names()[static_cast<std::size_t>(i)]);
    g.components.push_back({wi * x + y, wi});
    phi.push_back({wi * (u - x), Poly::constant(R, 1)});
  }
  g.substitution = std::move(phi);
  g.weights = std::move(w);
  return g;
}

template <class Field>
GammaFamily<Field> unit_ed(const Ambient<Field>& amb) {
  auto g = weighted_ed(amb, std::vector<typename Field::value_type>(static_cast<std::size_t>(amb.n()), amb.field().one()));
  g.name = "unit_ed";
  g.objective = "sum_i (u_i - x_i)^2";
  return g;
}

/// Likelihood sum u_i log x_i - sum x_i style objective: u_i = x_i y_i.
/// No substitution form; H = x_1 ... x_n.
template <class Field>
GammaFamily<Field> hadamard_ml(const Ambient<Field>& amb) {
  using Poly = Polynomial<Field>;
  const auto& R = amb.xyu();
  GammaFamily<Field> g;
  g.name = "hadamard_ml";
  g.ring = R;
  g.objective = "sum_i u_i log x_i";
  auto prod = Poly::constant(R, 1);
  for (int i = 0; i < amb.n(); ++i) {
    auto x = Poly::variable(R, amb.x_names()[static_cast<std::size_t>(i)]);
    auto y = Poly::variable(R, amb.y_names()[static_cast<std::size_t>(i)]);
    g.components.push_back({x * y, Poly::constant(R, 1)});
    prod *= x;
  }
  g.forbidden = {prod};
  return g;
}

/// Water filling sum log(u_i + x_i): u_i = 1/y_i - x_i, y_i = 1/(u_i + x_i);
/// H = y_1 ... y_n.
template <class Field>
GammaFamily<Field> water_filling(const Ambient<Field>& amb) {
  using Poly = Polynomial<Field>;
  const auto& R = amb.xyu();
  GammaFamily<Field> g;
  g.name = "water_filling";
  g.ring = R;
  g.objective = "sum_i log(u_i + x_i)";
  auto one = Poly::constant(R, 1);
  auto prod = one;
  std::vector<RationalFunction<Field>> phi;
  for (int i = 0; i < amb.n(); ++i) {
    auto x = Poly::variable(R, amb.x_names()[static_cast<std::size_t>(i)]);
    auto y = Poly::variable(R, amb.y_names()[static_cast<std::size_t>(i)]);
    auto u = Poly::variable(R, amb.u_names()[static_cast<std::size_t>(i)]);
    g.components.push_back({one - x * y, y});
    phi.push_back({one, u + x});
    prod *= y;
  }
  g.forbidden = {prod};
  g.substitution = std::move(phi);
  return g;
}

/// User-defined family; polynomials are mapped into the ambient x, y, u ring.
template <class Field>
GammaFamily<Field> custom(const Ambient<Field>& amb, std::string name, std::vector<RationalFunction<Field>> components,
                          std::vector<Polynomial<Field>> forbidden,
                          std::optional<std::vector<RationalFunction<Field>>> substitution = {}) {
  const auto& R = amb.xyu();
  GammaFamily<Field> g;
  g.name = std::move(name);
  g.ring = R;
  g.objective = "user defined";
  for (auto& c : components) g.components.push_back({c.num.map_to(R), c.den.map_to(R)});
  g.forbidden = detail::mapped(forbidden, R);
  if (substitution) {
    std::vector<RationalFunction<Field>> phi;
    for (auto& c : *substitution) phi.push_back({c.num.map_to(R), c.den.map_to(R)});
    g.substitution = std::move(phi);
  }
  g.validate();
  if (!g.denominators_inside_forbidden_locus())
    throw std::invalid_argument("every denominator of gamma must vanish only on H");
  return g;
}

}  // namespace gamma

/// X + the c x c minors of its Jacobian (c = codim X). Assumes the
/// generators of X generate a radical ideal.
template <class Field>
Ideal<Field> singular_locus(const Ideal<Field>& X) {
  if (X.is_unit()) throw std::invalid_argument("singular locus of the empty variety");
  int c = X.codimension();
  const auto& R = X.ring();
  if (c == 0) return Ideal<Field>::unit(R);
  auto xs = R->indices_of(Block::x);
  if (xs.empty()) xs = [&] {
    std::vector<int> all(static_cast<std::size_t>(R->nvars()));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }();
  auto gens = X.nonzero_generators();
  auto jac = jacobian(gens, xs);
  // fewer than c generators cannot cut out codimension c reducedly; then
  // every point is singular and the minors are empty
  if (c <= jac.rows() && c <= jac.cols())
    for (auto& m : jac.minors(c))
      if (!m.is_zero()) gens.push_back(std::move(m));
  return Ideal<Field>(R, std::move(gens));
}

/// How the rank condition on [Jac X; row] is imposed. all_minors uses
/// every (c+1)-minor and removes Sing X by saturation. charts covers the
/// regular locus by c x c minors m_k of Jac X and, on each chart, uses only
/// the minors bordering m_k before saturating by m_k. The results agree when
/// X is equidimensional; charts needs far fewer generators.
enum class RankMethod { all_minors, charts };

inline const char* rank_method_name(RankMethod m) { return m == RankMethod::charts ? "charts" : "all-minors"; }

template <class Field>
struct ConormalIdeal {
  Ideal<Field> ideal;   // in the x, y ring
  Ideal<Field> source;  // X
  int codim = 0;

  int dimension() const { return ideal.dimension(); }
};

namespace detail {

/// X mapped to `ring` plus the (c+1)-minors of its Jacobian (w.r.t. the x
/// block of `ring`) augmented with `row`.
template <class Field>
std::vector<Polynomial<Field>> rank_condition(const Ideal<Field>& X, int c, const RingPtr<Field>& ring,
                                              const std::vector<Polynomial<Field>>& row) {
  auto gens = mapped(X.nonzero_generators(), ring);
  auto jac = jacobian(gens, ring->indices_of(Block::x)).with_row(row);
  auto out = gens;
  if (c + 1 <= jac.rows() && c + 1 <= jac.cols())
    for (auto& m : jac.minors(c + 1))
      if (!m.is_zero()) out.push_back(std::move(m));
  return out;
}

template <class Field>
Ideal<Field> saturate_by_locus(Ideal<Field> I, const Ideal<Field>& locus) {
  auto L = locus.map_to(I.ring());
  if (L.is_unit()) return I;
  return saturate(I, L);
}

template <class Field>
struct Chart {
  std::vector<int> rows, cols;
  Polynomial<Field> minor;
};

/// Nonzero c x c minors of Jac X whose non-vanishing loci cover a dense
/// subset of every top-dimensional component of X. Empty if no such cover
/// is found.
template <class Field>
std::vector<Chart<Field>> regular_charts(const Ideal<Field>& X, int c) {
  const auto& R = X.ring();
  auto xs = R->indices_of(Block::x);
  if (xs.empty()) {
    xs.resize(static_cast<std::size_t>(R->nvars()));
    std::iota(xs.begin(), xs.end(), 0);
  }
  auto jac = jacobian(X.nonzero_generators(), xs);
  if (c > jac.rows() || c > jac.cols()) return {};
  const int dimX = X.dimension();
  std::vector<Chart<Field>> charts;
  Ideal<Field> covered = X;
  for (const auto& rows : PolyMatrix<Field>::subsets(jac.rows(), c)) {
    for (const auto& cols : PolyMatrix<Field>::subsets(jac.cols(), c)) {
      auto m = jac.determinant(rows, cols);
      if (m.is_zero() || covered.contains(m)) continue;
      covered = ideal_sum(covered, std::vector<Polynomial<Field>>{m});
      charts.push_back({rows, cols, std::move(m)});
      if (covered.is_unit() || covered.dimension() < dimX) return charts;
    }
  }
  return {};
}

/// X + the rank condition rank [Jac X; row] <= c on `ring`, plus `extra`,
/// saturated by each group in `removals` in turn and finally restricted to
/// the regular part of X. With all_minors the rank condition is every
/// (c+1)-minor and the last step saturates by Sing X; with charts it is the
/// minors bordering a chosen nonsingular c x c block, one chart at a time.
template <class Field>
Ideal<Field> regular_rank_locus(const Ideal<Field>& X, const RingPtr<Field>& ring,
                                const std::vector<Polynomial<Field>>& row,
                                const std::vector<Polynomial<Field>>& extra,
                                const std::vector<std::vector<Polynomial<Field>>>& removals, RankMethod method) {
  int c = X.codimension();
  auto finish = [&](std::vector<Polynomial<Field>> gens) {
    gens.insert(gens.end(), extra.begin(), extra.end());
    Ideal<Field> I(ring, std::move(gens));
    for (const auto& group : removals) I = saturate_by_product(I, nonconstant(group));
    return I;
  };
  std::vector<Chart<Field>> charts;
  if (method == RankMethod::charts && c > 0) charts = regular_charts(X, c);
  if (charts.empty()) return saturate_by_locus(finish(rank_condition(X, c, ring, row)), singular_locus(X));

  auto gens = mapped(X.nonzero_generators(), ring);
  auto aug = jacobian(gens, ring->indices_of(Block::x)).with_row(row);
  std::optional<Ideal<Field>> out;
  for (const auto& chart : charts) {
    auto chart_gens = gens;
    for (int r = 0; r < aug.rows(); ++r) {
      if (std::find(chart.rows.begin(), chart.rows.end(), r) != chart.rows.end()) continue;
      auto rows = chart.rows;
      rows.insert(std::upper_bound(rows.begin(), rows.end(), r), r);
      for (int j = 0; j < aug.cols(); ++j) {
        if (std::find(chart.cols.begin(), chart.cols.end(), j) != chart.cols.end()) continue;
        auto cols = chart.cols;
        cols.insert(std::upper_bound(cols.begin(), cols.end(), j), j);
        auto m = aug.determinant(rows, cols);
        if (!m.is_zero()) chart_gens.push_back(std::move(m));
      }
    }
    auto piece = saturate(finish(std::move(chart_gens)), chart.minor.map_to(ring));
    out = out ? intersect(*out, piece) : piece;
  }
  return *out;
}

}  // namespace detail

/// Closure of {(x, y) : x regular on X, y normal to X at x}, as
/// X + (c+1)-minors of [Jac X; y] saturated by the singular locus.
template <class Field>
ConormalIdeal<Field> conormal_ideal(const Ideal<Field>& X, RankMethod method = RankMethod::all_minors) {
  if (X.is_unit()) throw std::invalid_argument("conormal of the empty variety");
  auto amb = Ambient<Field>::of(X.ring());
  int c = X.codimension();
  const auto& R = amb.xy();
  std::vector<Polynomial<Field>> ys;
  for (const auto& name : amb.y_names()) ys.push_back(Polynomial<Field>::variable(R, name));
  auto con = detail::regular_rank_locus<Field>(X, R, ys, {}, {}, method);
  return {con, X, c};
}

template <class Field>
struct CorrespondenceIdeal {
  Ideal<Field> ideal;
  Pipeline pipeline = Pipeline::explicit_y;
  std::string gamma;
};

/// Con(X) + { den_i u_i - num_i }, saturated by H and the denominators.
template <class Field>
CorrespondenceIdeal<Field> gamma_graph_ideal(const ConormalIdeal<Field>& con, const GammaFamily<Field>& g) {
  const auto& R = g.ring;
  auto amb = Ambient<Field>::of(R);
  if (amb.n() != g.n()) throw SizeError("gamma does not match the ambient dimension");
  auto gens = detail::mapped(con.ideal.nonzero_generators(), R);
  for (int i = 0; i < g.n(); ++i) {
    const auto& c = g.components[static_cast<std::size_t>(i)];
    gens.push_back(c.den * Polynomial<Field>::variable(R, amb.u_names()[static_cast<std::size_t>(i)]) - c.num);
  }
  auto I = saturate_by_product(Ideal<Field>(R, std::move(gens)), g.undefined_locus());
  return {I, Pipeline::explicit_y, g.name};
}

namespace detail {

/// The cleared row of phi: phi_i * D with D the product of the distinct
/// denominators, plus the list of those denominators.
template <class Field>
std::pair<std::vector<Polynomial<Field>>, std::vector<Polynomial<Field>>> cleared_phi_row(
    const GammaFamily<Field>& g, const RingPtr<Field>& ring) {
  if (!g.substitution) throw NoSubstitutionForm(g.name);
  std::vector<Polynomial<Field>> dens;
  for (const auto& c : *g.substitution) dens.push_back(c.den.map_to(ring));
  auto D = distinct_product(ring, dens);
  std::vector<Polynomial<Field>> row;
  for (const auto& c : *g.substitution) {
    auto den = c.den.map_to(ring);
    auto num = c.num.map_to(ring);
    if (den.is_constant()) {
      row.push_back(num.scaled(ring->field().inv(den.leading_coefficient())) * D);
    } else {
      auto rest = divide_exact(D, den.monic());
      if (!rest) throw std::logic_error("denominator does not divide the cleared product");
      row.push_back(num.scaled(ring->field().inv(den.leading_coefficient())) * *rest);
    }
  }
  return {row, nonconstant(dens)};
}

}  // namespace detail

/// The correspondence in the x, u ring: X + (c+1)-minors of Jac X augmented
/// with the cleared row phi(x, u), saturated by the cleared denominators and
/// by Sing X.
template <class Field>
CorrespondenceIdeal<Field> projected_correspondence(const Ideal<Field>& X, const GammaFamily<Field>& g,
                                                    RankMethod method = RankMethod::all_minors) {
  if (!g.substitution) throw NoSubstitutionForm(g.name);
  auto amb = Ambient<Field>::of(g.ring);
  const auto& R = amb.xu();
  auto [row, dens] = detail::cleared_phi_row(g, R);
  auto I = detail::regular_rank_locus<Field>(X, R, row, {}, {dens}, method);
  return {I, Pipeline::substituted, g.name};
}

template <class Field>
struct DataLocusResult {
  Ideal<Field> ideal;  // in the u ring
  DimensionDegree dimdeg;
  std::vector<int> generator_degrees;
  Pipeline pipeline = Pipeline::substituted;
  std::string field;
  std::string variety_name, subvariety_name;
  std::vector<std::pair<std::string, double>> timings;

  int dimension() const { return dimdeg.dimension; }
  std::int64_t degree() const { return dimdeg.degree; }
};

/// Pipeline used when none is requested: substituted if phi is available.
template <class Field>
Pipeline default_pipeline(const GammaFamily<Field>& g) {
  return g.substitution ? Pipeline::substituted : Pipeline::explicit_y;
}

/// Data locus of A inside X for the family g. A must define a subvariety of
/// X (typically A = X + extra generators).
template <class Field>
DataLocusResult<Field> data_locus(const Ideal<Field>& X, const Ideal<Field>& A, const GammaFamily<Field>& g,
                                  std::optional<Pipeline> pipeline = {}, std::string variety_name = "X",
                                  std::string subvariety_name = "A", RankMethod method = RankMethod::all_minors) {
  auto pipe = pipeline.value_or(default_pipeline(g));
  auto amb = Ambient<Field>::of(g.ring);
  detail::Stopwatch clock;
  DataLocusResult<Field> result{Ideal<Field>::zero(amb.u()), {}, {}, pipe, g.ring->field().spec().name(),
                                std::move(variety_name), std::move(subvariety_name), {}};
  auto Ax = A.map_to(amb.x());
  if (!variety_contains(X.map_to(amb.x()), Ax)) throw SubvarietyViolation();
  result.timings.emplace_back("subvariety-check", clock.lap());

  Ideal<Field> corr = Ideal<Field>::zero(amb.xu());
  std::vector<int> eliminated;
  if (pipe == Pipeline::substituted) {
    corr = projected_correspondence(X, g, method).ideal;
    eliminated = corr.ring()->indices_of(Block::x);
  } else {
    // the rank condition with explicit y and the graph of Gamma; saturate by
    // H, then the denominators, then Sing X
    const auto& R = amb.xyu();
    std::vector<Polynomial<Field>> ys;
    for (const auto& name : amb.y_names()) ys.push_back(Polynomial<Field>::variable(R, name));
    std::vector<Polynomial<Field>> graph, dens;
    for (int i = 0; i < g.n(); ++i) {
      const auto& comp = g.components[static_cast<std::size_t>(i)];
      graph.push_back(comp.den * Polynomial<Field>::variable(R, amb.u_names()[static_cast<std::size_t>(i)]) - comp.num);
      dens.push_back(comp.den);
    }
    corr = detail::regular_rank_locus<Field>(X, R, ys, graph, {g.forbidden, dens}, method);
    eliminated = R->indices_of(Block::x);
    auto yidx = R->indices_of(Block::y);
    eliminated.insert(eliminated.end(), yidx.begin(), yidx.end());
  }
  result.timings.emplace_back("correspondence", clock.lap());

  auto pre = ideal_sum(corr, A.map_to(corr.ring()));
  auto elim = eliminate(pre, eliminated);
  result.ideal = detail::restrict_back(elim, amb.u());
  result.timings.emplace_back("eliminate", clock.lap());

  result.dimdeg = result.ideal.dimension_and_degree();
  for (const auto& gen : result.ideal.groebner().generators()) result.generator_degrees.push_back(gen.total_degree());
  result.timings.emplace_back("hilbert", clock.lap());
  return result;
}

/// Critical equations grad d_u(x) + sum lambda_i grad f_i(x) = 0 with
/// grad d_u(x) = phi(x, u), lambda eliminated. With `u_point` the result
/// lives in the x ring, otherwise in the x, u ring.
template <class Field>
Ideal<Field> lagrange_critical_ideal(const Ideal<Field>& X, const GammaFamily<Field>& g,
                                     const std::optional<std::vector<typename Field::value_type>>& u_point = {}) {
  using Poly = Polynomial<Field>;
  if (!g.substitution) throw NoSubstitutionForm(g.name);
  int c = X.codimension();
  auto fs = X.nonzero_generators();
  if (static_cast<int>(fs.size()) != c) throw NotCompleteIntersection(fs.size(), c);
  auto amb = Ambient<Field>::of(g.ring);

  std::vector<std::pair<std::string, Block>> lambdas;
  for (int i = 0; i < c; ++i) lambdas.emplace_back("lambda" + std::to_string(i + 1), Block::aux);
  auto R = amb.xu()->extended(lambdas);
  fs = detail::mapped(fs, R);
  auto xs = R->indices_of(Block::x);
  auto jac = jacobian(fs, xs);

  auto gens = fs;
  std::vector<Poly> dens;
  for (int j = 0; j < amb.n(); ++j) {
    const auto& phi = (*g.substitution)[static_cast<std::size_t>(j)];
    auto den = phi.den.map_to(R);
    Poly combo(R);
    for (int i = 0; i < c; ++i) combo += Poly::variable(R, lambdas[static_cast<std::size_t>(i)].first) * jac.at(i, j);
    gens.push_back(phi.num.map_to(R) + den * combo);
    dens.push_back(den);
  }

  auto target_ring = amb.xu();
  if (u_point) {
    auto pt = detail::named_point<Field>(amb.u_names(), *u_point);
    std::vector<Poly> images;
    for (int i = 0; i < R->nvars(); ++i) {
      auto it = pt.find(R->variable(i).name);
      images.push_back(it == pt.end() ? Poly::variable(R, i) : Poly::constant(R, it->second));
    }
    std::vector<std::pair<std::string, Block>> keep;
    for (const auto& [name, blk] : lambdas) keep.emplace_back(name, blk);
    auto small = amb.x()->extended(keep);
    for (auto& f : gens) f = f.substitute(images).map_to(small);
    for (auto& d : dens) d = d.substitute(images).map_to(small);
    R = small;
    target_ring = amb.x();
  }
  Ideal<Field> I(R, std::move(gens));
  I = saturate_by_product(I, detail::nonconstant(dens));
  auto elim = eliminate(I, R->indices_of(Block::aux));
  return detail::restrict_back(elim, target_ring);
}

/// The rank-condition critical ideal at a fixed data point, in the x ring.
template <class Field>
Ideal<Field> critical_ideal(const Ideal<Field>& X, const GammaFamily<Field>& g,
                            const std::vector<typename Field::value_type>& u_point,
                            RankMethod method = RankMethod::all_minors) {
  using Poly = Polynomial<Field>;
  if (!g.substitution) throw NoSubstitutionForm(g.name);
  auto amb = Ambient<Field>::of(g.ring);
  const auto& R = amb.xu();
  auto [row, dens] = detail::cleared_phi_row(g, R);
  auto pt = detail::named_point<Field>(amb.u_names(), u_point);
  std::vector<Poly> images;
  for (int i = 0; i < R->nvars(); ++i) {
    auto it = pt.find(R->variable(i).name);
    images.push_back(it == pt.end() ? Poly::variable(R, i) : Poly::constant(R, it->second));
  }
  for (auto& f : row) f = f.substitute(images).map_to(amb.x());
  for (auto& d : dens) d = d.substitute(images).map_to(amb.x());
  for (const auto& d : dens)
    if (d.is_zero()) throw PointInForbiddenLocus();
  return detail::regular_rank_locus<Field>(X, amb.x(), row, {}, {dens}, method);
}

struct AlgebraicDegree {
  std::int64_t degree = 0;
  int dimension = -1;
  bool generic = true;  // false when the critical set is not finite
};

/// Number of critical points (with multiplicity) at `u_point`.
template <class Field>
AlgebraicDegree algebraic_degree(const Ideal<Field>& X, const GammaFamily<Field>& g,
                                 const std::vector<typename Field::value_type>& u_point) {
  if (!g.substitution) throw NoSubstitutionForm(g.name);
  auto dd = critical_ideal(X, g, u_point).dimension_and_degree();
  AlgebraicDegree out;
  out.dimension = dd.dimension;
  out.generic = dd.dimension <= 0;
  out.degree = dd.dimension == 0 ? dd.degree : 0;
  return out;
}

enum class CheckOutcome { pass, fail, skipped };

inline const char* outcome_name(CheckOutcome c) {
  switch (c) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::fail: return "fail";
    case CheckOutcome::skipped: return "skipped";
  }
  return "?";
}

struct BoundsReport {
  CheckOutcome lower = CheckOutcome::skipped;
  std::optional<CheckOutcome> hyperplane;

  bool ok() const { return lower != CheckOutcome::fail && hyperplane.value_or(CheckOutcome::pass) != CheckOutcome::fail; }
};

namespace detail {

/// Whether Gamma(A x {y0}) minus H lies in V(dl).
template <class Field>
CheckOutcome gamma_slice_inside(const Ideal<Field>& A, const GammaFamily<Field>& g, const Ideal<Field>& dl,
                                const std::vector<typename Field::value_type>& y0) {
  using Poly = Polynomial<Field>;
  auto amb = Ambient<Field>::of(g.ring);
  const auto& R = g.ring;
  auto pt = named_point<Field>(amb.y_names(), y0);
  std::vector<Poly> images;
  for (int i = 0; i < R->nvars(); ++i) {
    auto it = pt.find(R->variable(i).name);
    images.push_back(it == pt.end() ? Poly::variable(R, i) : Poly::constant(R, it->second));
  }
  auto Ax = A.map_to(amb.x());
  auto guard = distinct_product(R, g.undefined_locus()).substitute(images).map_to(amb.x());
  if (radical_membership(guard, Ax)) return CheckOutcome::skipped;

  std::vector<Poly> nums, dens;
  for (const auto& c : g.components) {
    nums.push_back(c.num.substitute(images));
    dens.push_back(c.den.substitute(images));
  }
  auto us = R->indices_of(Block::u);
  for (const auto& gen : dl.nonzero_generators()) {
    auto composed = compose_cleared(gen.map_to(R), us, nums, dens).map_to(amb.x());
    if (!radical_membership(composed * guard, Ax)) return CheckOutcome::fail;
  }
  return CheckOutcome::pass;
}

}  // namespace detail

/// Lower bound Gamma((A x {0}) minus H) inside DL_A, and optionally the
/// hyperplane slice Gamma(A x {(h_1..h_n)}) for hyperplane = (h_0, ..., h_n).
template <class Field>
BoundsReport check_bounds(const Ideal<Field>& A, const GammaFamily<Field>& g, const DataLocusResult<Field>& dl,
                          const std::optional<std::vector<typename Field::value_type>>& hyperplane = {}) {
  const auto& F = g.ring->field();
  BoundsReport report;
  report.lower = detail::gamma_slice_inside(A, g, dl.ideal,
                                            std::vector<typename Field::value_type>(static_cast<std::size_t>(g.n()), F.zero()));
  if (hyperplane) {
    if (static_cast<int>(hyperplane->size()) != g.n() + 1) throw SizeError("hyperplane needs n + 1 coefficients");
    std::vector<typename Field::value_type> h(hyperplane->begin() + 1, hyperplane->end());
    report.hyperplane = detail::gamma_slice_inside(A, g, dl.ideal, h);
  }
  return report;
}

template <class Field>
struct SamplePoint {
  std::vector<typename Field::value_type> u;
  std::optional<bool> on_data_locus;  // set when a data locus was supplied
};

/// Gamma(a, v) for v = coeffs . Jac X(a), a point of the data locus of any A
/// containing a (the point must lie on X and A).
template <class Field>
SamplePoint<Field> sample_data_point(const std::vector<typename Field::value_type>& a, const Ideal<Field>& X,
                                     const Ideal<Field>& A, const GammaFamily<Field>& g,
                                     const std::vector<typename Field::value_type>& coeffs,
                                     const DataLocusResult<Field>* dl = nullptr) {
  using Scalar = typename Field::value_type;
  const auto& F = g.ring->field();
  auto amb = Ambient<Field>::of(g.ring);
  auto apt = detail::named_point<Field>(amb.x_names(), a);
  for (const auto* I : {&X, &A})
    for (const auto& f : I->nonzero_generators())
      if (!F.is_zero(f.evaluate(apt))) throw PointNotOnVariety("point does not satisfy " + f.to_string());

  auto fs = X.nonzero_generators();
  if (coeffs.size() != fs.size()) throw SizeError("need one coefficient per generator of X");
  std::vector<Scalar> v(static_cast<std::size_t>(amb.n()), F.zero());
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (int j = 0; j < amb.n(); ++j) {
      int var = fs[i].ring()->index_of(amb.x_names()[static_cast<std::size_t>(j)]);
      if (var < 0) continue;
      auto d = fs[i].derivative(var).evaluate(apt);
      v[static_cast<std::size_t>(j)] = F.add(v[static_cast<std::size_t>(j)], F.mul(coeffs[i], d));
    }

  auto pt = apt;
  for (int j = 0; j < amb.n(); ++j) pt[amb.y_names()[static_cast<std::size_t>(j)]] = v[static_cast<std::size_t>(j)];
  for (const auto& h : g.undefined_locus())
    if (F.is_zero(h.evaluate(pt))) throw PointInForbiddenLocus();

  SamplePoint<Field> out;
  for (const auto& c : g.components) out.u.push_back(F.div(c.num.evaluate(pt), c.den.evaluate(pt)));
  if (dl) {
    auto upt = detail::named_point<Field>(amb.u_names(), out.u);
    out.on_data_locus = std::all_of(dl->ideal.nonzero_generators().begin(), dl->ideal.nonzero_generators().end(),
                                    [&](const auto& f) { return F.is_zero(f.evaluate(upt)); });
  }
  return out;
}

}  // namespace dlocus
