#pragma once

// Ideals and the ideal-theoretic operations the data-locus pipeline is
// built from: sums, elimination, quotients, saturation, intersection,
// radical membership and Hilbert-polynomial dimension/degree.

#include "dlocus/groebner.hpp"
#include "dlocus/hilbert.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dlocus {

template <class Field>
class Ideal {
 public:
  using Poly = Polynomial<Field>;
  using Basis = GroebnerBasis<Field>;

  /// Zero generators are dropped; an empty list means the zero ideal.
  Ideal(RingPtr<Field> ring, std::vector<Poly> gens) : state_(std::make_shared<State>()) {
    state_->ring = std::move(ring);
    for (auto& g : gens) {
      g.check_ring(Poly(state_->ring));
      if (!g.is_zero()) state_->gens.push_back(std::move(g));
    }
  }

  explicit Ideal(std::vector<Poly> gens) : Ideal(ring_of_list(gens), std::move(gens)) {}

  static Ideal unit(RingPtr<Field> ring) { return Ideal(ring, {Poly::constant(ring, 1)}); }
  static Ideal zero(RingPtr<Field> ring) { return Ideal(std::move(ring), {}); }

  const RingPtr<Field>& ring() const { return state_->ring; }
  int nvars() const { return state_->ring->nvars(); }

  /// Generators as given; the zero ideal reports {0}.
  std::vector<Poly> generators() const {
    if (state_->gens.empty()) return {Poly(state_->ring)};
    return state_->gens;
  }
  const std::vector<Poly>& nonzero_generators() const { return state_->gens; }

  bool is_zero() const { return state_->gens.empty(); }

  /// Reduced basis under the ring's own order (cached).
  const Basis& groebner() const { return groebner(state_->ring->order()); }

  /// Reduced basis under `order` (cached per order); it lives in a ring
  /// carrying that order.
  const Basis& groebner(const MonomialOrder& order) const {
    auto key = order.key();
    {
      std::lock_guard lock(state_->mutex);
      if (auto it = state_->bases.find(key); it != state_->bases.end()) return *it->second;
    }
    std::shared_ptr<Basis> basis;
    if (state_->gens.empty()) {
      basis = std::make_shared<Basis>(state_->ring->with_order(order), std::vector<Poly>{});
    } else if (order == state_->ring->order()) {
      basis = std::make_shared<Basis>(buchberger(state_->gens));
    } else {
      basis = std::make_shared<Basis>(buchberger(state_->gens, order));
    }
    std::lock_guard lock(state_->mutex);
    return *state_->bases.emplace(key, std::move(basis)).first->second;
  }

  /// Degree-compatible basis used for Hilbert computations.
  const Basis& graded_basis() const {
    if (state_->ring->order().kind() == MonomialOrder::Kind::grevlex) return groebner();
    return groebner(MonomialOrder::grevlex(nvars()));
  }

  bool is_unit() const { return !is_zero() && graded_basis().is_unit(); }
  bool contains(const Poly& f) const {
    if (f.is_zero()) return true;
    if (is_zero()) return false;
    return graded_basis().contains(f);
  }
  bool contains(const Ideal& other) const {
    for (const auto& g : other.nonzero_generators())
      if (!contains(g)) return false;
    return true;
  }

  /// Affine dimension and degree from the Hilbert polynomial of the
  /// leading-term ideal under grevlex; (-1, 0) for the unit ideal.
  DimensionDegree dimension_and_degree() const {
    {
      std::lock_guard lock(state_->mutex);
      if (state_->dimdeg) return *state_->dimdeg;
    }
    DimensionDegree dd;
    if (is_zero()) {
      dd = {nvars(), 1};
    } else {
      dd = monomial_dimension_degree(graded_basis().leading_monomials(), nvars());
    }
    std::lock_guard lock(state_->mutex);
    state_->dimdeg = dd;
    return dd;
  }
  int dimension() const { return dimension_and_degree().dimension; }
  /// nvars - dimension; nvars + 1 for the unit ideal.
  int codimension() const { return nvars() - dimension(); }

  /// Records a known basis (e.g. produced by elimination) in the cache.
  void remember(Basis basis) const {
    auto key = basis.order().key();
    std::lock_guard lock(state_->mutex);
    state_->bases.emplace(key, std::make_shared<Basis>(std::move(basis)));
  }

  Ideal map_to(const RingPtr<Field>& target) const {
    std::vector<Poly> gens;
    for (const auto& g : state_->gens) gens.push_back(g.map_to(target));
    return Ideal(target, std::move(gens));
  }

  /// Ideal equality via reduced bases.
  friend bool operator==(const Ideal& a, const Ideal& b) {
    if (!a.ring()->same_as(*b.ring())) return false;
    return a.graded_basis().generators() == b.graded_basis().generators();
  }

 private:
  struct State {
    RingPtr<Field> ring;
    std::vector<Poly> gens;
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<Basis>> bases;
    std::optional<DimensionDegree> dimdeg;
  };

  static RingPtr<Field> ring_of_list(const std::vector<Poly>& gens) {
    if (gens.empty()) throw std::invalid_argument("cannot infer the ring of an empty generator list");
    return gens.front().ring();
  }

  std::shared_ptr<State> state_;
};

template <class Field>
DimensionDegree dimension_and_degree(const Ideal<Field>& I) {
  return I.dimension_and_degree();
}

template <class Field>
Ideal<Field> ideal_sum(const Ideal<Field>& I, const Ideal<Field>& J) {
  if (!I.ring()->same_as(*J.ring())) throw RingMismatch();
  auto gens = I.nonzero_generators();
  for (const auto& g : J.nonzero_generators()) gens.push_back(g.map_to(I.ring()));
  return Ideal<Field>(I.ring(), std::move(gens));
}

template <class Field>
Ideal<Field> ideal_sum(const Ideal<Field>& I, const std::vector<Polynomial<Field>>& extra) {
  return ideal_sum(I, Ideal<Field>(I.ring(), extra));
}

/// I intersected with the subring without `vars`: the basis elements under
/// a (vars grevlex) > (rest grevlex) block order that avoid `vars`.
template <class Field>
Ideal<Field> eliminate(const Ideal<Field>& I, const std::vector<int>& vars) {
  if (vars.empty() || I.is_zero()) return I;
  for (int v : vars)
    if (v < 0 || v >= I.nvars()) throw std::out_of_range("eliminated variable not in ring");
  auto order = MonomialOrder::elimination(I.nvars(), vars);
  const auto& gb = I.groebner(order);
  std::vector<int> rest;
  for (int i = 0; i < I.nvars(); ++i)
    if (std::find(vars.begin(), vars.end(), i) == vars.end()) rest.push_back(i);
  std::vector<Polynomial<Field>> kept;
  for (const auto& g : gb.generators())
    if (g.uses_only(rest)) kept.push_back(g.map_to(I.ring()));
  Ideal<Field> result(I.ring(), kept);
  // restricted to the remaining variables the block order is grevlex, so
  // the kept elements already form the reduced grevlex basis
  if (I.ring()->order().kind() == MonomialOrder::Kind::grevlex) {
    std::sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
      return I.ring()->order().compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    result.remember(GroebnerBasis<Field>(I.ring(), std::move(kept)));
  }
  return result;
}

template <class Field>
Ideal<Field> eliminate(const Ideal<Field>& I, Block block) {
  return eliminate(I, I.ring()->indices_of(block));
}

namespace detail {

/// The ring of I with one extra aux variable; returns (ring, index).
template <class Field>
std::pair<RingPtr<Field>, int> with_aux_variable(const RingPtr<Field>& ring, const std::string& stem) {
  auto name = ring->fresh_name(stem);
  auto ext = ring->extended({{name, Block::aux}});
  return {ext, ext->index_of(name)};
}

template <class Field>
Ideal<Field> restrict_back(const Ideal<Field>& eliminated, const RingPtr<Field>& ring) {
  auto result = eliminated.map_to(ring);
  if (ring->order().kind() == MonomialOrder::Kind::grevlex && !eliminated.is_zero()) {
    // grevlex with a trailing unused variable restricts to grevlex
    const auto& gb = eliminated.groebner();
    std::vector<Polynomial<Field>> gens;
    for (const auto& g : gb.generators()) gens.push_back(g.map_to(ring));
    result.remember(GroebnerBasis<Field>(ring, std::move(gens)));
  }
  return result;
}

}  // namespace detail

/// I : f^infinity via I + <1 - t f> with t eliminated.
template <class Field>
Ideal<Field> saturate(const Ideal<Field>& I, const Polynomial<Field>& f) {
  if (f.is_zero()) throw std::invalid_argument("saturation by the zero polynomial");
  if (f.is_constant() || I.is_zero()) return I;
  auto [ext, t] = detail::with_aux_variable(I.ring(), "tsat");
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : I.nonzero_generators()) gens.push_back(g.map_to(ext));
  gens.push_back(Polynomial<Field>::constant(ext, 1) - Polynomial<Field>::variable(ext, t) * f.map_to(ext));
  auto elim = eliminate(Ideal<Field>(ext, std::move(gens)), std::vector<int>{t});
  return detail::restrict_back(elim, I.ring());
}

/// I intersect J via t I + (1 - t) J with t eliminated.
template <class Field>
Ideal<Field> intersect(const Ideal<Field>& I, const Ideal<Field>& J) {
  if (!I.ring()->same_as(*J.ring())) throw RingMismatch();
  if (I.is_zero() || J.is_zero()) return Ideal<Field>::zero(I.ring());
  auto [ext, t] = detail::with_aux_variable(I.ring(), "tint");
  auto T = Polynomial<Field>::variable(ext, t);
  auto one = Polynomial<Field>::constant(ext, 1);
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : I.nonzero_generators()) gens.push_back(T * g.map_to(ext));
  for (const auto& g : J.nonzero_generators()) gens.push_back((one - T) * g.map_to(ext));
  auto elim = eliminate(Ideal<Field>(ext, std::move(gens)), std::vector<int>{t});
  return detail::restrict_back(elim, I.ring());
}

/// g / f when f divides g exactly, otherwise nullopt.
template <class Field>
std::optional<Polynomial<Field>> divide_exact(const Polynomial<Field>& g, const Polynomial<Field>& f) {
  g.check_ring(f);
  if (f.is_zero()) throw DivisionByZero();
  const auto& F = g.field();
  auto rest = g;
  Polynomial<Field> q(g.ring());
  while (!rest.is_zero()) {
    const auto& lt = rest.leading_term();
    if (!divides(f.leading_monomial(), lt.mono)) return std::nullopt;
    auto m = quotient(lt.mono, f.leading_monomial());
    auto c = F.div(lt.coeff, f.leading_coefficient());
    q += Polynomial<Field>::monomial(g.ring(), m, c);
    rest -= f.mul_term(m, c);
  }
  return q;
}

/// {g : g f in I}, computed as (I intersect <f>) / f.
template <class Field>
Ideal<Field> ideal_quotient(const Ideal<Field>& I, const Polynomial<Field>& f) {
  if (f.is_zero()) throw std::invalid_argument("quotient by the zero polynomial");
  if (f.is_constant()) return I;
  auto cap = intersect(I, Ideal<Field>(I.ring(), {f}));
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : cap.nonzero_generators()) {
    auto q = divide_exact(g, f);
    if (!q) throw std::logic_error("intersection with <f> produced a non-multiple of f");
    gens.push_back(*q);
  }
  return Ideal<Field>(I.ring(), std::move(gens));
}

enum class SaturationStrategy {
  /// Exact: intersection over the generators g of J of I : g^infinity.
  intersection,
  /// Exact: I : h^infinity with h = sum_i s^(i-1) g_i in a fresh variable
  /// s, then s eliminated. A prime avoids h iff it avoids some g_i.
  parametric,
  /// Probabilistic: I : h^infinity for one random combination h of the
  /// generators of J. Equal to I : J^infinity unless h falls into an
  /// associated prime of I not containing J (probability ~ #primes / p).
  random_combination,
};

inline const char* strategy_name(SaturationStrategy s) {
  switch (s) {
    case SaturationStrategy::intersection: return "intersection";
    case SaturationStrategy::parametric: return "parametric";
    case SaturationStrategy::random_combination: return "random-combination";
  }
  return "?";
}

inline SaturationStrategy& default_saturation_strategy() {
  thread_local SaturationStrategy s = SaturationStrategy::intersection;
  return s;
}

/// I : J^infinity.
template <class Field>
Ideal<Field> saturate(const Ideal<Field>& I, const Ideal<Field>& J,
                      SaturationStrategy strategy = default_saturation_strategy(), std::uint64_t seed = 1) {
  if (!I.ring()->same_as(*J.ring())) throw RingMismatch();
  if (J.is_zero()) throw std::invalid_argument("saturation by the zero ideal");
  if (I.is_zero()) return I;
  const auto& jb = J.graded_basis();
  if (jb.is_unit()) return I;
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : jb.generators()) gens.push_back(g.map_to(I.ring()));
  if (gens.size() == 1) return saturate(I, gens.front());

  switch (strategy) {
    case SaturationStrategy::intersection: {
      std::optional<Ideal<Field>> acc;
      for (const auto& g : gens) {
        auto part = saturate(I, g);
        if (part.is_unit()) continue;
        acc = acc ? intersect(*acc, part) : part;
      }
      return acc ? *acc : Ideal<Field>::unit(I.ring());
    }
    case SaturationStrategy::parametric: {
      auto [ext, s] = detail::with_aux_variable(I.ring(), "spar");
      auto S = Polynomial<Field>::variable(ext, s);
      Polynomial<Field> h(ext);
      auto power = Polynomial<Field>::constant(ext, 1);
      for (const auto& g : gens) {
        h += power * g.map_to(ext);
        power *= S;
      }
      auto sat = saturate(I.map_to(ext), h);
      auto elim = eliminate(sat, std::vector<int>{s});
      return detail::restrict_back(elim, I.ring());
    }
    case SaturationStrategy::random_combination: {
      std::mt19937_64 rng(seed);
      const auto& F = I.ring()->field();
      Polynomial<Field> h(I.ring());
      while (h.is_zero()) {
        for (const auto& g : gens) {
          auto c = F.random(rng);
          h += g.scaled(c);
        }
      }
      return saturate(I, h);
    }
  }
  throw std::logic_error("unknown saturation strategy");
}

/// Iterated saturation by each polynomial in turn: I : (f1 f2 ... fk)^infinity.
template <class Field>
Ideal<Field> saturate_by_product(Ideal<Field> I, const std::vector<Polynomial<Field>>& fs) {
  for (const auto& f : fs)
    if (!f.is_constant()) I = saturate(I, f.map_to(I.ring()));
  return I;
}

/// True iff f vanishes on V(I): 1 lies in I + <1 - t f>.
template <class Field>
bool radical_membership(const Polynomial<Field>& f, const Ideal<Field>& I) {
  if (f.is_zero()) return true;
  if (I.contains(f.map_to(I.ring()))) return true;
  if (f.is_constant()) return I.is_unit();
  auto [ext, t] = detail::with_aux_variable(I.ring(), "trad");
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : I.nonzero_generators()) gens.push_back(g.map_to(ext));
  gens.push_back(Polynomial<Field>::constant(ext, 1) - Polynomial<Field>::variable(ext, t) * f.map_to(ext));
  return buchberger(gens).is_unit();
}

/// True iff V(J) is contained in V(I).
template <class Field>
bool variety_contains(const Ideal<Field>& I, const Ideal<Field>& J) {
  for (const auto& g : I.nonzero_generators())
    if (!radical_membership(g.map_to(J.ring()), J)) return false;
  return true;
}

/// V(I) = V(J), i.e. mutual radical containment.
template <class Field>
bool same_variety(const Ideal<Field>& I, const Ideal<Field>& J) {
  return variety_contains(I, J) && variety_contains(J, I);
}

}  // namespace dlocus
