#pragma once

// Multivariate division, S-polynomials and Buchberger's algorithm.
//
// The basis is grown with the normal selection strategy refined by sugar
// degree, and the pair set is maintained with the Gebauer-Moeller update
// (coprime leading monomials plus the chain criterion). Output is the
// reduced basis, monic, sorted by ascending leading monomial.

#include "dlocus/poly.hpp"
#include "dlocus/poly_io.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlocus {

// ---------------------------------------------------------------------------
// Resource budget

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budget {
  std::size_t max_pairs = 0;   // 0 = unlimited; counted per Buchberger run
  unsigned max_degree = 0;     // 0 = unlimited; sugar degree of a selected pair
  std::optional<std::chrono::steady_clock::time_point> deadline;

  static Budget with_timeout(double seconds) {
    Budget b;
    b.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
    return b;
  }
};

inline Budget& current_budget() {
  thread_local Budget budget;
  return budget;
}

/// Installs a budget for the current thread until destroyed.
class ScopedBudget {
 public:
  explicit ScopedBudget(Budget b) : saved_(current_budget()) { current_budget() = b; }
  ~ScopedBudget() { current_budget() = saved_; }
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  Budget saved_;
};

struct GroebnerStats {
  std::size_t pairs_created = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
  std::size_t reduction_steps = 0;
  unsigned max_degree = 0;
  bool from_cache = false;
};

// ---------------------------------------------------------------------------
// Division

namespace detail {

template <class Field>
class Reducer {
 public:
  using Poly = Polynomial<Field>;
  using Term = typename Poly::Term;
  using Scalar = typename Field::value_type;

  Reducer(const Field& field, const MonomialOrder& order) : field_(field), order_(order) {}

  void add(const Poly& p) {
    if (p.is_zero()) return;
    entries_.push_back({&p.terms(), p.leading_monomial(), p.leading_monomial().support_mask()});
  }
  void clear() { entries_.clear(); }
  bool empty() const { return entries_.empty(); }

  /// Index of the shortest reducer whose leading monomial divides m, or -1.
  int find(const Monomial& m) const {
    auto mask = m.support_mask();
    int best = -1;
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto& e = entries_[k];
      if ((e.mask & ~mask) == 0 && divides(e.lm, m) && e.terms->size() < best_len) {
        best = static_cast<int>(k);
        best_len = e.terms->size();
      }
    }
    return best;
  }

  /// Remainder of h. With `full` every term is reduced, otherwise only the
  /// leading term is made irreducible.
  std::vector<Term> reduce(std::vector<Term> h, bool full, std::size_t& steps) const {
    std::vector<Term> rem, buffer;
    std::size_t head = 0;
    while (head < h.size()) {
      const auto& lead = h[head];
      int k = find(lead.mono);
      if (k < 0) {
        if (!full) {
          rem.insert(rem.end(), std::make_move_iterator(h.begin() + static_cast<std::ptrdiff_t>(head)),
                     std::make_move_iterator(h.end()));
          return rem;
        }
        rem.push_back(std::move(h[head]));
        ++head;
        continue;
      }
      const auto& g = *entries_[static_cast<std::size_t>(k)].terms;
      auto q = quotient(lead.mono, g.front().mono);
      auto c = field_.div(lead.coeff, g.front().coeff);
      ++steps;
      subtract_multiple(buffer, h, head + 1, g, q, c);
      std::swap(h, buffer);
      head = 0;
    }
    return rem;
  }

 private:
  struct Entry {
    const std::vector<Term>* terms;
    Monomial lm;
    std::uint64_t mask;
  };

  // out = a[from..] - c * q * g[1..]
  void subtract_multiple(std::vector<Term>& out, const std::vector<Term>& a, std::size_t from,
                         const std::vector<Term>& g, const Monomial& q, const Scalar& c) const {
    out.clear();
    out.reserve(a.size() - from + g.size());
    std::size_t i = from, j = 1;
    bool have_b = j < g.size();
    Term b;
    if (have_b) b = {g[j].mono * q, field_.neg(field_.mul(c, g[j].coeff))};
    while (i < a.size() || have_b) {
      int cmp = i == a.size() ? -1 : !have_b ? 1 : order_.compare(a[i].mono, b.mono);
      if (cmp > 0) {
        out.push_back(a[i++]);
        continue;
      }
      if (cmp == 0) {
        auto s = field_.add(a[i].coeff, b.coeff);
        if (!field_.is_zero(s)) out.push_back({b.mono, std::move(s)});
        ++i;
      } else {
        out.push_back(std::move(b));
      }
      if (++j < g.size()) {
        b = {g[j].mono * q, field_.neg(field_.mul(c, g[j].coeff))};
      } else {
        have_b = false;
      }
    }
  }

  const Field& field_;
  const MonomialOrder& order_;
  std::vector<Entry> entries_;
};

template <class Field>
void require_same_ring(const Polynomial<Field>& f, const std::vector<Polynomial<Field>>& gs) {
  for (const auto& g : gs) f.check_ring(g);
}

}  // namespace detail

/// Remainder of multivariate division of f by G under the ring's order:
/// no term of the result is divisible by a leading monomial of G.
template <class Field>
Polynomial<Field> normal_form(const Polynomial<Field>& f, const std::vector<Polynomial<Field>>& G) {
  detail::require_same_ring(f, G);
  detail::Reducer<Field> reducer(f.field(), f.ring()->order());
  for (const auto& g : G) reducer.add(g);
  std::size_t steps = 0;
  auto terms = reducer.reduce(f.terms(), true, steps);
  return Polynomial<Field>::from_sorted_terms(f.ring(), std::move(terms));
}

/// Normal form under an explicit order; the result lives in the ring
/// carrying that order.
template <class Field>
Polynomial<Field> normal_form(const Polynomial<Field>& f, const std::vector<Polynomial<Field>>& G,
                              const MonomialOrder& order) {
  auto ring = f.ring()->with_order(order);
  std::vector<Polynomial<Field>> mapped;
  for (const auto& g : G) mapped.push_back(g.map_to(ring));
  return normal_form(f.map_to(ring), mapped);
}

/// lcm-cancellation combination of f and g; the leading terms cancel.
template <class Field>
Polynomial<Field> s_polynomial(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  f.check_ring(g);
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("S-polynomial of a zero polynomial");
  const auto& F = f.field();
  auto L = lcm(f.leading_monomial(), g.leading_monomial());
  auto a = f.mul_term(quotient(L, f.leading_monomial()), F.inv(f.leading_coefficient()));
  auto b = g.mul_term(quotient(L, g.leading_monomial()), F.inv(g.leading_coefficient()));
  return a - b;
}

template <class Field>
Polynomial<Field> s_polynomial(const Polynomial<Field>& f, const Polynomial<Field>& g, const MonomialOrder& order) {
  auto ring = f.ring()->with_order(order);
  return s_polynomial(f.map_to(ring), g.map_to(ring));
}

// ---------------------------------------------------------------------------
// Groebner bases

template <class Field>
class GroebnerBasis {
 public:
  using Poly = Polynomial<Field>;

  GroebnerBasis(RingPtr<Field> ring, std::vector<Poly> gens, GroebnerStats stats = {})
      : ring_(std::move(ring)), gens_(std::move(gens)), stats_(stats) {}

  const RingPtr<Field>& ring() const { return ring_; }
  const MonomialOrder& order() const { return ring_->order(); }
  const std::vector<Poly>& generators() const { return gens_; }
  const GroebnerStats& stats() const { return stats_; }
  std::size_t size() const { return gens_.size(); }

  /// The unit ideal has reduced basis {1}.
  bool is_unit() const { return gens_.size() == 1 && gens_[0].is_constant() && !gens_[0].is_zero(); }
  bool is_zero_ideal() const { return gens_.empty(); }

  Poly normal_form(const Poly& f) const { return dlocus::normal_form(f.map_to(ring_), gens_); }
  bool contains(const Poly& f) const { return normal_form(f).is_zero(); }

  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    for (const auto& g : gens_) out.push_back(g.leading_monomial());
    return out;
  }

  friend bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) {
    return a.ring_->same_as(*b.ring_) && a.gens_ == b.gens_;
  }

 private:
  RingPtr<Field> ring_;
  std::vector<Poly> gens_;
  GroebnerStats stats_;
};

/// Optional persistent store for computed bases (the CLI's `--cache`).
/// Bases are exchanged as canonical polynomial strings.
class BasisStore {
 public:
  virtual ~BasisStore() = default;
  virtual std::optional<std::vector<std::string>> load(const std::string& key) = 0;
  virtual void save(const std::string& key, const std::vector<std::string>& generators) = 0;
};

inline BasisStore*& active_basis_store() {
  thread_local BasisStore* store = nullptr;
  return store;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

/// Content hash of (field, variables, order, sorted normalized generators).
template <class Field>
std::string basis_cache_key(const RingPtr<Field>& ring, const std::vector<Polynomial<Field>>& gens) {
  std::vector<std::string> text;
  for (const auto& g : gens)
    if (!g.is_zero()) text.push_back(g.normalized().to_string());
  std::sort(text.begin(), text.end());
  text.erase(std::unique(text.begin(), text.end()), text.end());
  std::string doc = ring->field().spec().name() + "|" + ring->variable_list() + "|" + ring->order().key();
  for (const auto& t : text) doc += "|" + t;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(doc)));
  return buf;
}

namespace detail {

template <class Field>
class Buchberger {
 public:
  using Poly = Polynomial<Field>;
  using Term = typename Poly::Term;

  Buchberger(RingPtr<Field> ring, const Budget& budget)
      : ring_(std::move(ring)), field_(ring_->field()), order_(ring_->order()), budget_(budget),
        reducer_(field_, order_) {}

  GroebnerBasis<Field> run(const std::vector<Poly>& input) {
    std::vector<const Poly*> sorted;
    for (const auto& f : input) {
      f.check_ring(Poly(ring_));
      if (f.is_zero()) continue;
      if (f.is_constant()) return unit();
      sorted.push_back(&f);
    }
    // smallest leading monomials first; ties keep input order
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Poly* a, const Poly* b) {
      return order_.compare(a->leading_monomial(), b->leading_monomial()) < 0;
    });
    for (const Poly* f : sorted) {
      auto h = reduce(f->terms(), true);
      if (h.empty()) continue;
      auto p = normalize(Poly::from_sorted_terms(ring_, std::move(h)));
      if (p.is_constant()) return unit();
      insert(std::move(p), static_cast<unsigned>(f->total_degree()));
    }

    while (!pairs_.empty()) {
      auto pair = take_pair();
      check_budget(pair.sugar);
      ++stats_.pairs_reduced;
      stats_.max_degree = std::max(stats_.max_degree, pair.sugar);
      auto s = spoly(pair);
      auto h = reduce(std::move(s), true);
      if (h.empty()) {
        ++stats_.zero_reductions;
        continue;
      }
      auto p = normalize(Poly::from_sorted_terms(ring_, std::move(h)));
      if (p.is_constant()) return unit();
      insert(std::move(p), pair.sugar);
    }
    return finish();
  }

 private:
  struct Element {
    Poly poly;
    Monomial lm;
    unsigned sugar;
    bool redundant = false;
  };
  struct Pair {
    int i, j;
    Monomial lcm;
    unsigned sugar;
  };

  GroebnerBasis<Field> unit() {
    return GroebnerBasis<Field>(ring_, {Poly::constant(ring_, field_.one())}, stats_);
  }

  static Poly normalize(Poly p) { return p.normalized(); }

  std::vector<Term> reduce(std::vector<Term> h, bool full) {
    return reducer_.reduce(std::move(h), full, stats_.reduction_steps);
  }

  void check_budget(unsigned sugar) {
    if (budget_.max_pairs && stats_.pairs_reduced >= budget_.max_pairs)
      throw ResourceLimit("Groebner basis exceeded the pair budget of " + std::to_string(budget_.max_pairs));
    if (budget_.max_degree && sugar > budget_.max_degree)
      throw ResourceLimit("Groebner basis exceeded the degree budget of " + std::to_string(budget_.max_degree));
    if (budget_.deadline && std::chrono::steady_clock::now() > *budget_.deadline)
      throw ResourceLimit("Groebner basis exceeded the time budget");
  }

  std::vector<Term> spoly(const Pair& pair) {
    const auto& f = elems_[static_cast<std::size_t>(pair.i)].poly;
    const auto& g = elems_[static_cast<std::size_t>(pair.j)].poly;
    auto a = f.mul_term(quotient(pair.lcm, f.leading_monomial()), field_.inv(f.leading_coefficient()));
    auto b = g.mul_term(quotient(pair.lcm, g.leading_monomial()), field_.inv(g.leading_coefficient()));
    // leading terms cancel exactly; drop them before subtracting
    auto at = a.terms();
    auto bt = b.terms();
    at.erase(at.begin());
    bt.erase(bt.begin());
    return (Poly::from_sorted_terms(ring_, std::move(at)) - Poly::from_sorted_terms(ring_, std::move(bt))).terms();
  }

  // Normal strategy with sugar: minimal sugar, then minimal lcm, then indices.
  Pair take_pair() {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const auto& a = pairs_[k];
      const auto& b = pairs_[best];
      if (a.sugar != b.sugar) {
        if (a.sugar < b.sugar) best = k;
        continue;
      }
      int c = order_.compare(a.lcm, b.lcm);
      if (c < 0 || (c == 0 && std::pair(a.i, a.j) < std::pair(b.i, b.j))) best = k;
    }
    Pair p = pairs_[best];
    pairs_[best] = pairs_.back();
    pairs_.pop_back();
    return p;
  }

  unsigned pair_sugar(int i, int j, const Monomial& L) const {
    const auto& a = elems_[static_cast<std::size_t>(i)];
    const auto& b = elems_[static_cast<std::size_t>(j)];
    return std::max(a.sugar + (L.deg - a.lm.deg), b.sugar + (L.deg - b.lm.deg));
  }

  // Gebauer-Moeller update for a new element h.
  void insert(Poly p, unsigned sugar) {
    Monomial lm = p.leading_monomial();
    int h = static_cast<int>(elems_.size());
    elems_.push_back({std::move(p), lm, std::max(sugar, lm.deg)});

    struct Candidate {
      int k;
      Monomial lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Candidate> cands;
    for (int k = 0; k < h; ++k) {
      const auto& e = elems_[static_cast<std::size_t>(k)];
      if (e.redundant) continue;
      cands.push_back({k, dlocus::lcm(lm, e.lm), dlocus::coprime(lm, e.lm)});
    }
    // chain criterion among the new pairs: drop (h,k1) when some other (h,k2)
    // has an lcm dividing lcm(h,k1); on equal lcms the later survivor wins
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (cands[a].coprime) continue;
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || !cands[b].keep) continue;
        if (!divides(cands[b].lcm, cands[a].lcm)) continue;
        if (cands[b].lcm == cands[a].lcm && b < a) continue;
        cands[a].keep = false;
        break;
      }
    }
    // old pairs whose lcm is strictly divisible through lm(h)
    std::erase_if(pairs_, [&](const Pair& pr) {
      if (!divides(lm, pr.lcm)) return false;
      auto l1 = dlocus::lcm(elems_[static_cast<std::size_t>(pr.i)].lm, lm);
      auto l2 = dlocus::lcm(elems_[static_cast<std::size_t>(pr.j)].lm, lm);
      return !(l1 == pr.lcm) && !(l2 == pr.lcm);
    });
    for (const auto& c : cands) {
      if (!c.keep || c.coprime) continue;
      pairs_.push_back({c.k, h, c.lcm, pair_sugar(c.k, h, c.lcm)});
      ++stats_.pairs_created;
    }
    for (int k = 0; k < h; ++k) {
      auto& e = elems_[static_cast<std::size_t>(k)];
      if (!e.redundant && divides(lm, e.lm)) e.redundant = true;
    }
    rebuild_reducer();
  }

  void rebuild_reducer() {
    reducer_.clear();
    for (const auto& e : elems_)
      if (!e.redundant) reducer_.add(e.poly);
  }

  GroebnerBasis<Field> finish() {
    std::vector<Poly> minimal;
    for (const auto& e : elems_)
      if (!e.redundant) minimal.push_back(e.poly);
    std::vector<Poly> reduced;
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      Reducer<Field> others(field_, order_);
      for (std::size_t m = 0; m < minimal.size(); ++m)
        if (m != k) others.add(minimal[m]);
      auto tail = minimal[k].terms();
      auto lead = tail.front();
      tail.erase(tail.begin());
      auto rem = others.reduce(std::move(tail), true, stats_.reduction_steps);
      rem.insert(rem.begin(), lead);
      reduced.push_back(Poly::from_sorted_terms(ring_, std::move(rem)).monic());
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
      return order_.compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return GroebnerBasis<Field>(ring_, std::move(reduced), stats_);
  }

  RingPtr<Field> ring_;
  const Field& field_;
  const MonomialOrder& order_;
  Budget budget_;
  Reducer<Field> reducer_;
  std::vector<Element> elems_;
  std::vector<Pair> pairs_;
  GroebnerStats stats_;
};

template <class Field>
std::optional<GroebnerBasis<Field>> load_basis(const RingPtr<Field>& ring, const std::string& key) {
  auto* store = active_basis_store();
  if (!store) return std::nullopt;
  auto text = store->load(key);
  if (!text) return std::nullopt;
  try {
    std::vector<Polynomial<Field>> gens;
    for (const auto& s : *text) gens.push_back(parse_polynomial(ring, s).monic());
    std::sort(gens.begin(), gens.end(), [&](const auto& a, const auto& b) {
      return ring->order().compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    GroebnerStats stats;
    stats.from_cache = true;
    return GroebnerBasis<Field>(ring, std::move(gens), stats);
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry: recompute
  }
}

}  // namespace detail

/// Reduced Groebner basis of the ideal generated by `gens` under the order
/// of their ring. Throws ResourceLimit when the active budget is exceeded.
template <class Field>
GroebnerBasis<Field> buchberger(const std::vector<Polynomial<Field>>& gens, const Budget& budget = current_budget()) {
  if (gens.empty()) throw std::invalid_argument("buchberger needs at least one generator");
  const auto& ring = gens.front().ring();
  std::string key;
  if (active_basis_store()) {
    key = basis_cache_key(ring, gens);
    if (auto cached = detail::load_basis(ring, key)) return *cached;
  }
  auto gb = detail::Buchberger<Field>(ring, budget).run(gens);
  if (auto* store = active_basis_store()) {
    std::vector<std::string> text;
    for (const auto& g : gb.generators()) text.push_back(g.normalized().to_string());
    store->save(key, text);
  }
  return gb;
}

/// Basis under an explicit order; lives in the ring carrying that order.
template <class Field>
GroebnerBasis<Field> buchberger(const std::vector<Polynomial<Field>>& gens, const MonomialOrder& order,
                                const Budget& budget = current_budget()) {
  if (gens.empty()) throw std::invalid_argument("buchberger needs at least one generator");
  auto ring = gens.front().ring()->with_order(order);
  std::vector<Polynomial<Field>> mapped;
  for (const auto& g : gens) mapped.push_back(g.map_to(ring));
  return buchberger(mapped, budget);
}

}  // namespace dlocus
