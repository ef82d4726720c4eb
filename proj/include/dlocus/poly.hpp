#pragma once

// Sparse multivariate polynomials over an exact field.
//
// A Ring owns the variable list (each variable tagged with a coordinate
// block), the coefficient field and the monomial order. Every Polynomial
// carries a pointer to its ring and keeps its terms strictly descending under
// that ring's order. Mixing rings is an error; moving a polynomial to another
// ring is always explicit (`map_to`).

#include "dlocus/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dlocus {

enum class Block : std::uint8_t { x, y, u, aux };

inline const char* block_name(Block b) {
  switch (b) {
    case Block::x: return "x";
    case Block::y: return "y";
    case Block::u: return "u";
    case Block::aux: return "aux";
  }
  return "?";
}

struct Variable {
  std::string name;
  int index = 0;  // position inside its block, 0-based
  Block block = Block::x;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class RingMismatch : public std::logic_error {
 public:
  RingMismatch() : std::logic_error("operands live in different polynomial rings") {}
};

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingAssignment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Monomials

inline constexpr int kMaxVars = 64;

struct Monomial {
  std::array<std::uint8_t, kMaxVars> exp{};
  std::uint32_t deg = 0;

  std::uint8_t operator[](int i) const { return exp[static_cast<std::size_t>(i)]; }

  void set(int i, unsigned e) {
    if (e > 255) throw std::overflow_error("exponent exceeds 255");
    deg = deg - exp[static_cast<std::size_t>(i)] + e;
    exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
  }

  /// Bit i set iff variable i occurs; a cheap divisibility pre-filter.
  std::uint64_t support_mask() const {
    std::uint64_t m = 0;
    for (int i = 0; i < kMaxVars; ++i)
      if (exp[static_cast<std::size_t>(i)]) m |= std::uint64_t{1} << i;
    return m;
  }

  bool is_one() const { return deg == 0; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.deg == b.deg && a.exp == b.exp;
  }
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  unsigned overflow = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned{a.exp[i]} + b.exp[i];
    overflow |= s;
    r.exp[i] = static_cast<std::uint8_t>(s);
  }
  if (overflow > 255) throw std::overflow_error("exponent exceeds 255");
  r.deg = a.deg + b.deg;
  return r;
}

/// True iff a divides b.
inline bool divides(const Monomial& a, const Monomial& b) {
  if (a.deg > b.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.exp[i] > b.exp[i]) return false;
  return true;
}

/// b / a, assuming a | b.
inline Monomial quotient(const Monomial& b, const Monomial& a) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint8_t>(b.exp[i] - a.exp[i]);
  r.deg = b.deg - a.deg;
  return r;
}

inline Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::uint32_t d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exp[i] = std::max(a.exp[i], b.exp[i]);
    d += r.exp[i];
  }
  r.deg = d;
  return r;
}

inline bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.exp[i] && b.exp[i]) return false;
  return true;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto e : m.exp) h = (h ^ e) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Monomial orders

class MonomialOrder {
 public:
  enum class Kind { lex, grevlex, block };

  /// One block of a product order; `kind` is lex or grevlex.
  struct BlockSpec {
    std::vector<int> vars;
    Kind kind = Kind::grevlex;
    friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
  };

  static MonomialOrder lex(int nvars) { return MonomialOrder(Kind::lex, nvars, {}); }
  static MonomialOrder grevlex(int nvars) { return MonomialOrder(Kind::grevlex, nvars, {}); }

  /// Product order: earlier blocks dominate later ones. The blocks must
  /// partition the variables.
  static MonomialOrder block(int nvars, std::vector<BlockSpec> blocks) {
    std::vector<int> seen(static_cast<std::size_t>(nvars), 0);
    for (const auto& b : blocks) {
      if (b.kind == Kind::block) throw std::invalid_argument("nested block orders are not supported");
      for (int v : b.vars) {
        if (v < 0 || v >= nvars || seen[static_cast<std::size_t>(v)]++)
          throw std::invalid_argument("block order does not partition the variables");
      }
    }
    if (std::count(seen.begin(), seen.end(), 1) != nvars)
      throw std::invalid_argument("block order does not partition the variables");
    std::erase_if(blocks, [](const BlockSpec& b) { return b.vars.empty(); });
    return MonomialOrder(Kind::block, nvars, std::move(blocks));
  }

  /// Elimination order: `eliminated` (grevlex) above the rest (grevlex).
  static MonomialOrder elimination(int nvars, const std::vector<int>& eliminated) {
    std::vector<int> rest;
    for (int i = 0; i < nvars; ++i)
      if (std::find(eliminated.begin(), eliminated.end(), i) == eliminated.end()) rest.push_back(i);
    auto elim = eliminated;
    std::sort(elim.begin(), elim.end());
    return block(nvars, {{elim, Kind::grevlex}, {rest, Kind::grevlex}});
  }

  Kind kind() const { return kind_; }
  int nvars() const { return nvars_; }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }

  /// Three-way comparison: negative if a < b.
  int compare(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
      case Kind::lex: {
        int c = std::memcmp(a.exp.data(), b.exp.data(), static_cast<std::size_t>(nvars_));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
      case Kind::grevlex: {
        if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
        for (int i = nvars_ - 1; i >= 0; --i) {
          if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        }
        return 0;
      }
      case Kind::block: {
        for (const auto& blk : blocks_) {
          if (int c = compare_block(blk, a, b)) return c;
        }
        return 0;
      }
    }
    return 0;
  }

  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  /// True when every variable in `vars` outranks all remaining variables.
  bool eliminates(const std::vector<int>& vars) const {
    if (vars.empty()) return true;
    if (kind_ == Kind::lex) {
      auto sorted = vars;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i)) return false;
      return true;
    }
    if (kind_ != Kind::block) return static_cast<int>(vars.size()) == nvars_;
    std::vector<int> covered;
    for (const auto& blk : blocks_) {
      if (covered.size() >= vars.size()) break;
      covered.insert(covered.end(), blk.vars.begin(), blk.vars.end());
    }
    if (covered.size() != vars.size()) return false;
    return std::is_permutation(covered.begin(), covered.end(), vars.begin());
  }

  /// Stable textual key, e.g. "grevlex" or "block[grevlex(0,1);grevlex(2,3)]".
  std::string key() const {
    if (kind_ == Kind::lex) return "lex";
    if (kind_ == Kind::grevlex) return "grevlex";
    std::string s = "block[";
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b) s += ';';
      s += blocks_[b].kind == Kind::lex ? "lex(" : "grevlex(";
      for (std::size_t i = 0; i < blocks_[b].vars.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(blocks_[b].vars[i]);
      }
      s += ')';
    }
    return s + "]";
  }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind_ == b.kind_ && a.nvars_ == b.nvars_ && a.blocks_ == b.blocks_;
  }

 private:
  MonomialOrder(Kind kind, int nvars, std::vector<BlockSpec> blocks)
      : kind_(kind), nvars_(nvars), blocks_(std::move(blocks)) {
    if (nvars < 0 || nvars > kMaxVars)
      throw std::invalid_argument("rings support at most " + std::to_string(kMaxVars) + " variables");
  }

  static int compare_block(const BlockSpec& blk, const Monomial& a, const Monomial& b) {
    if (blk.kind == Kind::lex) {
      for (int v : blk.vars)
        if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
      return 0;
    }
    unsigned da = 0, db = 0;
    for (int v : blk.vars) {
      da += a[v];
      db += b[v];
    }
    if (da != db) return da < db ? -1 : 1;
    for (auto it = blk.vars.rbegin(); it != blk.vars.rend(); ++it)
      if (a[*it] != b[*it]) return a[*it] > b[*it] ? -1 : 1;
    return 0;
  }

  Kind kind_;
  int nvars_;
  std::vector<BlockSpec> blocks_;
};

// ---------------------------------------------------------------------------
// Rings

template <class Field>
class Ring;

template <class Field>
using RingPtr = std::shared_ptr<const Ring<Field>>;

template <class Field>
class Ring {
 public:
  using Scalar = typename Field::value_type;

  static RingPtr<Field> create(Field field, std::vector<Variable> vars, std::optional<MonomialOrder> order = {}) {
    int n = static_cast<int>(vars.size());
    if (n > kMaxVars) throw std::invalid_argument("rings support at most " + std::to_string(kMaxVars) + " variables");
    auto o = order ? *order : MonomialOrder::grevlex(n);
    if (o.nvars() != n) throw std::invalid_argument("monomial order arity does not match the ring");
    return RingPtr<Field>(new Ring(std::move(field), std::move(vars), std::move(o)));
  }

  /// Ring with the given blocks, each a list of variable names.
  static RingPtr<Field> from_blocks(Field field, const std::vector<std::pair<Block, std::vector<std::string>>>& blocks,
                                    std::optional<MonomialOrder::Kind> kind = {}) {
    std::vector<Variable> vars;
    for (const auto& [blk, names] : blocks)
      for (std::size_t i = 0; i < names.size(); ++i) vars.push_back({names[i], static_cast<int>(i), blk});
    int n = static_cast<int>(vars.size());
    auto order = kind == MonomialOrder::Kind::lex ? MonomialOrder::lex(n) : MonomialOrder::grevlex(n);
    return create(std::move(field), std::move(vars), order);
  }

  const Field& field() const { return field_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<Variable>& variables() const { return vars_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  const Variable& variable(int i) const { return vars_.at(static_cast<std::size_t>(i)); }

  /// Index of a variable by name, or -1.
  int index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
  }

  std::vector<int> indices_of(Block b) const {
    std::vector<int> out;
    for (int i = 0; i < nvars(); ++i)
      if (vars_[static_cast<std::size_t>(i)].block == b) out.push_back(i);
    return out;
  }

  bool has_block(Block b) const {
    return std::any_of(vars_.begin(), vars_.end(), [b](const Variable& v) { return v.block == b; });
  }

  RingPtr<Field> with_order(MonomialOrder order) const { return create(field_, vars_, std::move(order)); }

  /// Same variables plus `extra` appended at the end; the ambient order is
  /// rebuilt with the same kind (block orders fall back to grevlex).
  RingPtr<Field> extended(const std::vector<std::pair<std::string, Block>>& extra) const {
    auto vars = vars_;
    for (const auto& [name, blk] : extra) {
      if (index_of(name) >= 0) throw std::invalid_argument("variable already in ring: " + name);
      int idx = 0;
      for (const auto& v : vars)
        if (v.block == blk) ++idx;
      vars.push_back({name, idx, blk});
    }
    int n = static_cast<int>(vars.size());
    auto o = order_.kind() == MonomialOrder::Kind::lex ? MonomialOrder::lex(n) : MonomialOrder::grevlex(n);
    return create(field_, std::move(vars), o);
  }

  /// A variable name not yet used in this ring.
  std::string fresh_name(const std::string& stem) const {
    if (index_of(stem) < 0) return stem;
    for (int k = 1;; ++k)
      if (index_of(stem + std::to_string(k)) < 0) return stem + std::to_string(k);
  }

  bool same_as(const Ring& other) const {
    return this == &other || (field_ == other.field_ && vars_ == other.vars_ && order_ == other.order_);
  }

  /// "x1,x2,..." for cache keys and diagnostics.
  std::string variable_list() const {
    std::string s;
    for (const auto& v : vars_) {
      if (!s.empty()) s += ',';
      s += v.name;
    }
    return s;
  }

 private:
  Ring(Field field, std::vector<Variable> vars, MonomialOrder order)
      : field_(std::move(field)), vars_(std::move(vars)), order_(std::move(order)) {
    for (int i = 0; i < nvars(); ++i) {
      if (!by_name_.emplace(vars_[static_cast<std::size_t>(i)].name, i).second)
        throw std::invalid_argument("duplicate variable name: " + vars_[static_cast<std::size_t>(i)].name);
    }
  }

  Field field_;
  std::vector<Variable> vars_;
  MonomialOrder order_;
  std::unordered_map<std::string, int> by_name_;
};

// ---------------------------------------------------------------------------
// Polynomials

template <class Field>
class Polynomial {
 public:
  using Scalar = typename Field::value_type;
  using RingType = Ring<Field>;

  struct Term {
    Monomial mono;
    Scalar coeff;
  };

  explicit Polynomial(RingPtr<Field> ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr<Field> ring, Scalar c) {
    Polynomial p(std::move(ring));
    if (!p.field().is_zero(c)) p.terms_.push_back({Monomial{}, std::move(c)});
    return p;
  }
  template <std::integral I>
  static Polynomial constant(RingPtr<Field> ring, I c) {
    auto s = ring->field().from_int(static_cast<std::int64_t>(c));
    return constant(std::move(ring), std::move(s));
  }

  static Polynomial variable(RingPtr<Field> ring, int index) {
    if (index < 0 || index >= ring->nvars()) throw std::out_of_range("variable index out of range");
    Monomial m;
    m.set(index, 1);
    return monomial(std::move(ring), m, ring->field().one());
  }
  static Polynomial variable(RingPtr<Field> ring, const std::string& name) {
    int idx = ring->index_of(name);
    if (idx < 0) throw std::invalid_argument("unknown variable: " + name);
    return variable(std::move(ring), idx);
  }

  static Polynomial monomial(RingPtr<Field> ring, const Monomial& m, Scalar c) {
    Polynomial p(std::move(ring));
    if (!p.field().is_zero(c)) p.terms_.push_back({m, std::move(c)});
    return p;
  }

  /// Sorts, merges duplicates and drops zero coefficients.
  static Polynomial from_terms(RingPtr<Field> ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    const auto& order = p.ring_->order();
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return order.compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = p.field().add(p.terms_.back().coeff, t.coeff);
        if (p.field().is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
      } else if (!p.field().is_zero(t.coeff)) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Trusts the caller: terms already strictly descending with nonzero coefficients.
  static Polynomial from_sorted_terms(RingPtr<Field> ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }

  const RingPtr<Field>& ring() const { return ring_; }
  const Field& field() const { return ring_->field(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  const Term& leading_term() const {
    if (terms_.empty()) throw std::logic_error("zero polynomial has no leading term");
    return terms_.front();
  }
  const Monomial& leading_monomial() const { return leading_term().mono; }
  const Scalar& leading_coefficient() const { return leading_term().coeff; }

  /// Total degree; -1 for the zero polynomial.
  int total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.mono.deg));
    return d;
  }

  int degree_in(int var) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.mono[var]));
    return d;
  }

  /// Variables (by index) occurring in some term.
  std::uint64_t support_mask() const {
    std::uint64_t m = 0;
    for (const auto& t : terms_) m |= t.mono.support_mask();
    return m;
  }

  bool uses_only(const std::vector<int>& vars) const {
    std::uint64_t allowed = 0;
    for (int v : vars) allowed |= std::uint64_t{1} << v;
    return (support_mask() & ~allowed) == 0;
  }

  bool is_homogeneous() const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.deg == terms_[0].mono.deg; });
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = field().neg(t.coeff);
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return a.combine(b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a.combine(b, true); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.ring_);
    const auto& f = a.field();
    std::unordered_map<Monomial, Scalar, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        auto m = s.mono * t.mono;
        auto c = f.mul(s.coeff, t.coeff);
        auto [it, inserted] = acc.try_emplace(m, c);
        if (!inserted) it->second = f.add(it->second, c);
      }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!f.is_zero(c)) terms.push_back({m, std::move(c)});
    return from_terms(a.ring_, std::move(terms));
  }

  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  Polynomial scaled(const Scalar& c) const {
    if (field().is_zero(c)) return Polynomial(ring_);
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = field().mul(t.coeff, c);
    return r;
  }

  /// c * m * this; term order is preserved since orders are multiplicative.
  Polynomial mul_term(const Monomial& m, const Scalar& c) const {
    if (field().is_zero(c)) return Polynomial(ring_);
    Polynomial r = *this;
    for (auto& t : r.terms_) {
      t.mono = t.mono * m;
      t.coeff = field().mul(t.coeff, c);
    }
    return r;
  }

  Polynomial pow(unsigned e) const {
    auto result = constant(ring_, field().one());
    auto base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return scaled(field().inv(leading_coefficient()));
  }

  /// Canonical scaling for display and hashing: monic over GF(p); over Q
  /// integer coefficients with content 1 and a positive leading coefficient.
  Polynomial normalized() const;

  Polynomial derivative(int var) const {
    if (var < 0 || var >= ring_->nvars()) throw std::out_of_range("variable index out of range");
    std::vector<Term> out;
    for (const auto& t : terms_) {
      unsigned e = t.mono[var];
      if (!e) continue;
      Term d{t.mono, field().mul(t.coeff, field().from_int(e))};
      d.mono.set(var, e - 1);
      if (!field().is_zero(d.coeff)) out.push_back(std::move(d));
    }
    return from_sorted_terms(ring_, std::move(out));
  }

  /// Evaluate at a full assignment indexed like the ring's variables.
  Scalar evaluate(std::span<const Scalar> point) const {
    if (static_cast<int>(point.size()) < ring_->nvars()) throw MissingAssignment("point does not cover the ring");
    const auto& f = field();
    Scalar sum = f.zero();
    for (const auto& t : terms_) {
      Scalar v = t.coeff;
      for (int i = 0; i < ring_->nvars(); ++i)
        for (unsigned k = 0; k < t.mono[i]; ++k) v = f.mul(v, point[static_cast<std::size_t>(i)]);
      sum = f.add(sum, v);
    }
    return sum;
  }

  /// Evaluate with a name-keyed assignment; every variable of this
  /// polynomial must be assigned.
  Scalar evaluate(const std::map<std::string, Scalar>& point) const {
    std::vector<Scalar> full(static_cast<std::size_t>(ring_->nvars()), field().zero());
    auto mask = support_mask();
    for (int i = 0; i < ring_->nvars(); ++i) {
      auto it = point.find(ring_->variable(i).name);
      if (it != point.end()) {
        full[static_cast<std::size_t>(i)] = it->second;
      } else if (mask & (std::uint64_t{1} << i)) {
        throw MissingAssignment("no value for variable " + ring_->variable(i).name);
      }
    }
    return evaluate(full);
  }

  /// Ring homomorphism: variable i of this ring goes to images[i].
  Polynomial substitute(const std::vector<Polynomial>& images) const {
    if (static_cast<int>(images.size()) != ring_->nvars()) throw SizeError("substitution needs one image per variable");
    if (images.empty()) throw SizeError("empty substitution");
    auto target = images.front().ring();
    auto result = Polynomial(target);
    for (const auto& t : terms_) {
      auto term = constant(target, t.coeff);
      for (int i = 0; i < ring_->nvars(); ++i)
        if (t.mono[i]) term *= images[static_cast<std::size_t>(i)].pow(t.mono[i]);
      result += term;
    }
    return result;
  }

  /// Same polynomial in another ring over the same field, matching
  /// variables by name.
  Polynomial map_to(const RingPtr<Field>& target) const {
    if (target.get() == ring_.get()) return *this;
    std::vector<int> idx(static_cast<std::size_t>(ring_->nvars()), -1);
    auto mask = support_mask();
    for (int i = 0; i < ring_->nvars(); ++i) {
      idx[static_cast<std::size_t>(i)] = target->index_of(ring_->variable(i).name);
      if (idx[static_cast<std::size_t>(i)] < 0 && (mask & (std::uint64_t{1} << i)))
        throw std::invalid_argument("variable " + ring_->variable(i).name + " missing from target ring");
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Monomial m;
      for (int i = 0; i < ring_->nvars(); ++i)
        if (t.mono[i]) m.set(idx[static_cast<std::size_t>(i)], t.mono[i]);
      out.push_back({m, t.coeff});
    }
    return from_terms(target, std::move(out));
  }

  /// Text in the problem-file grammar, e.g. "u11*u22-u12*u21".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    const auto& f = field();
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      bool neg = f.is_negative(t.coeff);
      auto mag = neg ? f.neg(t.coeff) : t.coeff;
      if (neg) s += '-';
      else if (k) s += '+';
      bool unit = f.is_one(mag);
      if (!unit || t.mono.is_one()) s += f.to_string(mag);
      bool first = unit;
      for (int i = 0; i < ring_->nvars(); ++i) {
        unsigned e = t.mono[i];
        if (!e) continue;
        if (!first) s += '*';
        first = false;
        s += ring_->variable(i).name;
        if (e > 1) s += '^' + std::to_string(e);
      }
    }
    return s;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (!a.ring_->same_as(*b.ring_) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].mono == b.terms_[i].mono) || !a.field().equal(a.terms_[i].coeff, b.terms_[i].coeff))
        return false;
    }
    return true;
  }

  void check_ring(const Polynomial& other) const {
    if (ring_.get() != other.ring_.get() && !ring_->same_as(*other.ring_)) throw RingMismatch();
  }

 private:
  Polynomial combine(const Polynomial& b, bool subtract) const {
    check_ring(b);
    const auto& f = field();
    const auto& order = ring_->order();
    std::vector<Term> out;
    out.reserve(terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < b.terms_.size()) {
      int c = i == terms_.size() ? -1 : j == b.terms_.size() ? 1 : order.compare(terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        out.push_back(terms_[i++]);
      } else if (c < 0) {
        auto t = b.terms_[j++];
        if (subtract) t.coeff = f.neg(t.coeff);
        out.push_back(std::move(t));
      } else {
        auto s = subtract ? f.sub(terms_[i].coeff, b.terms_[j].coeff) : f.add(terms_[i].coeff, b.terms_[j].coeff);
        if (!f.is_zero(s)) out.push_back({terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return from_sorted_terms(ring_, std::move(out));
  }

  RingPtr<Field> ring_;
  std::vector<Term> terms_;
};

template <class Field>
Polynomial<Field> Polynomial<Field>::normalized() const {
  if (is_zero()) return *this;
  return monic();
}

template <>
inline Polynomial<RationalField> Polynomial<RationalField>::normalized() const {
  if (is_zero()) return *this;
  mpz_class den = 1, content = 0;
  for (const auto& t : terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  for (const auto& t : terms_) {
    mpz_class v = t.coeff.get_num() * (den / t.coeff.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
  }
  mpq_class scale(den, content);
  scale.canonicalize();
  if (sgn(leading_coefficient()) < 0) scale = -scale;
  return scaled(scale);
}

template <class Field>
std::ostream& operator<<(std::ostream& os, const Polynomial<Field>& p) {
  return os << p.to_string();
}

/// Checks the canonical-form invariants: strictly descending terms under the
/// ring order, nonzero coefficients, consistent cached degrees.
template <class Field>
bool is_canonical(const Polynomial<Field>& p) {
  const auto& terms = p.terms();
  const auto& order = p.ring()->order();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (p.field().is_zero(terms[i].coeff)) return false;
    unsigned d = 0;
    for (int v = 0; v < kMaxVars; ++v) {
      if (v >= p.ring()->nvars() && terms[i].mono[v]) return false;
      d += terms[i].mono[v];
    }
    if (d != terms[i].mono.deg) return false;
    if (i && order.compare(terms[i - 1].mono, terms[i].mono) <= 0) return false;
  }
  return true;
}

/// Formal partial derivative.
template <class Field>
Polynomial<Field> derivative(const Polynomial<Field>& f, int var) {
  return f.derivative(var);
}

// ---------------------------------------------------------------------------
// Polynomial matrices

template <class Field>
class PolyMatrix {
 public:
  using Poly = Polynomial<Field>;

  PolyMatrix(RingPtr<Field> ring, int rows, int cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols),
        entries_(static_cast<std::size_t>(rows * cols), Poly(ring_)) {
    if (rows <= 0 || cols <= 0) throw SizeError("matrix dimensions must be positive");
  }

  static PolyMatrix from_rows(const std::vector<std::vector<Poly>>& rows) {
    if (rows.empty() || rows.front().empty()) throw SizeError("matrix dimensions must be positive");
    PolyMatrix m(rows.front().front().ring(), static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows_; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != m.cols_) throw SizeError("ragged matrix");
      for (int j = 0; j < m.cols_; ++j) m.set(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const RingPtr<Field>& ring() const { return ring_; }

  const Poly& at(int i, int j) const { return entries_.at(static_cast<std::size_t>(i * cols_ + j)); }
  void set(int i, int j, Poly p) {
    if (p.ring().get() != ring_.get() && !p.ring()->same_as(*ring_)) throw RingMismatch();
    entries_.at(static_cast<std::size_t>(i * cols_ + j)) = std::move(p);
  }

  PolyMatrix transposed() const {
    PolyMatrix t(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
    return t;
  }

  /// This matrix with `row` appended at the bottom.
  PolyMatrix with_row(const std::vector<Poly>& row) const {
    if (static_cast<int>(row.size()) != cols_) throw SizeError("row length does not match column count");
    PolyMatrix m(ring_, rows_ + 1, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.set(i, j, at(i, j));
    for (int j = 0; j < cols_; ++j) m.set(rows_, j, row[static_cast<std::size_t>(j)]);
    return m;
  }

  /// Determinant of the square submatrix on the given rows and columns.
  Poly determinant(const std::vector<int>& rows, const std::vector<int>& cols) const {
    if (rows.size() != cols.size() || rows.empty()) throw SizeError("determinant needs a square selection");
    std::unordered_map<std::uint64_t, Poly> memo;
    std::uint64_t mask = 0;
    for (int c : cols) mask |= std::uint64_t{1} << c;
    return laplace(rows, 0, mask, memo);
  }

  Poly determinant() const {
    if (rows_ != cols_) throw SizeError("determinant of a non-square matrix");
    std::vector<int> idx(static_cast<std::size_t>(rows_));
    std::iota(idx.begin(), idx.end(), 0);
    return determinant(idx, idx);
  }

  /// All k x k minors: row subsets in lexicographic order, and for each, the
  /// column subsets in lexicographic order.
  std::vector<Poly> minors(int k) const {
    if (k <= 0 || k > std::min(rows_, cols_))
      throw SizeError("minor size " + std::to_string(k) + " exceeds matrix dimensions");
    if (cols_ > 64) throw SizeError("minors support at most 64 columns");
    std::vector<Poly> out;
    auto row_sets = subsets(rows_, k);
    auto col_sets = subsets(cols_, k);
    for (const auto& rs : row_sets) {
      // one memo per row subset: entries are keyed by the remaining columns
      std::unordered_map<std::uint64_t, Poly> memo;
      for (const auto& cs : col_sets) {
        std::uint64_t mask = 0;
        for (int c : cs) mask |= std::uint64_t{1} << c;
        out.push_back(laplace(rs, 0, mask, memo));
      }
    }
    return out;
  }

  /// k-element subsets of {0, ..., n-1} in lexicographic order.
  static std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
      out.push_back(cur);
      int i = k - 1;
      while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++cur[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
  }

 private:
  // Cofactor expansion along rows[depth] over the columns in `mask`.
  Poly laplace(const std::vector<int>& rows, std::size_t depth, std::uint64_t mask,
               std::unordered_map<std::uint64_t, Poly>& memo) const {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    int r = rows[depth];
    Poly result(ring_);
    if (depth + 1 == rows.size()) {
      int c = std::countr_zero(mask);
      result = at(r, c);
    } else {
      bool negative = false;
      for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
        int c = std::countr_zero(rest);
        const auto& entry = at(r, c);
        if (!entry.is_zero()) {
          auto minor = laplace(rows, depth + 1, mask & ~(std::uint64_t{1} << c), memo);
          if (!minor.is_zero()) {
            auto term = entry * minor;
            result = negative ? result - term : result + term;
          }
        }
        negative = !negative;
      }
    }
    memo.emplace(mask, result);
    return result;
  }

  RingPtr<Field> ring_;
  int rows_, cols_;
  std::vector<Poly> entries_;
};

/// Entry (i, j) = d fs[i] / d vars[j].
template <class Field>
PolyMatrix<Field> jacobian(const std::vector<Polynomial<Field>>& fs, const std::vector<int>& vars) {
  if (fs.empty()) throw SizeError("jacobian of an empty list");
  if (vars.empty()) throw SizeError("jacobian with no variables");
  PolyMatrix<Field> m(fs.front().ring(), static_cast<int>(fs.size()), static_cast<int>(vars.size()));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j)
      m.set(static_cast<int>(i), static_cast<int>(j), fs[i].derivative(vars[j]));
  return m;
}

template <class Field>
std::vector<Polynomial<Field>> minors(const PolyMatrix<Field>& m, int k) {
  return m.minors(k);
}

}  // namespace dlocus
