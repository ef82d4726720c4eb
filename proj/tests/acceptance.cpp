// Acceptance run: one PASS/FAIL line per criterion, each under a pinned time
// budget. Set DLOCUS_STRETCH=1 to also report the expensive model
// reproductions (never gating); DLOCUS_STRETCH_TIMEOUT bounds each of them in
// seconds (default 600).

#include "dlocus/models.hpp"
#include "dlocus/poly_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace dlocus;
using GF = PrimeField;
using QQ = RationalField;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

template <class Field>
RingPtr<Field> x_ring(std::vector<std::string> names, Field F = Field{}) {
  return Ring<Field>::from_blocks(F, {{Block::x, std::move(names)}});
}

template <class Field>
Ideal<Field> ideal(const RingPtr<Field>& R, const std::string& gens) {
  return Ideal<Field>(R, parse_polynomial_list(R, gens));
}

const char* kSurface = "x3^2-x2*x4, x2*x3-x1*x4, x2^2-x1*x3";
const char* kDet = "x11*x22-x12*x21";

// ---------------------------------------------------------------------------
// Independent helpers used by the oracles.

/// S(f, g) built directly from leading terms.
template <class Field>
Polynomial<Field> spoly(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  const auto& F = f.field();
  auto L = lcm(f.leading_monomial(), g.leading_monomial());
  auto mf = Polynomial<Field>::monomial(f.ring(), quotient(L, f.leading_monomial()), F.inv(f.leading_coefficient()));
  auto mg = Polynomial<Field>::monomial(g.ring(), quotient(L, g.leading_monomial()), F.inv(g.leading_coefficient()));
  return mf * f - mg * g;
}

/// Dense univariate polynomials, lowest degree first.
template <class Field>
using Uni = std::vector<typename Field::value_type>;

template <class Field>
void trim(const Field& F, Uni<Field>& a) {
  while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

template <class Field>
Uni<Field> uni_mod(const Field& F, Uni<Field> a, const Uni<Field>& b) {
  while (a.size() >= b.size()) {
    auto q = F.div(a.back(), b.back());
    auto shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(q, b[i]));
    trim(F, a);
  }
  return a;
}

template <class Field>
Uni<Field> uni_gcd(const Field& F, Uni<Field> a, Uni<Field> b) {
  while (!b.empty()) {
    auto r = uni_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Number of distinct roots of p when p is squarefree, else nullopt.
template <class Field>
std::optional<int> squarefree_root_count(const Field& F, Uni<Field> p) {
  trim(F, p);
  Uni<Field> d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(F.mul(F.from_int(static_cast<std::int64_t>(i)), p[i]));
  trim(F, d);
  if (uni_gcd(F, p, d).size() != 1) return std::nullopt;
  return static_cast<int>(p.size()) - 1;
}

/// Critical points of unit ED on the plane curve f at u, counted through
/// Res_x2(f, g) with g = (u1 - x1) df/dx2 - (u2 - x2) df/dx1. Requires
/// deg_x2 f = 2 with constant leading coefficient.
template <class Field>
std::optional<int> resultant_critical_count(const Field& F, const std::string& conic,
                                            const std::vector<typename Field::value_type>& u) {
  using Poly = Polynomial<Field>;
  auto R = x_ring<Field>({"x1", "x2"}, F);
  auto f = parse_polynomial(R, conic);
  auto g = (Poly::constant(R, u[0]) - Poly::variable(R, 0)) * f.derivative(1) -
           (Poly::constant(R, u[1]) - Poly::variable(R, 1)) * f.derivative(0);
  // coefficients in x2 as polynomials in x1
  auto R1 = x_ring<Field>({"x1"}, F);
  auto coeffs = [&](const Poly& p) {
    std::vector<Poly> c(3, Poly(R1));
    for (const auto& t : p.terms()) {
      Monomial m;
      m.set(0, t.mono[0]);
      c.at(t.mono[1]) += Poly::monomial(R1, m, t.coeff);
    }
    return c;
  };
  auto a = coeffs(f), b = coeffs(g);
  Poly zero(R1);
  auto M = PolyMatrix<Field>::from_rows({{a[2], a[1], a[0], zero},
                                         {zero, a[2], a[1], a[0]},
                                         {b[2], b[1], b[0], zero},
                                         {zero, b[2], b[1], b[0]}});
  auto res = M.determinant();
  Uni<Field> dense(static_cast<std::size_t>(res.total_degree() + 1), F.zero());
  for (const auto& t : res.terms()) dense[t.mono[0]] = t.coeff;
  return squarefree_root_count(F, dense);
}

// ---------------------------------------------------------------------------
// Criteria

std::string criterion1() {
  GF F;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> nv(1, 3), ng(1, 3), deg(1, 3), nterms(1, 4);
  int spolys = 0;
  for (int k = 0; k < 50; ++k) {
    std::vector<std::string> names;
    int n = nv(rng);
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    auto R = x_ring<GF>(names);
    std::vector<Polynomial<GF>> gens;
    int m = ng(rng);
    while (static_cast<int>(gens.size()) < m) {
      Polynomial<GF> p(R);
      int d = deg(rng);
      for (int t = nterms(rng); t > 0; --t) {
        Monomial mono;
        std::uniform_int_distribution<int> var(0, n - 1), e(0, d);
        int total = e(rng);
        for (int s = 0; s < total; ++s) {
          int v = var(rng);
          mono.set(v, mono[v] + 1u);
        }
        p += Polynomial<GF>::monomial(R, mono, F.random(rng));
      }
      if (!p.is_zero()) gens.push_back(p);
    }
    for (auto kind : {MonomialOrder::Kind::grevlex, MonomialOrder::Kind::lex}) {
      auto order = kind == MonomialOrder::Kind::lex ? MonomialOrder::lex(n) : MonomialOrder::grevlex(n);
      auto G = buchberger(gens, order).generators();
      for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = i + 1; j < G.size(); ++j) {
          ++spolys;
          require(normal_form(spoly(G[i], G[j]), G).is_zero(), "an S-polynomial does not reduce to 0");
        }
      for (const auto& g : gens) require(normal_form(g.map_to(G.empty() ? g.ring() : G[0].ring()), G).is_zero(),
                                         "an input generator is not in the span of the basis");
      auto shuffled = gens;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (auto& g : shuffled) {
        auto c = F.random(rng);
        g = g.scaled(F.is_zero(c) ? F.one() : c);
      }
      require(buchberger(shuffled, order).generators() == G, "basis changed under permutation and scaling");
    }
  }
  return "50 ideals x 2 orders, " + std::to_string(spolys) + " S-polynomials reduce to 0";
}

std::string criterion2() {
  auto R = Ring<GF>::from_blocks(GF{}, {{Block::aux, {"t1", "t2"}}, {Block::x, {"x1", "x2", "x3", "x4"}}});
  auto graph = ideal(R, "x1-t1^3, x2-t1^2*t2, x3-t1*t2^2, x4-t2^3");
  auto implicit = detail::restrict_back(eliminate(graph, R->indices_of(Block::aux)), x_ring<GF>({"x1", "x2", "x3", "x4"}));
  auto expected = ideal(implicit.ring(), kSurface);
  require(implicit.contains(expected) && expected.contains(implicit), "implicit ideal differs from the three quadrics");
  return "eliminated ideal equals the three quadrics";
}

std::string criterion3() {
  auto X = ideal(x_ring<GF>({"x1", "x2", "x3", "x4"}), kSurface);
  auto sing = singular_locus(X);
  require(!sing.is_unit(), "singular locus is empty");
  for (int i = 0; i < 4; ++i)
    require(radical_membership(Polynomial<GF>::variable(X.ring(), i), sing), "x" + std::to_string(i + 1) + " not in rad Sing X");
  return "rad Sing X = <x1, x2, x3, x4>";
}

std::string criterion4() {
  std::ostringstream detail;
  for (auto [name, names, gens] : {std::tuple<std::string, std::vector<std::string>, std::string>{
                                       "det", {"x11", "x12", "x21", "x22"}, kDet},
                                   {"surface", {"x1", "x2", "x3", "x4"}, kSurface}}) {
    auto start = std::chrono::steady_clock::now();
    auto con = conormal_ideal(ideal(x_ring<GF>(names), gens));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(con.ideal.nvars() == 8, name + ": conormal ring is not 8-dimensional");
    require(con.dimension() == 4, name + ": dim Con(X) = " + std::to_string(con.dimension()));
    require(secs < 120, name + " exceeded 2 minutes");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s dim 4 (%.2fs) ", name.c_str(), secs);
    detail << buf;
  }
  return detail.str();
}

std::string criterion5() {
  auto X = ideal(x_ring<GF>({"x11", "x12", "x21", "x22"}), kDet);
  auto con = conormal_ideal(X);
  auto amb = Ambient<GF>::of(X.ring());
  auto yring = Ring<GF>::from_blocks(GF{}, {{Block::y, amb.y_names()}});
  auto dual = detail::restrict_back(eliminate(con.ideal, Block::x), yring);
  require(same_variety(dual, ideal(yring, "y11*y22-y12*y21")), "dual variety is not V(det y)");
  return "x-elimination of Con(det) = V(det y)";
}

struct SharedResults {
  std::optional<DataLocusResult<GF>> det, det_explicit, circle, circle_explicit, surface;
  std::optional<Ideal<GF>> det_A, circle_A, surface_A, surface_X;
};

SharedResults shared;

std::string criterion6() {
  auto m = models::determinantal<GF>(2, 2, 1, 0);
  auto g = m.recommended_gamma();
  auto dl = data_locus(m.X, m.subvariety().ideal, g);
  auto amb = m.ambient();
  require(same_variety(dl.ideal, ideal(amb.u(), "u11*u22-u12*u21")), "DL is not V(det u)");
  shared.det = dl;
  shared.det_A = m.subvariety().ideal;
  return "DL = V(det u), generators " + dl.ideal.groebner().generators().front().to_string();
}

std::string criterion7() {
  auto m = models::rational_normal_surface<GF>();
  const auto& A = m.subvariety("moment_curve");
  auto dl = data_locus(m.X, A.ideal, m.recommended_gamma());
  const auto& G = dl.ideal.groebner().generators();
  require(G.size() == 1, "data locus is not principal (" + std::to_string(G.size()) + " generators)");
  require(G[0].total_degree() == 7, "generator has degree " + std::to_string(G[0].total_degree()));
  require(dl.dimension() == 3 && dl.degree() == 7, "Hilbert invariants differ from a degree-7 hypersurface");
  shared.surface = dl;
  shared.surface_A = A.ideal;
  shared.surface_X = m.X;
  return "principal, generator of total degree 7 with " + std::to_string(G[0].terms().size()) + " terms";
}

std::string criterion8() {
  auto m = models::determinantal<GF>(2, 2, 1, 0);
  auto g = m.recommended_gamma();
  auto sub = shared.det ? *shared.det : data_locus(m.X, m.subvariety().ideal, g, Pipeline::substituted);
  auto ex = data_locus(m.X, m.subvariety().ideal, g, Pipeline::explicit_y);
  require(same_variety(sub.ideal, ex.ideal), "det: pipelines disagree");
  shared.det_explicit = ex;

  auto R = x_ring<GF>({"x1", "x2"});
  auto X = ideal(R, "x1^2+x2^2-1");
  auto A = ideal(R, "x1^2+x2^2-1, x1-1, x2");
  auto amb = Ambient<GF>::of(R);
  auto cs = data_locus(X, A, gamma::unit_ed(amb), Pipeline::substituted);
  auto ce = data_locus(X, A, gamma::unit_ed(amb), Pipeline::explicit_y);
  require(same_variety(cs.ideal, ce.ideal), "circle: pipelines disagree");
  require(same_variety(cs.ideal, ideal(amb.u(), "u2")), "circle: DL is not V(u2)");
  shared.circle = cs;
  shared.circle_explicit = ce;
  shared.circle_A = A;
  return "det and circle agree; circle DL = V(u2)";
}

std::string criterion9() {
  auto R = x_ring<GF>({"x1", "x2"});
  auto X = ideal(R, "x1^2+x2^2-1");
  auto amb = Ambient<GF>::of(R);
  auto g = gamma::unit_ed(amb);
  require(same_variety(lagrange_critical_ideal(X, g), projected_correspondence(X, g).ideal),
          "Lagrange and rank-condition ideals differ on the circle");

  QQ Q;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  auto rational = [&] { return Q.from_ratio(num(rng), den(rng)); };
  std::vector<mpq_class> u{rational(), rational()};
  while (Q.is_zero(u[0]) || Q.is_zero(u[1])) u = {rational(), rational()};
  // a conic with random integer coefficients and nonzero x1*x2, x2^2 terms
  auto Rq = x_ring<QQ>({"x1", "x2"});
  auto c = [&] {
    int v = num(rng);
    return Q.from_int(v == 0 ? 1 : v);
  };
  Polynomial<QQ> f(Rq);
  for (const char* mono : {"x1^2", "x1*x2", "x2^2", "x1", "x2", "1"}) f += parse_polynomial(Rq, mono).scaled(c());
  std::string conic = f.to_string();

  auto ambq = Ambient<QQ>::of(Rq);
  auto gq = gamma::unit_ed(ambq);
  auto circle = algebraic_degree(ideal(Rq, "x1^2+x2^2-1"), gq, u);
  auto circle_oracle = resultant_critical_count(Q, "x1^2+x2^2-1", u);
  require(circle.generic && circle.degree == 2, "circle: algebraic degree " + std::to_string(circle.degree));
  require(circle_oracle == 2, "circle oracle disagrees");

  auto generic = algebraic_degree(ideal(Rq, conic), gq, u);
  auto oracle = resultant_critical_count(Q, conic, u);
  require(oracle.has_value(), "oracle resultant not squarefree for " + conic);
  require(*oracle == 4, "oracle counts " + std::to_string(*oracle) + " critical points");
  require(generic.generic && generic.degree == 4, "conic: algebraic degree " + std::to_string(generic.degree));
  return "circle 2, conic " + conic + " -> 4 at u = (" + u[0].get_str() + ", " + u[1].get_str() + ")";
}

std::string criterion10() {
  std::ostringstream detail;
  auto expect = [&](const std::string& name, const Ideal<GF>& A, const GammaFamily<GF>& g, const DataLocusResult<GF>& dl,
                    CheckOutcome want) {
    auto got = check_bounds(A, g, dl).lower;
    require(got == want, name + ": lower bound " + outcome_name(got) + ", expected " + outcome_name(want));
    detail << name << " " << outcome_name(got) << "; ";
  };
  auto m = models::determinantal<GF>(2, 2, 1, 0);
  auto det_A = shared.det_A.value_or(m.subvariety().ideal);
  auto det = shared.det ? *shared.det : data_locus(m.X, det_A, m.recommended_gamma());
  expect("det", det_A, m.recommended_gamma(), det, CheckOutcome::pass);
  if (shared.det_explicit) expect("det explicit", det_A, m.recommended_gamma(), *shared.det_explicit, CheckOutcome::pass);
  if (shared.circle) {
    auto amb = Ambient<GF>::of(shared.circle_A->ring());
    expect("circle", *shared.circle_A, gamma::unit_ed(amb), *shared.circle, CheckOutcome::pass);
    expect("circle explicit", *shared.circle_A, gamma::unit_ed(amb), *shared.circle_explicit, CheckOutcome::pass);
  }
  if (shared.surface) {
    auto g = models::rational_normal_surface<GF>().recommended_gamma();
    expect("surface", *shared.surface_A, g, *shared.surface, CheckOutcome::pass);
  }
  auto R = x_ring<GF>({"x1", "x2"});
  auto L = ideal(R, "x1+x2-1");
  auto LA = ideal(R, "x1+x2-1, x1-2");
  auto wf = gamma::water_filling(Ambient<GF>::of(R));
  expect("water filling", LA, wf, data_locus(L, LA, wf), CheckOutcome::skipped);
  return detail.str();
}

std::string criterion11() {
  QQ Q;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
  auto R = x_ring<QQ>({"x1", "x2"});
  auto X = ideal(R, "x1+x2-1");
  auto amb = Ambient<QQ>::of(R);
  auto wf = gamma::water_filling(amb);
  auto ml = gamma::hadamard_ml(amb);
  std::ostringstream detail;
  int done = 0;
  while (done < 3) {
    mpq_class a1 = Q.from_ratio(num(rng), den(rng)), a2 = 1 - a1;
    if (a1 == 0 || a2 == 0) continue;  // keep A off the coordinate axes
    ++done;
    auto A = ideal_sum(X, {Polynomial<QQ>::variable(R, 0) - Polynomial<QQ>::constant(R, a1)});
    auto u1 = Polynomial<QQ>::variable(amb.u(), 0), u2 = Polynomial<QQ>::variable(amb.u(), 1);
    auto want_wf = Ideal<QQ>(amb.u(), {u1 - u2 - Polynomial<QQ>::constant(amb.u(), a2 - a1)});
    auto want_ml = Ideal<QQ>(amb.u(), {u1.scaled(a2) - u2.scaled(a1)});
    auto got_wf = data_locus(X, A, wf).ideal;
    auto got_ml = data_locus(X, A, ml).ideal;
    require(got_wf == want_wf, "water filling at a1 = " + a1.get_str() + ": " + got_wf.groebner().generators()[0].to_string());
    require(got_ml == want_ml, "hadamard at a1 = " + a1.get_str() + ": " + got_ml.groebner().generators()[0].to_string());
    detail << "a = (" << a1.get_str() << ", " << a2.get_str() << ") ";
  }
  return detail.str();
}

std::string criterion12() {
  GF F;
  std::mt19937_64 rng(12);
  int drawn = 0;
  auto draw = [&](const std::string& name, const std::vector<GF::value_type>& a, const Ideal<GF>& X, const Ideal<GF>& A,
                  const GammaFamily<GF>& g, const DataLocusResult<GF>& dl) {
    int ok = 0;
    while (ok < 20) {
      std::vector<GF::value_type> coeffs;
      for (std::size_t i = 0; i < X.nonzero_generators().size(); ++i) coeffs.push_back(F.random(rng));
      auto s = sample_data_point(a, X, A, g, coeffs, &dl);
      require(s.on_data_locus == true, name + ": a sampled point misses the data locus");
      ++ok;
    }
    drawn += ok;
  };
  auto R = x_ring<GF>({"x1", "x2"});
  auto X = ideal(R, "x1^2+x2^2-1");
  auto A = ideal(R, "x1^2+x2^2-1, x1-1, x2");
  auto g = gamma::unit_ed(Ambient<GF>::of(R));
  draw("circle", {1, 0}, X, A, g, shared.circle ? *shared.circle : data_locus(X, A, g));

  auto m = models::determinantal<GF>(2, 2, 1, 0);
  auto dg = m.recommended_gamma();
  draw("det", {0, 0, 0, 0}, m.X, m.subvariety().ideal, dg, shared.det ? *shared.det : data_locus(m.X, m.subvariety().ideal, dg));
  std::string extra;
  if (shared.surface) {
    auto sm = models::rational_normal_surface<GF>();
    draw("surface", {1, 1, 1, 1}, sm.X, *shared.surface_A, sm.recommended_gamma(), *shared.surface);
    extra = ", surface at (1,1,1,1)";
  }
  return std::to_string(drawn) + " draws on circle, det(2,2,1,0)" + extra;
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  std::string name;
  double budget;  // seconds
  std::function<std::string()> run;
};

bool run_criterion(const Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  std::string status = "PASS", detail;
  try {
    ScopedBudget scope(Budget::with_timeout(c.budget));
    detail = c.run();
  } catch (const ResourceLimit& e) {
    status = "FAIL";
    detail = std::string("budget exhausted: ") + e.what();
  } catch (const std::exception& e) {
    status = "FAIL";
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (status == "PASS" && secs > c.budget) {
    status = "FAIL";
    detail += " (over budget)";
  }
  std::printf("criterion %2d %s  %-36s %8.2fs / %5.0fs  %s\n", c.id, status.c_str(), c.name.c_str(), secs, c.budget,
              detail.c_str());
  std::fflush(stdout);
  return status == "PASS";
}

/// Stretch reproductions: compare against the expected invariants, never fail.
void run_stretch() {
  double timeout = 600;
  if (const char* t = std::getenv("DLOCUS_STRETCH_TIMEOUT")) timeout = std::atof(t);
  for (const char* spec : {"hankel:3,1", "cm:4,2", "tensor223", "det:3,3,2,1"}) {
    auto start = std::chrono::steady_clock::now();
    std::ostringstream report;
    try {
      ScopedBudget scope(Budget::with_timeout(timeout));
      auto m = models::by_name<GF>(spec);
      auto it = std::find_if(m.subvarieties.begin(), m.subvarieties.end(),
                             [](const auto& s) { return s.expected.degree || s.expected.equals; });
      if (it == m.subvarieties.end()) throw std::logic_error("model has no expectation");
      const auto& A = *it;
      auto dl = data_locus(m.X, A.ideal, m.recommended_gamma(), std::nullopt, m.name, A.name, RankMethod::charts);
      auto gens = dl.ideal.groebner().generators();
      report << "codim " << dl.ideal.codimension() << ", degree " << dl.degree() << ", " << gens.size() << " generators";
      if (gens.size() == 1) report << " of total degree " << gens[0].total_degree();
      report << "; expected";
      if (A.expected.codimension) report << " codim " << *A.expected.codimension;
      if (A.expected.degree) report << " degree " << *A.expected.degree;
      if (A.expected.generators) report << " " << *A.expected.generators << " generators";
      if (A.expected.equals) {
        bool same = same_variety(dl.ideal, Ideal<GF>(dl.ideal.ring(), parse_polynomial_list(dl.ideal.ring(), *A.expected.equals)));
        report << " V(" << *A.expected.equals << ") -> " << (same ? "match" : "differs");
      }
    } catch (const ResourceLimit& e) {
      report << "not finished within " << timeout << "s (" << e.what() << ")";
    } catch (const std::exception& e) {
      report << "error: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion 13 STRETCH %-15s %8.2fs  %s\n", spec, secs, report.str().c_str());
    std::fflush(stdout);
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "Groebner engine properties", 60, criterion1},
      {2, "implicitization of the surface", 10, criterion2},
      {3, "singular locus of the surface", 30, criterion3},
      {4, "conormal dimension", 240, criterion4},
      {5, "duality of the 2x2 determinant", 120, criterion5},
      {6, "rank data locus det(2,2,1,0)", 300, criterion6},
      {7, "degree-7 data locus of the surface", 1800, criterion7},
      {8, "pipeline equivalence", 300, criterion8},
      {9, "Lagrange and algebraic degree", 60, criterion9},
      {10, "lower bound check", 300, criterion10},
      {11, "water filling and Hadamard lines", 60, criterion11},
      {12, "sampling consistency", 60, criterion12},
  };
  int failed = 0;
  for (const auto& c : criteria)
    if (!run_criterion(c)) ++failed;
  const char* stretch = std::getenv("DLOCUS_STRETCH");
  if (stretch && std::string(stretch) == "1") {
    run_stretch();
  } else {
    std::printf("criterion 13 SKIPPED stretch reproductions (set DLOCUS_STRETCH=1 to run them)\n");
  }
  std::printf("%d of %zu gating criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
