#pragma once

// Problem files, task dispatch and result records for the command-line tool.
//
// A problem file is line oriented; '#' starts a comment:
//
//   ring GF(32003) x:4 u:4
//   variety x3^2-x2*x4, x2*x3-x1*x4, x2^2-x1*x3
//   subvariety x1-1
//   gamma weighted_ed 1 3 3 1
//   task datalocus
//
// Variables are x1..xn, y1..yn and u1..un. `subvariety` generators are added
// to those of the variety. Custom gamma families list their components
// num/den separated by commas, then `; H:` and optionally `; phi:`:
//
//   gamma custom (1-x1*y1)/y1, (1-x2*y2)/y2 ; H: y1, y2 ; phi: 1/(u1+x1), 1/(u2+x2)

#include "dlocus/models.hpp"
#include "dlocus/poly_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dlocus {

inline constexpr const char* kToolVersion = "dlocus 0.1.0";

inline const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"gb",      "dim",      "degree",       "singular", "conormal",
                                              "datalocus", "check-bounds", "sample", "algdegree"};
  return names;
}

struct SourcePos {
  int line = 1, column = 1;
};

/// One polynomial as written in the file.
struct PolyText {
  std::string text;
  SourcePos pos;
};

struct RationalText {
  PolyText num, den;
};

struct GammaDecl {
  std::string name;
  SourcePos pos;
  std::vector<std::string> weights;
  std::vector<RationalText> components;
  std::vector<PolyText> forbidden;
  std::optional<std::vector<RationalText>> phi;
};

struct TaskDecl {
  std::string name;
  std::map<std::string, std::string> options;
  SourcePos pos;

  std::optional<std::string> option(const std::string& key) const {
    auto it = options.find(key);
    if (it == options.end()) return std::nullopt;
    return it->second;
  }
};

struct ProblemFile {
  FieldSpec field = FieldSpec::prime();
  int n = 0;
  std::vector<PolyText> variety;
  std::vector<PolyText> subvariety;
  std::optional<GammaDecl> gamma;
  std::vector<TaskDecl> tasks;

  std::vector<std::string> x_names() const {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
  }
};

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

/// Whitespace-separated words with their 0-based offsets.
inline std::vector<std::pair<std::string, std::size_t>> words(std::string_view text) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    out.emplace_back(std::string(text.substr(start, i - start)), start);
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Comma-separated items, trimmed, with the column of each item's first
/// non-blank character.
inline std::vector<PolyText> poly_list(std::string_view text, SourcePos pos) {
  std::vector<PolyText> out;
  for (auto [part, offset] : split_top_level(text)) {
    std::size_t lead = 0;
    while (lead < part.size() && is_space(part[lead])) ++lead;
    out.push_back({std::string(trim(part)), {pos.line, pos.column + static_cast<int>(offset + lead)}});
  }
  return out;
}

/// "num/den" split at the first top-level '/'; den defaults to 1.
inline RationalText rational_text(const PolyText& p) {
  auto parts = split_top_level(p.text, '/');
  if (parts.size() > 2) throw ParseError("a gamma component may contain only one top-level '/'", p.pos.line, p.pos.column);
  RationalText r{{std::string(parts[0].first), p.pos}, {"1", p.pos}};
  if (parts.size() == 2) r.den = {std::string(parts[1].first), {p.pos.line, p.pos.column + static_cast<int>(parts[1].second)}};
  return r;
}

inline bool is_scalar_text(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  auto slash = s.find('/');
  auto digits = [](std::string_view d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  if (slash == std::string_view::npos) return digits(s);
  return digits(s.substr(0, slash)) && digits(s.substr(slash + 1));
}

}  // namespace detail

/// An integer or a ratio a/b as a field element.
template <class Field>
typename Field::value_type parse_scalar(const Field& F, std::string_view text) {
  text = detail::trim(text);
  if (!detail::is_scalar_text(text)) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  bool negative = text.front() == '-';
  if (negative) text.remove_prefix(1);
  auto slash = text.find('/');
  auto v = F.from_decimal(text.substr(0, slash));
  if (slash != std::string_view::npos) {
    auto d = F.from_decimal(text.substr(slash + 1));
    if (F.is_zero(d)) throw DivisionByZero();
    v = F.div(v, d);
  }
  return negative ? F.neg(v) : v;
}

/// Comma-separated scalars.
template <class Field>
std::vector<typename Field::value_type> parse_scalars(const Field& F, std::string_view text) {
  std::vector<typename Field::value_type> out;
  for (auto [part, offset] : split_top_level(text)) out.push_back(parse_scalar(F, part));
  return out;
}

/// `name key=value ...` as on a task line.
inline TaskDecl parse_task_spec(std::string_view text, SourcePos pos = {}) {
  auto ws = detail::words(text);
  if (ws.empty()) throw ParseError("task needs a name", pos.line, pos.column);
  TaskDecl task;
  task.name = ws[0].first;
  task.pos = {pos.line, pos.column + static_cast<int>(ws[0].second)};
  const auto& names = task_names();
  if (std::find(names.begin(), names.end(), task.name) == names.end())
    throw ParseError("unknown task '" + task.name + "'", task.pos.line, task.pos.column);
  for (std::size_t i = 1; i < ws.size(); ++i) {
    const auto& [word, offset] = ws[i];
    auto eq = word.find('=');
    int col = pos.column + static_cast<int>(offset);
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + word + "'", pos.line, col);
    if (!task.options.emplace(word.substr(0, eq), word.substr(eq + 1)).second)
      throw ParseError("option '" + word.substr(0, eq) + "' given twice", pos.line, col);
  }
  return task;
}

namespace detail {

inline void parse_ring_line(ProblemFile& pf, std::string_view rest, SourcePos pos) {
  auto ws = words(rest);
  auto col = [&](std::size_t offset) { return pos.column + static_cast<int>(offset); };
  if (ws.empty()) throw ParseError("ring needs a field", pos.line, pos.column);
  try {
    pf.field = FieldSpec::parse(ws[0].first);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), pos.line, col(ws[0].second));
  }
  std::map<char, int> counts;
  for (std::size_t i = 1; i < ws.size(); ++i) {
    const auto& [word, offset] = ws[i];
    if (word.size() < 3 || word[1] != ':' || std::string_view("xyu").find(word[0]) == std::string_view::npos ||
        !std::all_of(word.begin() + 2, word.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("expected x:<n>, u:<n> or y:<n>, got '" + word + "'", pos.line, col(offset));
    if (counts.count(word[0])) throw ParseError(std::string("block ") + word[0] + " declared twice", pos.line, col(offset));
    int n = std::stoi(word.substr(2));
    if (n < 1 || n > 20) throw ParseError("block sizes must be between 1 and 20", pos.line, col(offset));
    counts[word[0]] = n;
  }
  if (!counts.count('x') || !counts.count('u')) throw ParseError("ring needs both x:<n> and u:<n>", pos.line, pos.column);
  pf.n = counts['x'];
  for (char b : {'u', 'y'})
    if (counts.count(b) && counts[b] != pf.n)
      throw ParseError(std::string("block ") + b + " must have as many variables as x", pos.line, pos.column);
}

inline GammaDecl parse_gamma_line(std::string_view rest, SourcePos pos) {
  auto ws = words(rest);
  if (ws.empty()) throw ParseError("gamma needs a family name", pos.line, pos.column);
  GammaDecl g;
  g.name = ws[0].first;
  g.pos = {pos.line, pos.column + static_cast<int>(ws[0].second)};
  if (g.name == "unit_ed" || g.name == "hadamard_ml" || g.name == "water_filling") {
    if (ws.size() > 1)
      throw ParseError("gamma " + g.name + " takes no parameters", pos.line, pos.column + static_cast<int>(ws[1].second));
    return g;
  }
  if (g.name == "weighted_ed") {
    for (std::size_t i = 1; i < ws.size(); ++i) {
      if (!is_scalar_text(ws[i].first))
        throw ParseError("weight '" + ws[i].first + "' is not a number", pos.line, pos.column + static_cast<int>(ws[i].second));
      g.weights.push_back(ws[i].first);
    }
    return g;
  }
  if (g.name != "custom") throw ParseError("unknown gamma family '" + g.name + "'", g.pos.line, g.pos.column);

  std::size_t body = ws[0].second + ws[0].first.size();
  auto sections = split_top_level(rest.substr(body), ';');
  auto at = [&](std::size_t offset) { return SourcePos{pos.line, pos.column + static_cast<int>(body + offset)}; };
  for (const auto& comp : poly_list(sections[0].first, at(sections[0].second))) g.components.push_back(rational_text(comp));
  bool have_h = false;
  for (std::size_t s = 1; s < sections.size(); ++s) {
    auto [text, offset] = sections[s];
    std::size_t lead = 0;
    while (lead < text.size() && is_space(text[lead])) ++lead;
    auto colon = text.find(':');
    auto label = colon == std::string_view::npos ? std::string_view{} : trim(text.substr(0, colon));
    auto tail = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto tail_pos = at(offset + colon + 1);
    if (label == "H") {
      if (have_h) throw ParseError("H given twice", tail_pos.line, tail_pos.column);
      have_h = true;
      g.forbidden = poly_list(tail, tail_pos);
    } else if (label == "phi") {
      if (g.phi) throw ParseError("phi given twice", tail_pos.line, tail_pos.column);
      g.phi.emplace();
      for (const auto& comp : poly_list(tail, tail_pos)) g.phi->push_back(rational_text(comp));
    } else {
      auto p = at(offset + lead);
      throw ParseError("expected 'H:' or 'phi:' after ';'", p.line, p.column);
    }
  }
  if (!have_h) throw ParseError("custom gamma needs '; H: ...'", pos.line, pos.column + static_cast<int>(rest.size()));
  return g;
}

}  // namespace detail

template <class Field>
struct Problem {
  using Scalar = typename Field::value_type;

  std::string name;
  Ambient<Field> amb;
  Ideal<Field> X, A;
  GammaFamily<Field> gamma;
  std::string variety_name = "X", subvariety_name = "A";
  std::vector<TaskDecl> tasks;
  std::function<std::vector<Scalar>(std::mt19937_64&)> sample;  // points of X, may be empty
};

namespace detail {

template <class Field>
Polynomial<Field> parse_at(const RingPtr<Field>& ring, const PolyText& p) {
  return parse_polynomial(ring, p.text, p.pos.line, p.pos.column);
}

template <class Field>
std::vector<Polynomial<Field>> parse_all(const RingPtr<Field>& ring, const std::vector<PolyText>& ps) {
  std::vector<Polynomial<Field>> out;
  for (const auto& p : ps) out.push_back(parse_at(ring, p));
  return out;
}

template <class Field>
std::vector<RationalFunction<Field>> parse_rational(const RingPtr<Field>& ring, const std::vector<RationalText>& rs) {
  std::vector<RationalFunction<Field>> out;
  for (const auto& r : rs) {
    auto den = parse_at(ring, r.den);
    if (den.is_zero()) throw ParseError("zero denominator", r.den.pos.line, r.den.pos.column);
    out.push_back({parse_at(ring, r.num), den});
  }
  return out;
}

}  // namespace detail

/// The problem over the field F (which may differ from the declared one).
template <class Field>
Problem<Field> instantiate(const ProblemFile& pf, const Field& F) {
  Ambient<Field> amb(F, pf.x_names());
  auto X = Ideal<Field>(amb.x(), detail::parse_all(amb.x(), pf.variety));
  auto extra = detail::parse_all(amb.x(), pf.subvariety);
  auto A = ideal_sum(X, extra);

  GammaFamily<Field> g = gamma::unit_ed(amb);
  if (pf.gamma) {
    const auto& decl = *pf.gamma;
    try {
      if (decl.name == "weighted_ed") {
        std::vector<typename Field::value_type> w;
        for (const auto& s : decl.weights) w.push_back(parse_scalar(F, s));
        g = gamma::weighted_ed(amb, w);
      } else if (decl.name == "hadamard_ml") {
        g = gamma::hadamard_ml(amb);
      } else if (decl.name == "water_filling") {
        g = gamma::water_filling(amb);
      } else if (decl.name == "custom") {
        auto comps = detail::parse_rational(amb.xy(), decl.components);
        auto H = detail::parse_all(amb.xy(), decl.forbidden);
        std::optional<std::vector<RationalFunction<Field>>> phi;
        if (decl.phi) phi = detail::parse_rational(amb.xu(), *decl.phi);
        g = gamma::custom(amb, "custom", comps, H, phi);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), decl.pos.line, decl.pos.column);
    }
  }
  return Problem<Field>{"problem", amb, X, A, g, "X", pf.subvariety.empty() ? "X" : "A", pf.tasks, {}};
}

/// Parses a problem file. Every polynomial is checked against the declared
/// ring, so a returned file instantiates over its own field without errors.
inline ProblemFile parse_problem_file(std::string_view text) {
  ProblemFile pf;
  bool have_ring = false;
  std::optional<SourcePos> variety_pos;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto ws = detail::words(line);
    if (ws.empty()) continue;
    const auto& [keyword, kw_offset] = ws[0];
    std::size_t rest_offset = kw_offset + keyword.size();
    auto rest = line.substr(rest_offset);
    SourcePos kw_pos{line_no, static_cast<int>(kw_offset) + 1};
    SourcePos rest_pos{line_no, static_cast<int>(rest_offset) + 1};
    if (keyword != "ring" && !have_ring)
      throw ParseError("the first declaration must be 'ring'", kw_pos.line, kw_pos.column);

    if (keyword == "ring") {
      if (have_ring) throw ParseError("ring declared twice", kw_pos.line, kw_pos.column);
      detail::parse_ring_line(pf, rest, rest_pos);
      have_ring = true;
    } else if (keyword == "variety" || keyword == "subvariety") {
      if (detail::trim(rest).empty()) throw ParseError(keyword + " needs at least one polynomial", kw_pos.line, kw_pos.column);
      auto polys = detail::poly_list(rest, rest_pos);
      auto& target = keyword == "variety" ? pf.variety : pf.subvariety;
      target.insert(target.end(), polys.begin(), polys.end());
      if (keyword == "variety" && !variety_pos) variety_pos = kw_pos;
    } else if (keyword == "gamma") {
      if (pf.gamma) throw ParseError("gamma declared twice", kw_pos.line, kw_pos.column);
      pf.gamma = detail::parse_gamma_line(rest, rest_pos);
    } else if (keyword == "task") {
      pf.tasks.push_back(parse_task_spec(rest, rest_pos));
    } else {
      throw ParseError("unknown declaration '" + keyword + "'", kw_pos.line, kw_pos.column);
    }
  }
  if (!have_ring) throw ParseError("missing 'ring' declaration", line_no, 1);
  if (pf.variety.empty()) throw ParseError("missing 'variety' declaration", line_no, 1);
  if (pf.gamma) {
    const auto& g = *pf.gamma;
    auto arity = [&](std::size_t got, const char* what) {
      if (static_cast<int>(got) != pf.n)
        throw ParseError(std::string(what) + " needs " + std::to_string(pf.n) + " entries, got " + std::to_string(got),
                         g.pos.line, g.pos.column);
    };
    if (g.name == "weighted_ed") arity(g.weights.size(), "weighted_ed");
    if (g.name == "custom") {
      arity(g.components.size(), "custom gamma");
      if (g.phi) arity(g.phi->size(), "phi");
    }
  }
  with_field(pf.field, [&](const auto& F) { instantiate(pf, F); });
  return pf;
}

/// A built-in model with its first subvariety (or X itself) and its
/// recommended Gamma family.
template <class Field>
Problem<Field> problem_from_model(const VarietyModel<Field>& m) {
  auto amb = m.ambient();
  bool has_sub = !m.subvarieties.empty();
  Problem<Field> p{m.name,
                   amb,
                   m.X,
                   has_sub ? m.subvariety().ideal : m.X,
                   m.recommended_gamma(),
                   m.name,
                   has_sub ? m.subvariety().name : m.name,
                   {},
                   m.sample};
  return p;
}

struct TaskFlags {
  MonomialOrder::Kind order = MonomialOrder::Kind::grevlex;
  std::optional<Pipeline> pipeline;
  RankMethod rank = RankMethod::all_minors;
  std::size_t max_pairs = 0;
  unsigned max_degree = 0;
  std::optional<double> timeout;
  std::uint64_t seed = 1;
};

struct ResultRecord {
  std::string task;
  std::string status = "ok";  // ok, resource-limit or error
  std::string message;
  std::vector<std::string> variables;
  std::vector<std::string> generators;
  std::optional<int> dimension, codimension;
  std::optional<std::int64_t> degree;
  std::vector<int> generator_degrees;
  std::vector<std::pair<std::string, double>> timings;
  std::string field, order, pipeline;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json(bool with_timings = true) const {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["status"] = status;
    if (!message.empty()) j["message"] = message;
    j["field"] = field;
    j["order"] = order;
    j["pipeline"] = pipeline;
    j["variables"] = variables;
    j["generators"] = generators;
    j["dimension"] = dimension ? nlohmann::ordered_json(*dimension) : nlohmann::ordered_json();
    j["codimension"] = codimension ? nlohmann::ordered_json(*codimension) : nlohmann::ordered_json();
    j["degree"] = degree ? nlohmann::ordered_json(*degree) : nlohmann::ordered_json();
    j["generator_degrees"] = generator_degrees;
    j["details"] = details;
    if (with_timings) {
      auto t = nlohmann::ordered_json::object();
      for (const auto& [stage, secs] : timings) t[stage] = secs;
      j["timings"] = t;
    }
    j["toolVersion"] = kToolVersion;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "task " << task << ": " << status;
    if (!message.empty()) os << " (" << message << ")";
    os << "\n  field " << field << ", order " << order;
    if (!pipeline.empty()) os << ", pipeline " << pipeline;
    os << "\n";
    if (dimension) {
      os << "  dimension " << *dimension;
      if (codimension) os << ", codimension " << *codimension;
      if (degree) os << ", degree " << *degree;
      os << "\n";
    }
    if (!generators.empty()) {
      os << "  generators (" << generators.size() << "):\n";
      for (const auto& g : generators) os << "    " << g << "\n";
    }
    for (const auto& [key, value] : details.items()) os << "  " << key << ": " << value.dump() << "\n";
    if (!timings.empty()) {
      os << "  timings:";
      for (const auto& [stage, secs] : timings) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %s %.3fs", stage.c_str(), secs);
        os << buf;
      }
      os << "\n";
    }
    return os.str();
  }
};

/// Bases stored as `<key>.gb` files, one generator per line, written to a
/// temporary file and renamed so concurrent writers never expose a partial
/// entry.
class DiskBasisStore : public BasisStore {
 public:
  explicit DiskBasisStore(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  std::optional<std::vector<std::string>> load(const std::string& key) override {
    std::ifstream in(path(key));
    if (!in) return std::nullopt;
    std::vector<std::string> gens;
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) gens.push_back(line);
    if (gens.empty()) return std::nullopt;
    ++hits_;
    return gens;
  }

  void save(const std::string& key, const std::vector<std::string>& generators) override {
    if (generators.empty()) return;
    std::random_device rd;
    auto tmp = dir_ / (key + ".tmp" + std::to_string(rd()));
    {
      std::ofstream out(tmp);
      for (const auto& g : generators) out << g << "\n";
      if (!out) return;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path(key), ec);
    if (ec) std::filesystem::remove(tmp, ec);
    ++writes_;
  }

  std::filesystem::path path(const std::string& key) const { return dir_ / (key + ".gb"); }
  std::size_t hits() const { return hits_; }
  std::size_t writes() const { return writes_; }

 private:
  std::filesystem::path dir_;
  std::size_t hits_ = 0, writes_ = 0;
};

/// Installs a basis store for the current thread until destroyed.
class ScopedBasisStore {
 public:
  explicit ScopedBasisStore(BasisStore* store) : saved_(active_basis_store()) { active_basis_store() = store; }
  ~ScopedBasisStore() { active_basis_store() = saved_; }
  ScopedBasisStore(const ScopedBasisStore&) = delete;
  ScopedBasisStore& operator=(const ScopedBasisStore&) = delete;

 private:
  BasisStore* saved_;
};

namespace detail {

inline const char* order_name(MonomialOrder::Kind k) { return k == MonomialOrder::Kind::lex ? "lex" : "grevlex"; }

/// Fills generators, dimension, codimension and degree from I.
template <class Field>
void describe_ideal(ResultRecord& rec, const Ideal<Field>& I, MonomialOrder::Kind order, bool list_generators = true) {
  const auto& R = I.ring();
  rec.variables.clear();
  for (int i = 0; i < R->nvars(); ++i) rec.variables.push_back(R->variable(i).name);
  auto dd = I.dimension_and_degree();
  rec.dimension = dd.dimension;
  rec.codimension = I.codimension();
  rec.degree = dd.degree;
  if (!list_generators) return;
  auto mo = order == MonomialOrder::Kind::lex ? MonomialOrder::lex(R->nvars()) : MonomialOrder::grevlex(R->nvars());
  const auto& basis = I.groebner(mo);
  rec.generators.clear();
  rec.generator_degrees.clear();
  for (const auto& g : basis.generators()) {
    rec.generators.push_back(g.normalized().to_string());
    rec.generator_degrees.push_back(g.total_degree());
  }
}

template <class Field>
std::string point_string(const Field& F, const std::vector<typename Field::value_type>& pt) {
  std::string s;
  for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? "," : "") + F.to_string(pt[i]);
  return s;
}

template <class Field>
bool on_ideal(const Ideal<Field>& I, const std::vector<std::string>& names, const std::vector<typename Field::value_type>& pt) {
  const auto& F = I.ring()->field();
  auto named = named_point<Field>(names, pt);
  for (const auto& f : I.nonzero_generators())
    if (!F.is_zero(f.evaluate(named))) return false;
  return true;
}

/// A point of A: `point=` if given, else the origin or a sampled point of X
/// that happens to lie on A.
template <class Field>
std::vector<typename Field::value_type> point_on_subvariety(const Problem<Field>& p, const TaskDecl& task,
                                                            std::mt19937_64& rng) {
  const auto& F = p.amb.field();
  const auto& names = p.amb.x_names();
  if (auto text = task.option("point")) {
    auto pt = parse_scalars(F, *text);
    if (static_cast<int>(pt.size()) != p.amb.n()) throw SizeError("point needs " + std::to_string(p.amb.n()) + " coordinates");
    return pt;
  }
  std::vector<typename Field::value_type> origin(static_cast<std::size_t>(p.amb.n()), F.zero());
  if (on_ideal(p.A, names, origin)) return origin;
  if (p.sample)
    for (int k = 0; k < 200; ++k) {
      auto pt = p.sample(rng);
      if (on_ideal(p.A, names, pt)) return pt;
    }
  throw std::invalid_argument("no point of the subvariety found; pass point=a1,...,an");
}

template <class Field>
class DataLocusMemo {
 public:
  const DataLocusResult<Field>& get(const Problem<Field>& p, const TaskFlags& flags) {
    auto key = std::string(pipeline_name(flags.pipeline.value_or(default_pipeline(p.gamma)))) + "|" +
               rank_method_name(flags.rank);
    auto it = results_.find(key);
    if (it == results_.end())
      it = results_.emplace(key, data_locus(p.X, p.A, p.gamma, flags.pipeline, p.variety_name, p.subvariety_name,
                                            flags.rank)).first;
    return it->second;
  }

 private:
  std::map<std::string, DataLocusResult<Field>> results_;
};

template <class Field>
void run_task_body(const Problem<Field>& p, const TaskDecl& task, const TaskFlags& flags, ResultRecord& rec,
                   DataLocusMemo<Field>& memo) {
  const auto& F = p.amb.field();
  std::mt19937_64 rng(flags.seed);
  Stopwatch clock;
  auto which = [&]() -> const Ideal<Field>& {
    auto of = task.option("of").value_or("X");
    if (of == "X") return p.X;
    if (of == "A") return p.A;
    throw std::invalid_argument("of= must be X or A");
  };

  const auto& name = task.name;
  if (name == "gb" || name == "dim" || name == "degree") {
    describe_ideal(rec, which(), flags.order, name == "gb");
    rec.timings.emplace_back(name, clock.lap());
  } else if (name == "singular") {
    describe_ideal(rec, singular_locus(p.X), flags.order);
    rec.timings.emplace_back("singular", clock.lap());
  } else if (name == "conormal") {
    auto con = conormal_ideal(which(), flags.rank);
    rec.timings.emplace_back("conormal", clock.lap());
    describe_ideal(rec, con.ideal, flags.order);
    rec.details["rank_method"] = rank_method_name(flags.rank);
  } else if (name == "datalocus" || name == "check-bounds" || name == "sample") {
    const auto& dl = memo.get(p, flags);
    rec.pipeline = pipeline_name(dl.pipeline);
    rec.timings.insert(rec.timings.end(), dl.timings.begin(), dl.timings.end());
    rec.details["gamma"] = p.gamma.name;
    rec.details["variety"] = dl.variety_name;
    rec.details["subvariety"] = dl.subvariety_name;
    if (name == "datalocus") {
      describe_ideal(rec, dl.ideal, flags.order);
      rec.details["rank_method"] = rank_method_name(flags.rank);
    } else if (name == "check-bounds") {
      std::optional<std::vector<typename Field::value_type>> h;
      if (auto text = task.option("hyperplane")) h = parse_scalars(F, *text);
      auto report = check_bounds(p.A, p.gamma, dl, h);
      rec.details["lower"] = outcome_name(report.lower);
      if (report.hyperplane) rec.details["hyperplane"] = outcome_name(*report.hyperplane);
      rec.timings.emplace_back("check-bounds", clock.lap());
      if (!report.ok()) {
        rec.status = "error";
        rec.message = "a data-locus bound is violated";
      }
    } else {
      int count = std::stoi(task.option("count").value_or("20"));
      auto a = point_on_subvariety(p, task, rng);
      rec.details["point"] = point_string(F, a);
      auto samples = nlohmann::ordered_json::array();
      bool all_on = true;
      int attempts = 0;
      while (static_cast<int>(samples.size()) < count) {
        if (++attempts > 20 * count + 20) throw std::runtime_error("could not draw points off the forbidden locus");
        std::vector<typename Field::value_type> coeffs;
        for (std::size_t i = 0; i < p.X.nonzero_generators().size(); ++i) coeffs.push_back(F.random(rng));
        try {
          auto s = sample_data_point(a, p.X, p.A, p.gamma, coeffs, &dl);
          all_on = all_on && s.on_data_locus.value_or(false);
          samples.push_back(point_string(F, s.u));
        } catch (const PointInForbiddenLocus&) {
        }
      }
      rec.details["samples"] = samples;
      rec.details["all_on_data_locus"] = all_on;
      rec.timings.emplace_back("sample", clock.lap());
      if (!all_on) {
        rec.status = "error";
        rec.message = "a sampled data point misses the data locus";
      }
    }
  } else if (name == "algdegree") {
    std::vector<typename Field::value_type> u;
    if (auto text = task.option("u")) {
      u = parse_scalars(F, *text);
    } else {
      for (int i = 0; i < p.amb.n(); ++i) u.push_back(F.random(rng));
    }
    auto crit = critical_ideal(p.X, p.gamma, u, flags.rank);
    auto dd = crit.dimension_and_degree();
    describe_ideal(rec, crit, flags.order);
    rec.details["u"] = point_string(F, u);
    rec.details["algebraic_degree"] = dd.dimension == 0 ? dd.degree : 0;
    rec.details["generic"] = dd.dimension <= 0;
    rec.timings.emplace_back("algdegree", clock.lap());
  } else {
    throw std::invalid_argument("unknown task '" + name + "'");
  }
}

}  // namespace detail

/// Runs tasks against one problem, sharing data-locus computations.
template <class Field>
class TaskRunner {
 public:
  TaskRunner(Problem<Field> problem, TaskFlags flags) : problem_(std::move(problem)), flags_(flags) {}

  ResultRecord run(const TaskDecl& task) {
    ResultRecord rec;
    rec.task = task.name;
    rec.field = problem_.amb.field().spec().name();
    rec.order = detail::order_name(flags_.order);
    Budget budget = flags_.timeout ? Budget::with_timeout(*flags_.timeout) : Budget{};
    budget.max_pairs = flags_.max_pairs;
    budget.max_degree = flags_.max_degree;
    ScopedBudget scope(budget);
    try {
      detail::run_task_body(problem_, task, flags_, rec, memo_);
    } catch (const ResourceLimit& e) {
      rec.status = "resource-limit";
      rec.message = e.what();
    } catch (const std::exception& e) {
      rec.status = "error";
      rec.message = e.what();
    }
    return rec;
  }

  const Problem<Field>& problem() const { return problem_; }

 private:
  Problem<Field> problem_;
  TaskFlags flags_;
  detail::DataLocusMemo<Field> memo_;
};

/// 0 when every record is ok, 2 if any hit a resource limit, else 1.
inline int exit_code(const std::vector<ResultRecord>& records) {
  bool limit = false, error = false;
  for (const auto& r : records) {
    limit = limit || r.status == "resource-limit";
    error = error || r.status == "error";
  }
  return limit ? 2 : error ? 1 : 0;
}

}  // namespace dlocus
