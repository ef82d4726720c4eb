#include "dlocus/problem.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

namespace dlocus {
namespace {

namespace fs = std::filesystem;
using testing::GF;
using testing::QQ;

constexpr const char* kSurfaceFile = R"(# rational normal surface
ring GF(32003) x:4 u:4

variety x3^2-x2*x4, x2*x3-x1*x4, x2^2-x1*x3   # three quadrics
subvariety x1-1
gamma weighted_ed 1 3 3 1
task singular
task datalocus
)";

constexpr const char* kCircleFile = R"(ring Q x:2 u:2 y:2
variety x1^2+x2^2-1
subvariety x1-1, x2
gamma unit_ed
task datalocus
task algdegree u=3/7,2/5
)";

constexpr const char* kWaterFillingFile = R"(ring GF(32003) x:2 u:2
variety x1+x2-1
subvariety 3*x1-1, 3*x2-2
gamma custom (1-x1*y1)/y1, (1-x2*y2)/y2 ; H: y1, y2 ; phi: 1/(u1+x1), 1/(u2+x2)
task datalocus
)";

fs::path temp_dir(const std::string& stem) {
  std::random_device rd;
  auto dir = fs::temp_directory_path() / (stem + "_" + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

/// The error raised while parsing `text`, with its position.
std::optional<ParseError> parse_failure(const std::string& text) {
  try {
    parse_problem_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  return std::nullopt;
}

TEST(ParseProblemFile, SurfaceFile) {
  auto pf = parse_problem_file(kSurfaceFile);
  EXPECT_EQ(pf.field.name(), "GF(32003)");
  EXPECT_EQ(pf.n, 4);
  EXPECT_EQ(pf.variety.size(), 3u);
  EXPECT_EQ(pf.subvariety.size(), 1u);
  ASSERT_TRUE(pf.gamma);
  EXPECT_EQ(pf.gamma->name, "weighted_ed");
  EXPECT_EQ(pf.gamma->weights, (std::vector<std::string>{"1", "3", "3", "1"}));
  ASSERT_EQ(pf.tasks.size(), 2u);
  EXPECT_EQ(pf.tasks[0].name, "singular");
  EXPECT_EQ(pf.tasks[1].name, "datalocus");
  EXPECT_EQ(pf.variety[1].pos.line, 4);

  auto p = instantiate(pf, GF{});
  EXPECT_EQ(p.X.ring()->nvars(), 4);
  EXPECT_EQ(p.X.nonzero_generators().size(), 3u);
  EXPECT_EQ(p.gamma.name, "weighted_ed");
  EXPECT_EQ(*p.gamma.weights, (std::vector<GF::value_type>{1, 3, 3, 1}));
  EXPECT_TRUE(p.A.contains(p.X));
  EXPECT_EQ(p.A.dimension(), 1);
}

TEST(ParseProblemFile, TaskOptionsAndRationalField) {
  auto pf = parse_problem_file(kCircleFile);
  EXPECT_EQ(pf.field.name(), "Q");
  ASSERT_EQ(pf.tasks.size(), 2u);
  EXPECT_EQ(pf.tasks[1].option("u"), "3/7,2/5");
  EXPECT_FALSE(pf.tasks[1].option("point"));
  auto p = instantiate(pf, QQ{});
  EXPECT_EQ(p.gamma.name, "unit_ed");
}

TEST(ParseProblemFile, CustomGammaWithPhi) {
  auto pf = parse_problem_file(kWaterFillingFile);
  ASSERT_TRUE(pf.gamma);
  EXPECT_EQ(pf.gamma->components.size(), 2u);
  EXPECT_EQ(pf.gamma->components[0].num.text, "(1-x1*y1)");
  EXPECT_EQ(pf.gamma->forbidden.size(), 2u);
  ASSERT_TRUE(pf.gamma->phi);
  auto p = instantiate(pf, GF{});
  EXPECT_TRUE(p.gamma.round_trip_holds());
}

TEST(ParseProblemFile, Errors) {
  struct Case {
    std::string text;
    int line, column;
    std::string fragment;
  };
  std::vector<Case> cases{
      {"ring GF(32003) x:2 u:2\ngamma unit_ed\n", 3, 1, "missing 'variety'"},
      {"ring GF(32003) x:2 u:2\nvariety\n", 2, 1, "needs at least one polynomial"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma weighted_ed 1 2 3\n", 3, 7, "needs 2 entries, got 3"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma sphere\n", 3, 7, "unknown gamma family"},
      {"ring GF(32003) x:2 u:2\nvariety x1+*x2\n", 2, 12, "unexpected"},
      {"ring GF(32003) x:2 u:2\nvariety x1, x3\n", 2, 13, "x3"},
      {"ring GF(32003) x:2 u:2\nvariety y1\n", 2, 9, "y1"},
      {"variety x1\n", 1, 1, "first declaration must be 'ring'"},
      {"ring GF(32004) x:2 u:2\n", 1, 6, "prime"},
      {"ring GF(32003) x:2 u:3\n", 1, 5, "as many variables"},
      {"ring GF(32003) x:2\n", 1, 5, "both x:<n> and u:<n>"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ntask solve\n", 3, 6, "unknown task"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ntask datalocus fast\n", 3, 16, "key=value"},
      {"ring GF(32003) x:2 u:2\nvariety x1\nfrobnicate\n", 3, 1, "unknown declaration"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma custom 1/y1, 1/y2\n", 3, 24, "H:"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma custom 1/y1, 1/y2 ; H: y1, y2 ; phi: 1/u1\n", 3, 7, "phi needs 2"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma custom x1/y1, x2/y2 ; H: y1\n", 3, 7, "denominator"},
      {"ring GF(32003) x:2 u:2\nvariety x1\ngamma weighted_ed 1 0\n", 3, 7, "zero"},
  };
  for (const auto& c : cases) {
    auto err = parse_failure(c.text);
    ASSERT_TRUE(err) << c.text;
    EXPECT_EQ(err->line(), c.line) << c.text << err->what();
    EXPECT_EQ(err->column(), c.column) << c.text << err->what();
    EXPECT_NE(std::string(err->what()).find(c.fragment), std::string::npos) << err->what();
  }
}

TEST(ParseScalars, IntegersAndRatios) {
  GF F;
  EXPECT_EQ(parse_scalar(F, "-1"), F.neg(1));
  EXPECT_EQ(parse_scalar(F, "1/3"), F.inv(3));
  QQ Q;
  EXPECT_EQ(parse_scalar(Q, " 22/7 "), mpq_class(22, 7));
  EXPECT_EQ(parse_scalars(Q, "1,-2/4"), (std::vector<mpq_class>{1, mpq_class(-1, 2)}));
  EXPECT_THROW(parse_scalar(F, "x"), std::invalid_argument);
  EXPECT_THROW(parse_scalar(F, "1/0"), DivisionByZero);
}

template <class Field>
std::vector<ResultRecord> run_all(Problem<Field> p, TaskFlags flags = {}) {
  auto tasks = p.tasks;
  TaskRunner<Field> runner(std::move(p), flags);
  std::vector<ResultRecord> out;
  for (const auto& t : tasks) out.push_back(runner.run(t));
  return out;
}

ResultRecord run_one(const std::string& model, const std::string& task, TaskFlags flags = {}) {
  TaskRunner<GF> runner(problem_from_model(models::by_name<GF>(model)), flags);
  return runner.run(parse_task_spec(task));
}

TEST(RunTask, DeterminantDataLocus) {
  auto rec = run_one("det:2,2,1,0", "datalocus");
  EXPECT_EQ(rec.status, "ok");
  EXPECT_EQ(rec.generators, std::vector<std::string>{"u12*u21-u11*u22"});
  EXPECT_EQ(rec.dimension, 3);
  EXPECT_EQ(rec.codimension, 1);
  EXPECT_EQ(rec.degree, 2);
  EXPECT_EQ(rec.pipeline, "substituted");
  EXPECT_EQ(rec.field, "GF(32003)");
}

TEST(RunTask, SurfaceSingularLocusIsTheOrigin) {
  auto rec = run_one("surface", "singular");
  ASSERT_EQ(rec.status, "ok");
  EXPECT_EQ(rec.dimension, 0);
  auto R = Ring<GF>::from_blocks(GF{}, {{Block::x, rec.variables}});
  Ideal<GF> sing(R, parse_polynomial_list(R, [&] {
                   std::string s;
                   for (const auto& g : rec.generators) s += (s.empty() ? "" : ",") + g;
                   return s;
                 }()));
  for (const char* x : {"x1", "x2", "x3", "x4"}) EXPECT_TRUE(radical_membership(parse_polynomial(R, x), sing)) << x;
  EXPECT_FALSE(sing.is_unit());
}

TEST(RunTask, FileTasks) {
  auto recs = run_all(instantiate(parse_problem_file(kCircleFile), QQ{}));
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].generators, std::vector<std::string>{"u2"});
  EXPECT_EQ(recs[1].details["algebraic_degree"], 2);
  EXPECT_EQ(recs[1].details["u"], "3/7,2/5");

  auto wf = run_all(instantiate(parse_problem_file(kWaterFillingFile), GF{}));
  ASSERT_EQ(wf.size(), 1u);
  // u1 - u2 - (a2 - a1) with a = (1/3, 2/3)
  GF F;
  EXPECT_EQ(wf[0].generators, std::vector<std::string>{"u1-u2-" + std::to_string(F.inv(3))});
}

TEST(RunTask, CustomGammaMatchesBuiltin) {
  auto pf = parse_problem_file(kWaterFillingFile);
  auto custom = run_all(instantiate(pf, GF{}));
  pf.gamma = GammaDecl{"water_filling", {}, {}, {}, {}, {}};
  auto builtin = run_all(instantiate(pf, GF{}));
  EXPECT_EQ(custom[0].generators, builtin[0].generators);
}

TEST(RunTask, BothPipelinesAndOrders) {
  TaskFlags flags;
  flags.pipeline = Pipeline::explicit_y;
  auto ex = run_one("det:2,2,1,0", "datalocus", flags);
  EXPECT_EQ(ex.pipeline, "explicit");
  EXPECT_EQ(ex.generators, std::vector<std::string>{"u12*u21-u11*u22"});
  flags.order = MonomialOrder::Kind::lex;
  auto lex = run_one("det:2,2,1,0", "datalocus", flags);
  EXPECT_EQ(lex.order, "lex");
  EXPECT_EQ(lex.generators, std::vector<std::string>{"u11*u22-u12*u21"});
}

TEST(RunTask, SampleAndBounds) {
  auto pf = parse_problem_file(kCircleFile);
  auto p = instantiate(pf, QQ{});
  p.tasks = {parse_task_spec("sample point=1,0 count=20"), parse_task_spec("check-bounds hyperplane=0,1,0"),
             parse_task_spec("check-bounds hyperplane=0,1,1")};
  auto recs = run_all(p);
  EXPECT_EQ(recs[0].status, "ok");
  EXPECT_EQ(recs[0].details["samples"].size(), 20u);
  EXPECT_EQ(recs[0].details["all_on_data_locus"], true);
  EXPECT_EQ(recs[1].details["lower"], "pass");
  EXPECT_EQ(recs[1].details["hyperplane"], "pass");
  // (1, 1) is not normal to the circle at (1, 0), so Gamma(a, (1, 1)) = (2, 1) misses u2 = 0
  EXPECT_EQ(recs[2].details["hyperplane"], "fail");
  EXPECT_EQ(recs[2].status, "error");
}

TEST(RunTask, ErrorsBecomeStatuses) {
  TaskFlags tight;
  tight.max_pairs = 3;
  auto rec = run_one("surface", "datalocus", tight);
  EXPECT_EQ(rec.status, "resource-limit");
  EXPECT_EQ(exit_code({rec}), 2);
  // hadamard has no substitution form, so algdegree fails
  auto pf = parse_problem_file("ring GF(32003) x:2 u:2\nvariety x1+x2-1\ngamma hadamard_ml\ntask algdegree\n");
  auto recs = run_all(instantiate(pf, GF{}));
  EXPECT_EQ(recs[0].status, "error");
  EXPECT_NE(recs[0].message.find("substitution"), std::string::npos);
  EXPECT_EQ(exit_code(recs), 1);
  EXPECT_EQ(exit_code({run_one("det:2,2,1,0", "dim")}), 0);
}

TEST(Determinism, RepeatedRunsAreIdenticalModuloTimings) {
  for (const char* task : {"gb", "datalocus", "conormal", "algdegree"}) {
    auto a = run_one("surface", task).to_json(false).dump();
    auto b = run_one("surface", task).to_json(false).dump();
    EXPECT_EQ(a, b) << task;
  }
}

TEST(RoundTrip, PrintedGeneratorsReparse) {
  TaskFlags flags;
  flags.rank = RankMethod::charts;
  for (const char* model : {"surface", "det:2,2,1,0", "hankel:3,1"}) {
    for (const char* task : {"gb", "singular", "conormal"}) {
      auto rec = run_one(model, task, flags);
      ASSERT_EQ(rec.status, "ok") << rec.message;
      auto R = Ring<GF>::from_blocks(GF{}, {{Block::x, rec.variables}});
      std::vector<Polynomial<GF>> parsed;
      for (const auto& g : rec.generators) parsed.push_back(parse_polynomial(R, g));
      for (std::size_t i = 0; i < parsed.size(); ++i) EXPECT_EQ(parsed[i].normalized().to_string(), rec.generators[i]);
      if (std::string(task) == "gb") {
        Ideal<GF> I(R, parsed);
        EXPECT_EQ(I, models::by_name<GF>(model).X.map_to(R));
      }
    }
  }
}

TEST(RoundTrip, RationalOutputStaysInteger) {
  TaskRunner<QQ> runner(problem_from_model(models::by_name<QQ>("surface")), {});
  auto rec = runner.run(parse_task_spec("datalocus"));
  ASSERT_EQ(rec.generators.size(), 1u);
  EXPECT_EQ(rec.generators[0].find('/'), std::string::npos);
  EXPECT_EQ(rec.generator_degrees, std::vector<int>{7});
}

TEST(Cache, ReuseNeverChangesRecords) {
  auto dir = temp_dir("dlocus_cache");
  auto baseline = run_one("surface", "datalocus").to_json(false).dump();
  DiskBasisStore store(dir);
  {
    ScopedBasisStore scope(&store);
    EXPECT_EQ(run_one("surface", "datalocus").to_json(false).dump(), baseline);
  }
  EXPECT_GT(store.writes(), 0u);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    ++files;
    EXPECT_TRUE(std::regex_match(entry.path().filename().string(), std::regex("[0-9a-f]{16}\\.gb")))
        << entry.path();
  }
  EXPECT_GT(files, 0u);

  DiskBasisStore again(dir);
  {
    ScopedBasisStore scope(&again);
    EXPECT_EQ(run_one("surface", "datalocus").to_json(false).dump(), baseline);
  }
  EXPECT_GT(again.hits(), 0u);
  fs::remove_all(dir);
}

TEST(Cache, UnreadableEntriesAreRecomputed) {
  auto dir = temp_dir("dlocus_cache_bad");
  DiskBasisStore store(dir);
  auto baseline = run_one("det:2,2,1,0", "datalocus").to_json(false).dump();
  {
    ScopedBasisStore scope(&store);
    run_one("det:2,2,1,0", "datalocus");
  }
  for (const auto& entry : fs::directory_iterator(dir)) std::ofstream(entry.path()) << "x11+*\n";
  DiskBasisStore broken(dir);
  ScopedBasisStore scope(&broken);
  EXPECT_EQ(run_one("det:2,2,1,0", "datalocus").to_json(false).dump(), baseline);
  fs::remove_all(dir);
}

#ifdef DLOCUS_CLI_PATH

struct CliRun {
  int status;
  std::string out;
};

CliRun cli(const std::string& args, const fs::path& dir) {
  auto out_file = dir / "stdout.txt";
  std::string cmd = std::string(DLOCUS_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
  int raw = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = temp_dir("dlocus_cli"); }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    auto path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
  }

  fs::path dir_;
};

TEST_F(Cli, ProblemFileWithJson) {
  auto file = write("circle.dl", kCircleFile);
  auto json = dir_ / "out.json";
  auto r = cli(file.string() + " --json " + json.string(), dir_);
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("task datalocus: ok"), std::string::npos);
  auto doc = read_json(json);
  EXPECT_EQ(doc["toolVersion"], kToolVersion);
  ASSERT_EQ(doc["results"].size(), 2u);
  EXPECT_EQ(doc["results"][0]["generators"][0], "u2");
  EXPECT_EQ(doc["results"][0]["field"], "Q");
  EXPECT_EQ(doc["results"][1]["details"]["algebraic_degree"], 2);
}

TEST_F(Cli, ModelAndFlags) {
  auto json = dir_ / "det.json";
  auto r = cli("--model det:2,2,1,0 --pipeline explicit --order lex --json " + json.string(), dir_);
  EXPECT_EQ(r.status, 0) << r.out;
  auto rec = read_json(json)["results"][0];
  EXPECT_EQ(rec["generators"][0], "u11*u22-u12*u21");
  EXPECT_EQ(rec["pipeline"], "explicit");
  EXPECT_EQ(rec["order"], "lex");

  auto file = write("surface.dl", kSurfaceFile);
  r = cli(file.string() + " --field Q --task dim --json -", dir_);
  EXPECT_EQ(r.status, 0) << r.out;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["field"], "Q");
  EXPECT_EQ(doc["results"][0]["dimension"], 2);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli("--model surface --max-pairs 4", dir_).status, 2);
  EXPECT_EQ(cli("--model surface --max-degree 2", dir_).status, 2);
  auto bad = write("bad.dl", "ring GF(32003) x:2 u:2\nvariety x1+\n");
  auto r = cli(bad.string(), dir_);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("line 2, column 12"), std::string::npos) << r.out;
  EXPECT_EQ(cli("--model sphere", dir_).status, 1);
  EXPECT_EQ(cli("--model surface --order deglex", dir_).status, 1);
  EXPECT_EQ(cli((dir_ / "missing.dl").string(), dir_).status, 1);
  EXPECT_EQ(cli("", dir_).status, 1);
  EXPECT_EQ(cli("--help", dir_).status, 0);
}

TEST_F(Cli, CacheDirectoryGivesIdenticalOutput) {
  auto cache = dir_ / "cache";
  auto a = dir_ / "a.json", b = dir_ / "b.json", c = dir_ / "c.json";
  ASSERT_EQ(cli("--model surface --json " + a.string(), dir_).status, 0);
  ASSERT_EQ(cli("--model surface --cache " + cache.string() + " --json " + b.string(), dir_).status, 0);
  ASSERT_EQ(cli("--model surface --cache " + cache.string() + " --json " + c.string(), dir_).status, 0);
  auto strip = [&](const fs::path& p) {
    auto doc = read_json(p);
    for (auto& r : doc["results"]) r.erase("timings");
    return doc.dump();
  };
  EXPECT_EQ(strip(a), strip(b));
  EXPECT_EQ(strip(a), strip(c));
  EXPECT_FALSE(fs::is_empty(cache));
}

#endif

}  // namespace
}  // namespace dlocus
