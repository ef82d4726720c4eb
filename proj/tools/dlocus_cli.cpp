// Command-line front end: reads a problem file (or builds a model), runs its
// tasks and prints one record per task.
//
// Exit status: 0 on success, 1 on errors, 2 when a resource limit stopped a
// task.

#include "dlocus/problem.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Options {
  std::string file;
  std::string model;
  std::vector<std::string> tasks;
  std::string field;
  std::string order = "grevlex";
  std::string pipeline;
  std::string rank = "all-minors";
  std::size_t max_pairs = 0;
  unsigned max_degree = 0;
  double timeout = 0;
  std::string json;
  std::string cache;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Field>
int run(dlocus::Problem<Field> problem, std::vector<dlocus::TaskDecl> tasks, const Options& opt,
        const dlocus::TaskFlags& flags, const std::string& source) {
  std::unique_ptr<dlocus::DiskBasisStore> store;
  if (!opt.cache.empty()) store = std::make_unique<dlocus::DiskBasisStore>(opt.cache);
  dlocus::ScopedBasisStore scope(store.get());

  dlocus::TaskRunner<Field> runner(std::move(problem), flags);
  std::vector<dlocus::ResultRecord> records;
  bool json_to_stdout = opt.json == "-";
  for (const auto& task : tasks) {
    records.push_back(runner.run(task));
    if (!json_to_stdout) std::cout << records.back().to_text() << std::flush;
  }

  if (!opt.json.empty()) {
    nlohmann::ordered_json doc;
    doc["toolVersion"] = dlocus::kToolVersion;
    doc["source"] = source;
    doc["field"] = runner.problem().amb.field().spec().name();
    doc["results"] = nlohmann::ordered_json::array();
    for (const auto& r : records) doc["results"].push_back(r.to_json());
    if (json_to_stdout) {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::ofstream out(opt.json);
      out << doc.dump(2) << "\n";
      if (!out) throw std::runtime_error("cannot write " + opt.json);
    }
  }
  return dlocus::exit_code(records);
}

int main_impl(const Options& opt) {
  using namespace dlocus;
  if (opt.file.empty() == opt.model.empty()) throw std::invalid_argument("give exactly one of a problem file or --model");

  TaskFlags flags;
  flags.order = opt.order == "lex" ? MonomialOrder::Kind::lex : MonomialOrder::Kind::grevlex;
  if (opt.pipeline == "substituted") flags.pipeline = Pipeline::substituted;
  if (opt.pipeline == "explicit") flags.pipeline = Pipeline::explicit_y;
  flags.rank = opt.rank == "charts" ? RankMethod::charts : RankMethod::all_minors;
  flags.max_pairs = opt.max_pairs;
  flags.max_degree = opt.max_degree;
  if (opt.timeout > 0) flags.timeout = opt.timeout;
  flags.seed = opt.seed;

  std::vector<TaskDecl> tasks;
  for (const auto& t : opt.tasks) tasks.push_back(parse_task_spec(t));

  if (!opt.model.empty()) {
    auto spec = opt.field.empty() ? FieldSpec::prime() : FieldSpec::parse(opt.field);
    if (tasks.empty()) tasks.push_back(parse_task_spec("datalocus"));
    return with_field(spec, [&](const auto& F) {
      using Field = std::decay_t<decltype(F)>;
      return run(problem_from_model(models::by_name<Field>(opt.model)), tasks, opt, flags, "model " + opt.model);
    });
  }

  auto pf = parse_problem_file(read_file(opt.file));
  auto spec = opt.field.empty() ? pf.field : FieldSpec::parse(opt.field);
  if (tasks.empty()) tasks = pf.tasks;
  if (tasks.empty()) tasks.push_back(parse_task_spec("datalocus"));
  return with_field(spec, [&](const auto& F) { return run(instantiate(pf, F), tasks, opt, flags, opt.file); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data loci of parametric polynomial optimization problems"};
  Options opt;
  app.add_option("file", opt.file, "Problem file");
  app.add_option("--model", opt.model, "Built-in model, e.g. det:2,2,1,0, surface, hankel:3,1, cm:4,2, tensor223");
  app.add_option("--task", opt.tasks, "Task to run instead of the file's tasks, e.g. \"algdegree u=3,4\"");
  app.add_option("--field", opt.field, "Q or GF(p); overrides the ring declaration");
  app.add_option("--order", opt.order, "Monomial order of printed bases")->check(CLI::IsMember({"grevlex", "lex"}));
  app.add_option("--pipeline", opt.pipeline, "Data-locus pipeline")->check(CLI::IsMember({"substituted", "explicit"}));
  app.add_option("--rank", opt.rank, "How rank conditions are imposed")->check(CLI::IsMember({"all-minors", "charts"}));
  app.add_option("--max-pairs", opt.max_pairs, "Pair budget per Groebner basis (0 = unlimited)");
  app.add_option("--max-degree", opt.max_degree, "Sugar degree budget per Groebner basis (0 = unlimited)");
  app.add_option("--timeout", opt.timeout, "Seconds per task (0 = unlimited)");
  app.add_option("--json", opt.json, "Write the result document to PATH ('-' for standard output)");
  app.add_option("--cache", opt.cache, "Directory for cached Groebner bases");
  app.add_option("--seed", opt.seed, "Seed for random points");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return main_impl(opt);
  } catch (const dlocus::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
