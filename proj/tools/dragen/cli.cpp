#include "dragen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dragen/cdg.hpp"
#include "dragen/cost.hpp"
#include "dragen/error.hpp"
#include "dragen/json.hpp"
#include "dragen/optimizer.hpp"
#include "dragen/prediction.hpp"
#include "dragen/sampler.hpp"
#include "dragen/universe.hpp"

namespace dragen::cli {

namespace {

constexpr double kVerifySigmas = 4.0;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string root;
  unsigned size = 10;
  std::string probs;
  std::string cost = "uniform";
  double delta = 0.01;
  double epsilon = 1e-6;
  std::size_t max_steps = 10'000;
  std::size_t count = 0;
  std::optional<std::uint64_t> seed;
  std::string strategy;
  std::string format = "sexp";
  std::uint64_t budget = kDefaultDeriveBudget;
  std::string spec;
  std::string spec_out;
  unsigned threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

Universe load_universe(const std::string& source, const std::string& root) {
  std::vector<TypeDecl> decls = parse_declarations(source);
  if (decls.empty()) throw ModelError("no type declarations found");
  const std::string chosen = root.empty() ? decls.front().name : root;
  return build_universe(std::move(decls), chosen);
}

Universe universe_from_file(const Options& o) {
  if (o.file.empty()) throw UsageError("--file is required");
  return load_universe(read_file(o.file), o.root);
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("DRAGEN_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const std::uint64_t seed = std::stoull(env, &used, 0);
      if (env[used] == '\0') return seed;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("DRAGEN_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

ProbMap probs_from_options(const Universe& u, const Options& o) {
  if (o.probs.empty()) return uniform_probmap(u);
  return probmap_from_json(u, read_json_file(o.probs));
}

// A spec plus the universe it refers to: from --spec (declarations from
// --file or the embedded source) or built from --file and friends.
struct Loaded {
  Universe universe;
  GenSpec spec;
};

Loaded load_spec(const Options& o) {
  if (!o.spec.empty()) {
    const Json j = read_json_file(o.spec);
    std::string source;
    if (!o.file.empty()) {
      source = read_file(o.file);
    } else if (j.contains("source") && j["source"].is_string()) {
      source = j["source"].get<std::string>();
    } else {
      throw ModelError("spec has no embedded declarations; pass them with --file");
    }
    if (!j.contains("root") || !j["root"].is_string()) throw ModelError("missing field 'root'");
    Universe u = load_universe(source, j["root"].get<std::string>());
    GenSpec spec = spec_from_json(u, j);
    if (!o.strategy.empty()) spec.strategy = strategy_from_string(o.strategy);
    return {std::move(u), std::move(spec)};
  }
  Universe u = universe_from_file(o);
  const Strategy strategy = o.strategy.empty() ? Strategy::Dragen : strategy_from_string(o.strategy);
  GenSpec spec = make_spec(u, o.size, strategy, probs_from_options(u, o));
  return {std::move(u), std::move(spec)};
}

Json prediction_json(const Universe& u, const ProbMap& p, unsigned size) {
  PredictionReport report = predict_constructors(u, p, size);
  report.foreign = predict_foreign(u, p, report);
  return to_json(u, report, extinction_probability(u, p));
}

int cmd_check(const Options& o, std::ostream& out) {
  const Universe u = universe_from_file(o);
  Json types = Json::array();
  for (const TypeInfo& t : u.types()) {
    Json ctors = Json::array();
    for (ConstructorId c : t.constructors) {
      const ConstructorInfo& info = u.constructor(c);
      Json fields = Json::array();
      for (const FieldRef& f : info.fields) {
        fields.push_back(f.kind == FieldRef::Kind::Ground ? std::string(to_string(f.ground))
                                                          : u.type(f.type).id);
      }
      Json entry{{"name", info.qualified}, {"fields", std::move(fields)}};
      if (t.in_family) entry["terminal"] = is_terminal(u, c);
      ctors.push_back(std::move(entry));
    }
    types.push_back({{"id", t.id}, {"inFamily", t.in_family}, {"constructors", std::move(ctors)}});
  }
  Json family = Json::array();
  for (TypeId t : u.family()) family.push_back(u.type(t).id);
  Json foreign = Json::array();
  for (TypeId t : u.foreign_types()) foreign.push_back(u.type(t).id);
  Json edges = Json::array();
  for (const CdgEdge& e : build_cdg(u).edges) {
    edges.push_back({{"parent", u.constructor(e.parent).qualified},
                     {"child", u.constructor(e.child).qualified},
                     {"multiplicity", e.multiplicity}});
  }
  write_json(out, Json{{"root", u.root_type().id},
                       {"family", std::move(family)},
                       {"foreign", std::move(foreign)},
                       {"types", std::move(types)},
                       {"cdgEdges", std::move(edges)},
                       {"universeHash", u.hash()}});
  return kOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const Universe u = universe_from_file(o);
  write_json(out, prediction_json(u, probs_from_options(u, o), o.size));
  return kOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const Universe u = universe_from_file(o);
  const CostFunction cost = parse_cost(u, o.cost);
  SearchConfig config;
  config.delta = o.delta;
  config.epsilon = o.epsilon;
  config.max_steps = o.max_steps;
  SearchTrace trace;
  GenSpec spec = derive_generator(u, o.size, cost, config, &trace);
  spec.source = print_declarations(u.declarations());
  const Json spec_json = to_json(u, spec);
  if (!o.spec_out.empty()) {
    std::ofstream file(o.spec_out);
    if (!file) throw Error("cannot write '" + o.spec_out + "'");
    write_json(file, spec_json);
  }
  write_json(out, Json{{"spec", spec_json},
                       {"prediction", prediction_json(u, spec.probabilities, spec.size)},
                       {"search",
                        {{"cost", cost.description()},
                         {"outcome", std::string(to_string(trace.outcome))},
                         {"moves", trace.moves()},
                         {"evaluations", trace.evaluations},
                         {"initialCost", trace.steps.front().cost},
                         {"finalCost", trace.steps.back().cost},
                         {"delta", config.delta},
                         {"epsilon", config.epsilon}}}});
  return kOk;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_spec(o);
  if (o.format != "sexp" && o.format != "json") throw UsageError("--format must be sexp or json");
  const Sampler sampler(loaded.universe, loaded.spec, o.budget);
  const std::uint64_t seed = resolve_seed(o);
  std::size_t aborted = 0;
  for (std::size_t i = 0; i < o.count; ++i) {
    Rng rng = Rng::for_stream(seed, i);
    const std::optional<Value> v = sampler.draw(rng);
    if (!v) {
      ++aborted;
      out << (o.format == "json" ? R"({"budgetExhausted":true})" : "#budget-exhausted") << '\n';
    } else if (o.format == "json") {
      out << to_json(loaded.universe, *v).dump() << '\n';
    } else {
      out << to_sexp(loaded.universe, *v) << '\n';
    }
  }
  if (aborted > 0) err << aborted << " of " << o.count << " runs exhausted the budget of " << o.budget << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Loaded loaded = load_spec(o);
  const Universe& u = loaded.universe;
  if (loaded.spec.strategy != Strategy::Dragen) {
    throw ModelError("verify needs a dragen-strategy spec; predictions model that strategy only");
  }
  PredictionReport report = predict_constructors(u, loaded.spec.probabilities, loaded.spec.size);
  report.foreign = predict_foreign(u, loaded.spec.probabilities, report);
  SampleOptions options;
  options.threads = o.threads;
  const SampleStats stats = empirical_stats(u, loaded.spec, o.count, resolve_seed(o), options);

  Json rows = Json::array();
  bool all_pass = true;
  auto add_row = [&](ConstructorId c, double predicted) {
    const double observed = stats.mean[c.value];
    const double se = stats.std_err[c.value];
    const double diff = std::abs(observed - predicted);
    const bool pass = se > 0.0 ? diff <= kVerifySigmas * se : diff <= 1e-9 * std::max(1.0, std::abs(predicted));
    all_pass = all_pass && pass;
    rows.push_back({{"constructor", u.constructor(c).qualified},
                    {"predicted", predicted},
                    {"observed", observed},
                    {"stdErr", se},
                    {"pass", pass}});
  };
  for (std::size_t i = 0; i < report.per_constructor.size(); ++i) {
    add_row(ConstructorId{static_cast<std::uint32_t>(i)}, report.per_constructor[i].total);
  }
  for (const auto& [c, value] : report.foreign) add_row(c, value);
  write_json(out, Json{{"size", loaded.spec.size},
                       {"samples", stats.samples},
                       {"sigmas", kVerifySigmas},
                       {"rows", std::move(rows)},
                       {"pass", all_pass}});
  return all_pass ? kOk : kDomainError;
}

int cmd_histogram(const Options& o, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_spec(o);
  SampleOptions options;
  options.derive_budget = o.budget;
  options.threads = o.threads;
  const SampleStats stats = empirical_stats(loaded.universe, loaded.spec, o.count, resolve_seed(o), options);
  out << "constructors,count\n";
  for (const auto& [size, freq] : stats.size_histogram) out << size << ',' << freq << '\n';
  if (stats.budget_exhausted > 0) {
    err << stats.budget_exhausted << " of " << stats.samples << " runs exhausted the budget of " << o.budget
        << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derive and check random generators for algebraic data types", "dragen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dragen 0.1.0");
  Options o;

  auto add_file = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("-f,--file", o.file, "Declarations file");
    if (required) opt->required();
    cmd->add_option("--root", o.root, "Root type (default: first declared type)");
  };
  auto add_size = [&](CLI::App* cmd) {
    cmd->add_option("--size", o.size, "Generation size")->capture_default_str();
  };
  auto add_spec_source = [&](CLI::App* cmd) {
    cmd->add_option("--spec", o.spec, "Generator spec JSON written by optimize");
    add_file(cmd, false);
    add_size(cmd);
    cmd->add_option("--probs", o.probs, "ProbMap JSON used when no --spec is given");
    cmd->add_option("--strategy", o.strategy, "dragen, megadeth or derive (overrides the spec)");
  };
  std::size_t sample_count = 1;
  std::size_t verify_count = 100'000;
  std::size_t histogram_count = 100'000;
  auto add_sampling = [&](CLI::App* cmd, std::size_t& count) {
    cmd->add_option("--count", count, "Number of values")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed (fallback: DRAGEN_SEED, then 0)");
  };

  auto* check = app.add_subcommand("check", "Parse declarations and summarize the universe");
  add_file(check, true);

  auto* predict = app.add_subcommand("predict", "Predict expected constructor counts");
  add_file(predict, true);
  add_size(predict);
  predict->add_option("--probs", o.probs, "ProbMap JSON (default: uniform)");

  auto* optimize_cmd = app.add_subcommand("optimize", "Tune probabilities for a cost function");
  add_file(optimize_cmd, true);
  add_size(optimize_cmd);
  optimize_cmd->add_option("--cost", o.cost, "uniform | weighted(C=w,...) | only(...) | without(...) | onlyTypes(...) | withoutTypes(...)")
      ->capture_default_str();
  optimize_cmd->add_option("--delta", o.delta, "Search step")->capture_default_str();
  optimize_cmd->add_option("--epsilon", o.epsilon, "Minimum improvement per step")->capture_default_str();
  optimize_cmd->add_option("--max-steps", o.max_steps, "Step cap")->capture_default_str();
  optimize_cmd->add_option("--spec-out", o.spec_out, "Also write the generator spec to this file");

  auto* sample = app.add_subcommand("sample", "Print random values, one per line");
  add_spec_source(sample);
  add_sampling(sample, sample_count);
  sample->add_option("--format", o.format, "sexp or json")->check(CLI::IsMember({"sexp", "json"}))->capture_default_str();
  sample->add_option("--budget", o.budget, "Constructor budget of derive runs")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Compare predicted and observed constructor counts");
  add_spec_source(verify);
  add_sampling(verify, verify_count);
  verify->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* histogram = app.add_subcommand("histogram", "Size distribution as CSV");
  add_spec_source(histogram);
  add_sampling(histogram, histogram_count);
  histogram->add_option("--budget", o.budget, "Constructor budget of derive runs")->capture_default_str();
  histogram->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    if (sample->parsed()) {
      o.count = sample_count;
      return cmd_sample(o, out, err);
    }
    if (verify->parsed()) {
      o.count = verify_count;
      return cmd_verify(o, out);
    }
    if (histogram->parsed()) {
      o.count = histogram_count;
      return cmd_histogram(o, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace dragen::cli
