// vpboot command-line front end.
//
//   vpboot analyze community.csv env.csv spatial.csv --seed 1 [--method cca|rda]
//   vpboot reproduce fig5 --seed 1 [--scale desk|paper] [--out dir]
//   vpboot simulate scenario.cfg --out prefix

#include "vpboot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vpboot::InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw vpboot::InputError("failed writing '" + path.string() + "'");
}

struct AnalyzeArgs {
  std::string community, env, spatial;
  std::string method = "cca";
  long long bootstrap = 1000;
  std::optional<std::uint64_t> seed;
  bool log1p = false;
  bool no_log1p = false;
  bool spatial_trend = false;
  std::string name;
  std::string out;
  bool json = false;
  unsigned threads = 0;
};

int run_analyze(const AnalyzeArgs& a) {
  using namespace vpboot;
  if (!a.seed) throw InputError("analyze: --seed is required");
  if (a.log1p && a.no_log1p) throw InputError("analyze: --log1p and --no-log1p are exclusive");
  AnalysisOptions o;
  o.method = parse_method(a.method);
  o.replicates = a.bootstrap;
  o.seed = *a.seed;
  o.threads = a.threads;
  if (a.log1p) o.log1p = true;
  if (a.no_log1p) o.log1p = false;
  o.dataset_name = a.name.empty() ? std::filesystem::path(a.community).stem().string() : a.name;

  const CommunityTable table = read_community_csv(a.community);
  const PredictorBlock env = read_predictor_csv(a.env, "env");
  PredictorBlock spatial = read_predictor_csv(a.spatial, "spatial");
  if (a.spatial_trend) spatial = trend_surface(spatial);

  const AnalysisReport report = analyze(table, env, spatial, o);
  const std::string json = to_json(report).dump(2) + "\n";
  if (!a.out.empty()) write_file(a.out, json);
  if (a.json) std::cout << json;
  else std::cout << to_text(report);
  return kExitOk;
}

struct ReproduceArgs {
  std::string figure;
  std::string scale = "desk";
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  unsigned threads = 0;
  std::string y_statistic = "marginal";
};

int run_reproduce(const ReproduceArgs& a) {
  using namespace vpboot;
  if (!a.seed) throw InputError("reproduce: --seed is required");
  ReproduceOptions o;
  o.figure = parse_figure(a.figure);
  o.scale = parse_scale(a.scale);
  o.seed = *a.seed;
  o.threads = a.threads;
  o.statistic = parse_y_statistic(a.y_statistic);

  const FigureRun run = reproduce_figure(o);
  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  write_file(dir / (a.figure + ".csv"), run.csv);
  write_file(dir / (a.figure + ".svg"), run.svg);
  std::cout << a.figure << " (" << a.scale << ", seed " << o.seed << ") -> "
            << (dir / (a.figure + ".csv")).string() << '\n'
            << checks_text(run);
  return run.all_passed() ? kExitOk : kExitCheckFailed;
}

int run_simulate(const std::string& config_path, const std::string& prefix) {
  using namespace vpboot;
  const ScenarioConfig config = read_scenario_config(config_path);
  const SyntheticDataset data = generate_dataset(config);
  Provenance p;
  p.seed = config.seed;
  p.replicates = config.replicates;
  p.config_hash = config_hash(config);
  write_table_csv_file(prefix + "community.csv", data.table, &p);
  write_table_csv_file(prefix + "env.csv", data.env, &p);
  std::cout << "wrote " << prefix << "community.csv and " << prefix << "env.csv ("
            << config.n_sites << " sites, " << config.niches.size() << " species)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance partitioning with bootstrap uncertainty"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("vpboot ") + vpboot::kToolVersion);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Partition a dataset and bootstrap the fractions");
  analyze->add_option("community", analyze_args.community, "Site-by-species CSV")->required();
  analyze->add_option("env", analyze_args.env, "Environmental predictor CSV")->required();
  analyze->add_option("spatial", analyze_args.spatial, "Spatial predictor CSV")->required();
  analyze->add_option("--method", analyze_args.method, "cca or rda")->check(CLI::IsMember({"cca", "rda"}));
  analyze->add_option("--bootstrap", analyze_args.bootstrap, "Bootstrap resamples")->check(CLI::Range(2LL, 100000000LL));
  analyze->add_option("--seed", analyze_args.seed, "Random seed (required)");
  analyze->add_flag("--log1p", analyze_args.log1p, "ln(1+x) transform (default for cca)");
  analyze->add_flag("--no-log1p", analyze_args.no_log1p, "Disable the ln(1+x) transform");
  analyze->add_flag("--spatial-trend", analyze_args.spatial_trend,
                    "Expand 2-column coordinates to a second-order trend surface");
  analyze->add_option("--name", analyze_args.name, "Dataset name in the report");
  analyze->add_option("--out", analyze_args.out, "Write the JSON report here");
  analyze->add_flag("--json", analyze_args.json, "Print JSON instead of text");
  analyze->add_option("--threads", analyze_args.threads, "Worker threads (speed only)");

  ReproduceArgs reproduce_args;
  auto* reproduce = app.add_subcommand("reproduce", "Run a figure experiment and its trend checks");
  reproduce->add_option("figure", reproduce_args.figure, "fig2, fig3, fig4, fig5 or fig6")->required();
  reproduce->add_option("--scale", reproduce_args.scale, "desk (M=200) or paper (M=1000)");
  reproduce->add_option("--seed", reproduce_args.seed, "Random seed (required)");
  reproduce->add_option("--out", reproduce_args.out, "Output directory");
  reproduce->add_option("--threads", reproduce_args.threads, "Worker threads (speed only)");
  reproduce->add_option("--y-statistic", reproduce_args.y_statistic, "marginal or semipartial");

  std::string config_path, prefix;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic community and env table");
  simulate->add_option("config", config_path, "Scenario config document")->required();
  simulate->add_option("--out", prefix, "Output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*reproduce) return run_reproduce(reproduce_args);
    if (*simulate) return run_simulate(config_path, prefix);
  } catch (const vpboot::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const vpboot::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
