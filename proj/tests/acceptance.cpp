// Acceptance runner: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance [--cli path/to/vpboot] [--mite dir]
//
// The real-data criterion reads community.csv, env.csv and xy.csv from the
// --mite directory (or $VPBOOT_MITE_DIR) and is skipped when they are absent.

#include "support/oracles.hpp"
#include "support/properties.hpp"
#include "vpboot.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace vpboot;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Line {
  int id;
  std::string title;
  Verdict verdict;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, std::string title, Verdict v, std::string detail) {
  static const char* names[] = {"PASS", "FAIL", "SKIP"};
  std::cout << names[static_cast<int>(v)] << "  criterion " << id << ": " << title << " | "
            << detail << std::endl;
  g_lines.push_back({id, std::move(title), v, std::move(detail)});
}

Verdict verdict(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string checks_detail(const std::vector<TrendCheck>& checks) {
  std::string s;
  for (const auto& c : checks)
    s += (s.empty() ? "" : "; ") + c.name + " = " + fmt(c.value) + " " + c.relation + " " +
         fmt(c.threshold) + (c.passed ? "" : " [violated]");
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr std::uint64_t kSeed = 1;

void criterion_oracles() {
  std::mt19937_64 g(20240501);
  constexpr int kInstances = 200;
  double worst_r2 = 0.0, worst_inertia = 0.0, worst_identity = 0.0;
  for (int k = 0; k < kInstances; ++k) {
    const Index n = props::draw(g, 3, 6), p = props::draw(g, 1, 3);
    const Index m = props::draw(g, 1, std::min<Index>(2, n - 2));
    const Matrix y = oracle::random_matrix(g, n, p, 0.0, 10.0);
    const Matrix x = oracle::random_matrix(g, n, m);
    worst_r2 = std::max(worst_r2, std::abs(rda_r2(y, x) - oracle::columnwise_r2(y, x)));

    const Matrix counts = oracle::random_counts(g, n, p);
    worst_inertia = std::max(worst_inertia, std::abs(chi_square_transform(counts).total_inertia -
                                                     oracle::chi_square_inertia(counts)));

    const Index nv = 6;
    const Matrix yv = oracle::random_matrix(g, nv, p, 0.0, 10.0);
    const Matrix xv = oracle::random_matrix(g, nv, props::draw(g, 1, 2));
    const Matrix wv = oracle::random_matrix(g, nv, props::draw(g, 1, 2));
    const auto part = varpart_two(yv, xv, wv);
    worst_identity = std::max(
        worst_identity,
        std::abs(part.frac_pure_x + part.frac_shared + part.frac_pure_w + part.frac_residual - 1.0));
  }
  const bool ok = worst_r2 <= 1e-10 && worst_inertia <= 1e-10 && worst_identity <= 1e-12;
  report(1, "oracle equivalence", verdict(ok),
         std::to_string(kInstances) + " instances; max |R2 - oracle| = " + fmt(worst_r2) +
             " (<= 1e-10), max |inertia - oracle| = " + fmt(worst_inertia) +
             " (<= 1e-10), max |partition sum - 1| = " + fmt(worst_identity) + " (<= 1e-12)");
}

FigureRun run_figure(Figure f) {
  ReproduceOptions o;
  o.figure = f;
  o.scale = Scale::kDesk;
  o.seed = kSeed;
  return reproduce_figure(o);
}

void criterion_sweep(int id, Figure f, const std::string& title, std::size_t check_count) {
  const auto t0 = std::chrono::steady_clock::now();
  const FigureRun run = run_figure(f);
  std::vector<TrendCheck> checks(run.checks.begin(),
                                 run.checks.begin() + static_cast<std::ptrdiff_t>(
                                                          std::min(check_count, run.checks.size())));
  bool ok = !checks.empty();
  for (const auto& c : checks) ok = ok && c.passed;
  report(id, title, verdict(ok), checks_detail(checks) + "; " + fmt(seconds_since(t0)) + " s");
}

void criterion_fig5() {
  const auto t0 = std::chrono::steady_clock::now();
  const FigureRun run = run_figure(Figure::kFig5);
  report(5, "bootstrap vs observed error, toy model", verdict(run.all_passed()),
         checks_detail(run.checks) + "; " + fmt(seconds_since(t0)) + " s");
}

void criterion_fig6() {
  const auto t0 = std::chrono::steady_clock::now();
  const FigureRun run = run_figure(Figure::kFig6);
  report(6, "bootstrap vs observed error, CCA model", verdict(run.all_passed()),
         checks_detail(run.checks) + "; " + std::to_string(run.cca_cells.size()) + " cells; " +
             fmt(seconds_since(t0)) + " s");
}

void criterion_real_data(const fs::path& dir) {
  const fs::path community = dir / "community.csv", env = dir / "env.csv", xy = dir / "xy.csv";
  if (dir.empty() || !fs::exists(community) || !fs::exists(env) || !fs::exists(xy)) {
    report(7, "real-data analysis", Verdict::kSkip,
           "dataset not supplied (expected community.csv, env.csv, xy.csv in " +
               (dir.empty() ? std::string("<unset>") : dir.string()) + ")");
    return;
  }
  AnalysisOptions o;
  o.dataset_name = "mite";
  o.method = Method::kCca;
  o.replicates = 1000;
  o.seed = kSeed;
  const auto report_data =
      analyze(read_community_csv(community.string()), read_predictor_csv(env.string(), "env"),
              trend_surface(read_predictor_csv(xy.string(), "spatial")), o);
  bool ok = report_data.fractions.env_pure >= 0.15 && report_data.fractions.env_pure <= 0.35 &&
            report_data.runtime_seconds <= 60.0;
  std::string detail = "env-pure = " + fmt(report_data.fractions.env_pure) + " in [0.15, 0.35]";
  for (const auto& s : report_data.summaries) {
    ok = ok && s.relative_uncertainty >= 0.05 && s.relative_uncertainty <= 0.25;
    detail += "; rel(" + s.statistic_name + ") = " + fmt(s.relative_uncertainty);
  }
  detail += " in [0.05, 0.25]; runtime " + fmt(report_data.runtime_seconds) + " s <= 60";
  report(7, "real-data analysis", verdict(ok), detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_determinism(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) {
    report(8, "determinism across thread counts", Verdict::kFail, "CLI binary not found: " + cli);
    return;
  }
  const fs::path dir = fs::temp_directory_path() / ("vpboot_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "scenario.cfg");
    cfg << "seed = 5\nn_sites = 60\nsigma_noise = 0.05\n";
  }
  std::vector<std::string> mismatches;
  int compared = 0;
  auto compare = [&](const std::string& label, const fs::path& a, const fs::path& b) {
    ++compared;
    if (!fs::exists(a) || !fs::exists(b) || slurp(a) != slurp(b)) mismatches.push_back(label);
  };

  const std::string q = "'" + cli + "' ";
  shell(q + "simulate '" + (dir / "scenario.cfg").string() + "' --out '" + (dir / "a_").string() + "'");
  shell(q + "simulate '" + (dir / "scenario.cfg").string() + "' --out '" + (dir / "b_").string() + "'");
  compare("simulate community", dir / "a_community.csv", dir / "b_community.csv");
  compare("simulate env", dir / "a_env.csv", dir / "b_env.csv");

  // x and y as separate blocks.
  const auto env = read_csv_table((dir / "a_env.csv").string());
  for (Index j = 0; j < 2; ++j) {
    std::ofstream out(dir / (env.col_labels[static_cast<std::size_t>(j)] + ".csv"));
    write_csv_table(out, "site", env.row_labels, {env.col_labels[static_cast<std::size_t>(j)]},
                    env.values.col(j));
  }
  for (const std::string method : {"cca", "rda"})
    for (const std::string threads : {"1", "4"})
      shell(q + "analyze '" + (dir / "a_community.csv").string() + "' '" + (dir / "x.csv").string() +
            "' '" + (dir / "y.csv").string() + "' --method " + method +
            " --bootstrap 200 --seed 9 --threads " + threads + " --out '" +
            (dir / (method + "_t" + threads + ".json")).string() + "'");
  compare("analyze cca json", dir / "cca_t1.json", dir / "cca_t4.json");
  compare("analyze rda json", dir / "rda_t1.json", dir / "rda_t4.json");

  for (const std::string threads : {"1", "4"})
    shell(q + "reproduce fig2 --seed 3 --threads " + threads + " --out '" +
          (dir / ("fig_t" + threads)).string() + "'");
  compare("reproduce fig2 csv", dir / "fig_t1" / "fig2.csv", dir / "fig_t4" / "fig2.csv");
  compare("reproduce fig2 svg", dir / "fig_t1" / "fig2.svg", dir / "fig_t4" / "fig2.svg");

  fs::remove_all(dir);
  std::string detail = std::to_string(compared) + " output pairs compared (threads 1 vs 4)";
  for (const auto& m : mismatches) detail += "; differs: " + m;
  report(8, "determinism across thread counts", verdict(mismatches.empty()), detail);
}

void criterion_properties() {
  constexpr int kCases = 1000;
  const std::vector<std::pair<std::string, props::Outcome>> outcomes{
      {"projection idempotence", props::projection_idempotence(kCases, 101)},
      {"chi-square weighted marginals", props::chi_square_marginals(kCases, 102)},
      {"site total bounds", props::row_sum_bounds(kCases, 103)},
      {"bootstrap gluing", props::bootstrap_gluing(kCases, 104)},
      {"partition identity", props::partition_identity(kCases, 105)},
      {"affine invariance", props::affine_invariance(kCases, 106)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, o] : outcomes) {
    ok = ok && o.ok() && o.cases == kCases;
    detail += (detail.empty() ? "" : "; ") + name + " " + std::to_string(o.cases - o.failures) +
              "/" + std::to_string(o.cases);
    if (!o.ok()) detail += " (" + o.first_failure + ")";
  }
  report(9, "property suites", verdict(ok), detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = VPBOOT_CLI_PATH;
  fs::path mite;
  if (const char* env = std::getenv("VPBOOT_MITE_DIR")) mite = env;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    else if (flag == "--mite") mite = argv[i + 1];
    else {
      std::cerr << "unknown option " << flag << '\n';
      return 2;
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> criteria{
      criterion_oracles,
      [] { criterion_sweep(2, Figure::kFig2, "relative error vs sample size", 1); },
      [] { criterion_sweep(3, Figure::kFig3, "relative error and mean vs sampling range", 2); },
      [] { criterion_sweep(4, Figure::kFig4, "relative error vs niche optimum distance", 1); },
      criterion_fig5,
      criterion_fig6,
      [&] { criterion_real_data(mite); },
      [&] { criterion_determinism(cli); },
      criterion_properties,
  };
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(static_cast<int>(g_lines.size()) + 1, "criterion raised", Verdict::kFail, e.what());
    }
  }

  int pass = 0, fail = 0, skip = 0;
  for (const auto& l : g_lines)
    (l.verdict == Verdict::kPass ? pass : l.verdict == Verdict::kFail ? fail : skip)++;
  std::cout << "summary: " << pass << " passed, " << fail << " failed, " << skip << " skipped ("
            << fmt(seconds_since(t0)) << " s)\n";
  return fail == 0 ? 0 : 1;
}
