// dvi_screen: generate data, train, and run screened regularization paths.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvi/dataio.hpp"
#include "dvi/error.hpp"
#include "dvi/path.hpp"
#include "dvi/problem.hpp"
#include "dvi/solver.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnsafe = 2;

struct DataArgs {
  std::string data;
  std::string preset;
  std::string loss;
  std::uint64_t seed = 1;
  bool header = false;
  int label_column = -1;
  bool scale = false;
};

struct GridArgs {
  double c_min = 1e-2;
  double c_max = 10.0;
  std::size_t k = 100;
  std::vector<double> grid;
};

struct RunArgs {
  double tol = 1e-6;
  std::int64_t max_outer = 1'000'000;
  bool verify = false;
  double pin_tol = 1e-6;
  double oracle_tol = 1e-10;
  bool recheck = false;
  std::string out;
  std::string format = "json";
};

void add_data_options(CLI::App& cmd, DataArgs& a) {
  auto* data = cmd.add_option("--data", a.data, "LIBSVM file, or CSV when the name ends in .csv");
  auto* preset = cmd.add_option("--preset", a.preset, "Synthetic dataset")
                     ->check(CLI::IsMember({"toy1", "toy2", "toy3", "reg"}));
  data->excludes(preset);
  cmd.add_option("--loss", a.loss, "svm (hinge) or lad (absolute); defaults to lad for the reg preset")
      ->check(CLI::IsMember({"svm", "lad"}));
  cmd.add_option("--seed", a.seed, "Seed for synthetic data")->capture_default_str();
  cmd.add_flag("--header", a.header, "CSV input has a header row");
  cmd.add_option("--label-column", a.label_column, "CSV label column (negative counts from the end)")
      ->capture_default_str();
  cmd.add_flag("--scale-features", a.scale, "Scale every feature column to [-1, 1]");
}

void add_grid_options(CLI::App& cmd, GridArgs& g) {
  cmd.add_option("--cmin", g.c_min, "Smallest C of the log grid")->capture_default_str();
  cmd.add_option("--cmax", g.c_max, "Largest C of the log grid")->capture_default_str();
  cmd.add_option("--k", g.k, "Number of log-grid points")->capture_default_str();
  cmd.add_option("--grid", g.grid, "Explicit increasing C values (overrides --cmin/--cmax/--k)")
      ->delimiter(',');
}

void add_run_options(CLI::App& cmd, RunArgs& r) {
  cmd.add_option("--tol", r.tol, "Solver projected-gradient tolerance")->capture_default_str();
  cmd.add_option("--max-outer", r.max_outer, "Solver sweep limit per grid point")->capture_default_str();
  cmd.add_flag("--verify", r.verify, "Check every pin against unscreened oracle solves");
  cmd.add_option("--pin-tol", r.pin_tol, "Safety tolerance on pinned dual values")->capture_default_str();
  cmd.add_option("--oracle-tol", r.oracle_tol, "Tolerance of the oracle solves")->capture_default_str();
  cmd.add_flag("--recheck", r.recheck, "Release pins that fail the KKT check after each solve and re-solve");
  cmd.add_option("--out", r.out, "Output file (stdout when omitted)");
  cmd.add_option("--format", r.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

bool is_regression(const DataArgs& a) {
  if (!a.loss.empty()) return a.loss == "lad";
  return a.preset == "reg";
}

dvi::DatasetSpec dataset_spec(const DataArgs& a) {
  dvi::DatasetSpec spec;
  spec.seed = a.seed;
  if (!a.data.empty()) {
    spec.path = a.data;
    const bool csv = spec.path.extension() == ".csv" || spec.path.extension() == ".CSV";
    spec.kind = csv ? dvi::DatasetSpec::Kind::kCsv : dvi::DatasetSpec::Kind::kLibsvm;
    spec.csv.header = a.header;
    spec.csv.label_column = a.label_column;
    return spec;
  }
  const std::string preset = a.preset.empty() ? "toy1" : a.preset;
  if (preset == "reg") {
    spec.kind = dvi::DatasetSpec::Kind::kSyntheticRegression;
    return spec;
  }
  spec.kind = dvi::DatasetSpec::Kind::kToyGaussian;
  const double mu = preset == "toy1" ? 1.5 : preset == "toy2" ? 0.75 : 0.5;
  spec.mu_pos = mu;
  spec.mu_neg = -mu;
  return spec;
}

dvi::ProblemData load_problem(const DataArgs& a) {
  std::vector<dvi::Instance> instances = dvi::load_dataset(dataset_spec(a));
  if (a.scale) dvi::scale_features(instances);
  const dvi::LossSpec loss = is_regression(a) ? dvi::LossSpec::absolute() : dvi::LossSpec::hinge();
  return dvi::build_problem(instances, loss);
}

dvi::PathGrid make_grid(const GridArgs& g) {
  if (!g.grid.empty()) return dvi::explicit_grid(g.grid);
  return dvi::log_grid(g.c_min, g.c_max, g.k);
}

dvi::PathOptions path_options(const RunArgs& r) {
  dvi::PathOptions o;
  o.solver.tol = r.tol;
  o.solver.max_outer = r.max_outer;
  o.verify = r.verify;
  o.pin_tol = r.pin_tol;
  o.oracle_tol = r.oracle_tol;
  o.recheck_pins = r.recheck;
  return o;
}

dvi::ReportFormat report_format(const RunArgs& r) {
  return r.format == "csv" ? dvi::ReportFormat::kCsv : dvi::ReportFormat::kJson;
}

template <typename Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw dvi::Error(dvi::ErrorCode::kIo, "cannot open " + path + " for writing");
  emit(out);
}

int run_gen_data(const DataArgs& a, const std::string& out, std::size_t n_per_class, std::size_t l,
                 std::size_t n, double noise, double outliers) {
  if (out.empty()) throw dvi::Error(dvi::ErrorCode::kInvalidArgument, "gen-data needs --out");
  dvi::DatasetSpec spec = dataset_spec(a);
  spec.n_per_class = n_per_class;
  spec.l = l;
  spec.n = n;
  spec.noise_sigma = noise;
  spec.outlier_fraction = outliers;
  std::vector<dvi::Instance> instances = dvi::load_dataset(spec);
  if (a.scale) dvi::scale_features(instances);
  dvi::write_libsvm(instances, out);
  std::cerr << "wrote " << instances.size() << " instances to " << out << '\n';
  return 0;
}

int run_train(const DataArgs& a, double c, const RunArgs& r) {
  const dvi::ProblemData problem = load_problem(a);
  dvi::SolverOptions so;
  so.tol = r.tol;
  so.max_outer = r.max_outer;
  const dvi::DualSolution dual = dvi::solve_dual(problem, c, nullptr, {}, so);
  const dvi::PrimalSolution primal = dvi::primal_from_dual(problem, dual);
  const dvi::KktPartition parts = dvi::kkt_partition(problem, primal, std::max(r.tol, 1e-9));
  // Strong duality: P(w*) = -C D(theta*).
  const double primal_value = dvi::primal_objective(problem, c, primal.w);
  write_output(r.out, [&](std::ostream& os) {
    os.precision(17);
    os << "{\n  \"c\": " << c << ",\n  \"converged\": " << (dual.converged ? "true" : "false")
       << ",\n  \"iterations\": " << dual.iterations << ",\n  \"dual_objective\": " << dual.objective
       << ",\n  \"primal_objective\": " << primal_value
       << ",\n  \"duality_gap\": " << primal_value + c * dual.objective
       << ",\n  \"kkt\": {\"r\": " << parts.r.size() << ", \"e\": " << parts.e.size()
       << ", \"l\": " << parts.l.size() << "},\n  \"w\": [";
    for (Eigen::Index j = 0; j < primal.w.size(); ++j) os << (j ? ", " : "") << primal.w[j];
    os << "]\n}\n";
  });
  return dual.converged ? 0 : kExitError;
}

int run_path_cmd(const DataArgs& a, const GridArgs& g, const RunArgs& r, const std::string& method_name,
                 bool timing, int repeats) {
  const dvi::ProblemData problem = load_problem(a);
  const dvi::PathGrid grid = make_grid(g);
  const dvi::Method method = dvi::parse_method(method_name);
  const dvi::PathOptions options = path_options(r);
  dvi::PathReport report = dvi::run_path(problem, grid, method, options);
  if (timing) report.timing = dvi::time_against_plain(problem, grid, method, options, repeats);
  write_output(r.out, [&](std::ostream& os) { dvi::emit_report(report, report_format(r), os); });
  std::cerr << dvi::to_string(method) << ": mean rejection " << report.mean_rejection() << ", total "
            << report.total_seconds << " s, " << report.safety_violations << " safety violations\n";
  return report.safety_violations == 0 ? 0 : kExitUnsafe;
}

int run_compare(const DataArgs& a, const GridArgs& g, const RunArgs& r, std::vector<std::string> names) {
  const dvi::ProblemData problem = load_problem(a);
  const dvi::PathGrid grid = make_grid(g);
  if (names.empty()) {
    names = {"dvi-dual", "dvi-primal"};
    if (problem.loss().kind() == dvi::LossKind::kHinge) {
      names.insert(names.end(), {"ssnsv", "essnsv"});
    }
  }
  std::vector<dvi::Method> methods;
  for (const std::string& name : names) methods.push_back(dvi::parse_method(name));
  const dvi::MethodComparison cmp = dvi::compare_methods(problem, grid, methods, path_options(r));
  write_output(r.out, [&](std::ostream& os) { dvi::emit_comparison(cmp, report_format(r), os); });

  std::size_t violations = 0;
  for (const dvi::PathReport& rep : cmp.reports) violations += rep.safety_violations;
  if (cmp.dominance_checked && !cmp.dominance_holds) std::cerr << "ESSNSV did not dominate SSNSV\n";
  if (cmp.dvi_disagreements_wide_margin > 0) {
    std::cerr << cmp.dvi_disagreements_wide_margin << " DVI dual/primal disagreements outside the margin\n";
  }
  return violations == 0 ? 0 : kExitUnsafe;
}

int run_verify(const DataArgs& a, const GridArgs& g, RunArgs r, std::vector<std::string> names) {
  r.verify = true;
  const dvi::ProblemData problem = load_problem(a);
  const dvi::PathGrid grid = make_grid(g);
  if (names.empty()) names = {"dvi-dual", "dvi-primal"};

  dvi::SolverOptions oracle_options;
  oracle_options.tol = r.oracle_tol;
  oracle_options.max_outer = 10'000'000;
  const std::vector<dvi::DualSolution> oracle = dvi::reference_path(problem, grid, oracle_options);

  std::size_t violations = 0;
  std::vector<dvi::PathReport> reports;
  for (const std::string& name : names) {
    reports.push_back(dvi::run_path(problem, grid, dvi::parse_method(name), path_options(r), &oracle));
    const dvi::PathReport& rep = reports.back();
    double divergence = 0.0;
    for (const dvi::PathPoint& p : rep.points) divergence = std::max(divergence, p.w_rel_divergence);
    std::cerr << name << ": " << rep.safety_violations << " violations, max w divergence " << divergence
              << ", mean rejection " << rep.mean_rejection() << '\n';
    violations += rep.safety_violations;
  }
  if (!r.out.empty()) {
    write_output(r.out, [&](std::ostream& os) {
      for (const dvi::PathReport& rep : reports) dvi::emit_report(rep, report_format(r), os);
    });
  }
  return violations == 0 ? 0 : kExitUnsafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe screening along SVM and LAD regularization paths"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  DataArgs data;
  GridArgs grid;
  RunArgs run;

  auto* gen = app.add_subcommand("gen-data", "Write a synthetic dataset in LIBSVM format");
  std::string gen_out;
  std::size_t n_per_class = 1000, reg_l = 2000, reg_n = 10;
  double noise = 0.1, outliers = 0.1;
  gen->add_option("--preset", data.preset, "Synthetic dataset")
      ->check(CLI::IsMember({"toy1", "toy2", "toy3", "reg"}))
      ->required();
  gen->add_option("--seed", data.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Destination file")->required();
  gen->add_option("--n-per-class", n_per_class, "Points per class (toy presets)")->capture_default_str();
  gen->add_option("--l", reg_l, "Instances (reg preset)")->capture_default_str();
  gen->add_option("--n", reg_n, "Features (reg preset)")->capture_default_str();
  gen->add_option("--noise", noise, "Response noise sigma (reg preset)")->capture_default_str();
  gen->add_option("--outliers", outliers, "Outlier fraction (reg preset)")->capture_default_str();
  gen->add_flag("--scale-features", data.scale, "Scale every feature column to [-1, 1]");

  auto* train = app.add_subcommand("train", "Solve at a single C and print w");
  double train_c = 1.0;
  add_data_options(*train, data);
  train->add_option("--c", train_c, "Regularization parameter")->capture_default_str();
  train->add_option("--tol", run.tol, "Solver tolerance")->capture_default_str();
  train->add_option("--max-outer", run.max_outer, "Solver sweep limit")->capture_default_str();
  train->add_option("--out", run.out, "Output file (stdout when omitted)");

  auto* path = app.add_subcommand("path", "Run a screened path and emit a report");
  std::string method = "dvi-primal";
  bool timing = false;
  int repeats = 3;
  add_data_options(*path, data);
  add_grid_options(*path, grid);
  add_run_options(*path, run);
  path->add_option("--method", method, "Screening rule")
      ->check(CLI::IsMember({"none", "dvi-dual", "dvi-primal", "ssnsv", "essnsv"}))
      ->capture_default_str();
  path->add_flag("--timing", timing, "Also time the plain and screened paths");
  path->add_option("--repeats", repeats, "Timing repeats (median is reported)")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Rejection ratios of several rules on one grid");
  std::vector<std::string> methods;
  add_data_options(*compare, data);
  add_grid_options(*compare, grid);
  add_run_options(*compare, run);
  compare->add_option("--methods", methods, "Rules to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"none", "dvi-dual", "dvi-primal", "ssnsv", "essnsv"}));

  auto* verify = app.add_subcommand("verify", "Check screening safety against oracle solves");
  add_data_options(*verify, data);
  add_grid_options(*verify, grid);
  add_run_options(*verify, run);
  verify->add_option("--methods", methods, "Rules to verify")
      ->delimiter(',')
      ->check(CLI::IsMember({"dvi-dual", "dvi-primal", "ssnsv", "essnsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*gen) return run_gen_data(data, gen_out, n_per_class, reg_l, reg_n, noise, outliers);
    if (*train) return run_train(data, train_c, run);
    if (*path) return run_path_cmd(data, grid, run, method, timing, repeats);
    if (*compare) return run_compare(data, grid, run, methods);
    if (*verify) return run_verify(data, grid, run, methods);
  } catch (const dvi::Error& e) {
    std::cerr << "error [" << dvi::to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
