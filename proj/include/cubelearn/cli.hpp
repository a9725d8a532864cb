#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cubelearn/data_io.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/estimation.hpp"
#include "cubelearn/feature_selection.hpp"
#include "cubelearn/learners.hpp"
#include "cubelearn/oracle.hpp"
#include "cubelearn/parallel.hpp"
#include "cubelearn/report_format.hpp"
#include "cubelearn/rng.hpp"

namespace cubelearn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = kExitOk;
};

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out_path;  // write the report here as well as stdout
  std::string csv_path;  // optional table output
  bool timings = false;  // include wall-clock timings (breaks byte-identity)
};

namespace detail {

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw DataError("write failed for '" + path + "'");
}

// The CLI derives every random stream from --seed; a seed stored inside a
// spec file is deliberately ignored so one flag controls the whole run.
inline constexpr std::uint64_t kGenStream = 1;
inline constexpr std::uint64_t kSplitStream = 2;
inline constexpr std::uint64_t kSweepStreamBase = 100;

struct DatasetSource {
  LabeledDataset data;
  std::optional<SyntheticSpec> spec;  // set when generated synthetically
  std::vector<std::string> warnings;
};

inline DatasetSource acquire_dataset(const std::string& data_path, const std::string& spec_path,
                                     std::uint64_t seed) {
  if (data_path.empty() == spec_path.empty())
    throw ConfigError("provide exactly one of --data or --spec");
  if (!data_path.empty()) {
    LoadReport r = load_csv(data_path);
    return DatasetSource{std::move(r.data), std::nullopt, std::move(r.warnings)};
  }
  SyntheticSpec spec = spec_from_json(load_json_file(spec_path));
  spec.seed = mix_seed(seed, kGenStream);
  return DatasetSource{generate(spec), std::move(spec), {}};
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

inline void finish_report(nlohmann::ordered_json& report, const CommonOptions& common,
                          const Stopwatch& watch) {
  if (common.timings) report["timings"] = {{"total_seconds", watch.seconds()}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
  std::string spec_path;
  std::string data_out;   // CSV
  std::string json_out;   // optional dataset JSON mirror
};

inline CommandResult run_gen(const GenOptions& opt, const CommonOptions& common) {
  detail::Stopwatch watch;
  if (opt.spec_path.empty()) throw ConfigError("gen: --spec is required");
  if (opt.data_out.empty()) throw ConfigError("gen: --data-out is required");
  SyntheticSpec spec = spec_from_json(detail::load_json_file(opt.spec_path));
  spec.seed = mix_seed(common.seed, detail::kGenStream);
  const LabeledDataset data = generate(spec);
  save_csv(data, opt.data_out);
  if (!opt.json_out.empty())
    detail::write_text_file(opt.json_out, to_json(data).dump(2) + "\n");

  nlohmann::ordered_json report;
  report["command"] = "gen";
  report["config"] = {{"spec", opt.spec_path}, {"data_out", opt.data_out}};
  report["seed"] = common.seed;
  report["n"] = data.n();
  report["d"] = data.dim();
  detail::finish_report(report, common, watch);
  return {std::move(report), kExitOk};
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string data_path;
  std::string spec_path;
  std::string algo = "fourier";  // fourier | l2reg | basis
  int k = 1;
  double test_fraction = 0.25;
  std::string model_out;
  std::optional<double> moment_split_fraction;
  bool tune_theta = false;
  double delta = 0.05;  // confidence for reported deviation bounds
};

inline SignPredictor fit_by_name(const std::string& algo, const LabeledDataset& train, int k,
                                 const TrainOptions& opt) {
  if (algo == "fourier") {
    FourierFitOptions fo;
    fo.moment_split_fraction = opt.moment_split_fraction;
    fo.tune_theta = opt.tune_theta;
    return fit_fourier(train, k, fo);
  }
  if (algo == "l2reg") return fit_l2_polyreg(train, k);
  if (algo == "basis") {
    // Least-squares in the empirical parity basis of degree <= k.
    const FeatureMoments moments = empirical_moments(train);
    std::vector<BasisFunction> basis;
    for (FeatureSubset S : enumerate_subsets(train.dim(), k))
      basis.push_back([moments, S](std::span<const double> x) {
        return parity_eval(moments, S, x);
      });
    return fit_generic_basis(train, std::move(basis));
  }
  throw ConfigError("unknown algorithm '" + algo + "' (expected fourier, l2reg or basis)");
}

inline CommandResult run_train(const TrainOptions& opt, const CommonOptions& common) {
  detail::Stopwatch watch;
  if (opt.k < 0) throw ConfigError("train: k must be nonnegative");
  detail::DatasetSource source =
      detail::acquire_dataset(opt.data_path, opt.spec_path, common.seed);
  auto [train, test] = split(source.data, opt.test_fraction, mix_seed(common.seed, detail::kSplitStream));

  const SignPredictor model = fit_by_name(opt.algo, train, opt.k, opt);
  const double train_error = misclassification(model, train);
  const double test_error = misclassification(model, test);

  nlohmann::ordered_json report;
  report["command"] = "train";
  report["config"] = {{"algo", opt.algo},
                      {"k", opt.k},
                      {"test_fraction", opt.test_fraction},
                      {"source", opt.data_path.empty() ? opt.spec_path : opt.data_path}};
  report["seed"] = common.seed;
  report["data"] = {{"n_train", train.n()}, {"n_test", test.n()}, {"d", train.dim()}};
  if (!source.warnings.empty()) report["data"]["warnings"] = source.warnings;

  nlohmann::ordered_json metrics;
  metrics["train_error"] = train_error;
  metrics["test_error"] = test_error;

  // With a synthetic source at enumerable dimension the oracle supplies the
  // optimal error and the concentration bounds around it.
  if (source.spec && source.spec->d <= kMaxEnumerationDim && opt.k >= 1) {
    const ExactProblem problem = synthetic_problem(*source.spec);
    const PoptResult popt = exact_popt(problem, std::min(opt.k, source.spec->d));
    const FeatureMoments moments = empirical_moments(train);
    const double ck = parity_sup_bound(moments, std::min(opt.k, source.spec->d));
    const DeviationBound dev =
        coefficient_deviation_bound(train.n(), train.dim(), std::min(opt.k, source.spec->d),
                                    opt.delta, ck);
    metrics["popt"] = popt.popt;
    metrics["exact_error"] = exact_error(problem, model).error;
    metrics["deviation_eps_max"] = dev.max_coef;
    metrics["deviation_eps_l2"] = dev.l2;
    metrics["bound_two_popt_plus_eps"] = 2.0 * popt.popt + 2.0 * dev.l2;
    metrics["bound_popt_plus_U"] = popt.popt + bound_U(dev.l2);
  }
  report["metrics"] = std::move(metrics);

  if (!opt.model_out.empty()) {
    detail::write_text_file(opt.model_out, model.to_json().dump(2) + "\n");
    report["artifacts"] = {{"model", opt.model_out}};
  }
  detail::finish_report(report, common, watch);
  return {std::move(report), kExitOk};
}

// ---------------------------------------------------------------------------
// select
// ---------------------------------------------------------------------------

struct SelectOptionsCli {
  std::string data_path;
  std::string spec_path;
  int k = 1;
  std::string method = "score2";      // score1 | score2
  std::string search = "exhaustive";  // exhaustive | greedy
  double test_fraction = 0.25;
  bool naive_score1 = false;
};

inline CommandResult run_select(const SelectOptionsCli& opt, const CommonOptions& common) {
  detail::Stopwatch watch;
  ScoreMethod method;
  if (opt.method == "score1")
    method = ScoreMethod::kScore1;
  else if (opt.method == "score2")
    method = ScoreMethod::kScore2;
  else
    throw ConfigError("select: unknown method '" + opt.method + "'");
  SearchStrategy search;
  if (opt.search == "exhaustive")
    search = SearchStrategy::kExhaustive;
  else if (opt.search == "greedy")
    search = SearchStrategy::kGreedy;
  else
    throw ConfigError("select: unknown search '" + opt.search + "'");

  detail::DatasetSource source =
      detail::acquire_dataset(opt.data_path, opt.spec_path, common.seed);
  auto [train, test] = split(source.data, opt.test_fraction, mix_seed(common.seed, detail::kSplitStream));

  SelectOptions sel_opts;
  sel_opts.naive_score1 = opt.naive_score1;
  const SelectionReport sel = select(train, opt.k, method, search, sel_opts);
  const double test_error = misclassification(sel.predictor, test);

  nlohmann::ordered_json report;
  report["command"] = "select";
  report["config"] = {{"k", opt.k},
                      {"method", opt.method},
                      {"search", opt.search},
                      {"test_fraction", opt.test_fraction},
                      {"source", opt.data_path.empty() ? opt.spec_path : opt.data_path}};
  report["seed"] = common.seed;
  report["chosen"] = sel.chosen.indices();
  report["score"] = sel.score;
  report["test_error"] = test_error;
  report["num_scored"] = sel.all_scores.size();

  if (source.spec && source.spec->d <= kMaxEnumerationDim) {
    const ExactProblem problem = synthetic_problem(*source.spec);
    report["popt"] = exact_popt(problem, opt.k).popt;
    report["exact_error"] = exact_error(problem, sel.predictor).error;
  }

  if (!common.csv_path.empty()) {
    std::string csv = "mask,subset,score\n";
    for (const auto& [J, s] : sel.all_scores) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.9g", s);
      std::string subset;
      for (int j : J.indices()) subset += (subset.empty() ? "" : ";") + std::to_string(j);
      csv += std::to_string(J.mask) + "," + subset + "," + buf + "\n";
    }
    detail::write_text_file(common.csv_path, csv);
    report["artifacts"] = {{"scores_csv", common.csv_path}};
  }
  detail::finish_report(report, common, watch);
  return {std::move(report), kExitOk};
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

struct OracleOptions {
  std::string problem_path;  // ExactProblem JSON
  std::string spec_path;     // or a synthetic spec
  int k = 1;
};

inline CommandResult run_oracle(const OracleOptions& opt, const CommonOptions& common) {
  detail::Stopwatch watch;
  if (opt.problem_path.empty() == opt.spec_path.empty())
    throw ConfigError("oracle: provide exactly one of --problem or --spec");
  const ExactProblem problem =
      opt.problem_path.empty()
          ? synthetic_problem(spec_from_json(detail::load_json_file(opt.spec_path)))
          : ExactProblem::from_json(detail::load_json_file(opt.problem_path));

  const PoptResult popt = exact_popt(problem, opt.k);
  const SandwichResult sw = sandwich(problem, opt.k);
  nlohmann::ordered_json report;
  report["command"] = "oracle";
  report["config"] = {{"k", opt.k},
                      {"source", opt.problem_path.empty() ? opt.spec_path : opt.problem_path}};
  report["seed"] = common.seed;
  report["d"] = problem.dim();
  report["deterministic_labels"] = problem.deterministic();
  report["popt"] = popt.popt;
  report["argmax_subset"] = popt.argmax_J.indices();
  report["projection_norm1"] = popt.norm1;
  report["sandwich"] = {{"lower", sw.lower}, {"popt", sw.popt}, {"upper", sw.upper}};

  if (opt.k <= 4) {
    const ErmResult erm = erm_exhaustive(problem, opt.k);
    nlohmann::ordered_json ej;
    ej["error"] = erm.error;
    ej["best_subset"] = erm.best_J.indices();
    std::vector<int> g(erm.best_g.begin(), erm.best_g.end());
    ej["best_g"] = g;
    if (erm.literal_scan_error) ej["literal_scan_error"] = *erm.literal_scan_error;
    ej["matches_popt"] = std::abs(erm.error - popt.popt) <= 1e-9;
    report["erm"] = std::move(ej);
  }
  detail::finish_report(report, common, watch);
  return {std::move(report), kExitOk};
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string spec_path;  // synthetic spec; n field is ignored (grid drives n)
  std::string algo = "fourier";
  int k = 1;
  std::vector<long long> n_grid;
  int seeds = 20;
  double delta = 0.05;
  double slope_threshold = -0.3;
  double r2_threshold = 0.8;
  double bound_slack = 0.02;
};

struct RegressionFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

/// Ordinary least-squares line through (x_i, y_i); r2 is the fraction of
/// variance explained.
inline RegressionFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  RegressionFit out;
  out.points = static_cast<int>(xs.size());
  if (xs.size() < 2) return out;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return out;
  out.slope = sxy / sxx;
  out.r2 = (sxy * sxy) / (sxx * syy);
  return out;
}

inline CommandResult run_verify(const VerifyOptions& opt, const CommonOptions& common) {
  detail::Stopwatch watch;
  if (opt.spec_path.empty()) throw ConfigError("verify: --spec is required");
  if (opt.n_grid.empty()) throw ConfigError("verify: empty n grid");
  if (opt.seeds < 1) throw ConfigError("verify: need at least one seed");
  SyntheticSpec base = spec_from_json(detail::load_json_file(opt.spec_path));
  if (base.d > kMaxEnumerationDim)
    throw ConfigError("verify: oracle requires d <= " + std::to_string(kMaxEnumerationDim));

  const ExactProblem problem = synthetic_problem(base);
  const double popt = exact_popt(problem, std::min(opt.k, base.d)).popt;

  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  std::vector<double> log_n, log_regret;
  bool bound_ok = true;
  bool sanity_ok = true;

  TrainOptions fit_opts;  // reused only for fit_by_name's extra knobs
  for (std::size_t gi = 0; gi < opt.n_grid.size(); ++gi) {
    const long long n = opt.n_grid[gi];
    if (n < 4) throw ConfigError("verify: grid sample sizes must be >= 4");
    // Seed cells are independent; run them across threads and assemble by
    // index, so the report does not depend on the schedule.
    std::vector<double> errors(static_cast<std::size_t>(opt.seeds));
    std::vector<double> cks(static_cast<std::size_t>(opt.seeds), 1.0);
    parallel_for(static_cast<std::size_t>(opt.seeds), [&](std::size_t s) {
      SyntheticSpec spec = base;
      spec.n = n;
      spec.seed = mix_seed(common.seed, detail::kSweepStreamBase + gi * 1000 + s);
      const LabeledDataset train = generate(spec);
      const SignPredictor model = fit_by_name(opt.algo, train, opt.k, fit_opts);
      errors[s] = exact_error(problem, model).error;
      cks[s] = parity_sup_bound(empirical_moments(train), std::min(opt.k, base.d));
    });
    const double ck_last = cks[0];
    double mean = 0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(opt.seeds);
    double var = 0;
    for (double e : errors) var += (e - mean) * (e - mean);
    const double mc_std =
        opt.seeds > 1 ? std::sqrt(var / (opt.seeds - 1)) / std::sqrt(static_cast<double>(opt.seeds))
                      : 0.0;

    const DeviationBound dev =
        coefficient_deviation_bound(n, base.d, std::min(opt.k, base.d), opt.delta, ck_last);
    const double bound = 2.0 * popt + 2.0 * dev.l2;
    const double regret = mean - popt;

    if (mean > bound + opt.bound_slack) bound_ok = false;
    if (mean < popt - 2.0 * mc_std) sanity_ok = false;
    if (regret > 1e-15) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_regret.push_back(std::log(regret));
    }
    grid.push_back({{"n", n},
                    {"mean_error", mean},
                    {"mc_std", mc_std},
                    {"popt", popt},
                    {"deviation_eps_l2", dev.l2},
                    {"bound_two_popt_plus_eps", bound},
                    {"regret", regret}});
  }

  const RegressionFit fit = fit_line(log_n, log_regret);
  const bool slope_ok = fit.points >= 3 && std::isfinite(fit.slope) && fit.slope <= opt.slope_threshold;
  const bool r2_ok = fit.points >= 3 && std::isfinite(fit.r2) && fit.r2 >= opt.r2_threshold;
  const bool all_ok = slope_ok && r2_ok && bound_ok && sanity_ok;

  nlohmann::ordered_json report;
  report["command"] = "verify";
  report["config"] = {{"spec", opt.spec_path}, {"algo", opt.algo},    {"k", opt.k},
                      {"n_grid", opt.n_grid},  {"seeds", opt.seeds},  {"delta", opt.delta},
                      {"slope_threshold", opt.slope_threshold},
                      {"r2_threshold", opt.r2_threshold}};
  report["seed"] = common.seed;
  report["popt"] = popt;
  report["grid"] = std::move(grid);
  report["regret_fit"] = {{"slope", fit.slope}, {"r2", fit.r2}, {"points", fit.points}};
  report["flags"] = {{"slope_ok", slope_ok},
                     {"r2_ok", r2_ok},
                     {"bound_ok", bound_ok},
                     {"error_never_below_popt", sanity_ok},
                     {"all_ok", all_ok}};

  if (!common.csv_path.empty()) {
    std::string csv = "n,mean_error,mc_std,popt,bound,regret\n";
    for (const auto& row : report["grid"]) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                    row["n"].get<long long>(), row["mean_error"].get<double>(),
                    row["mc_std"].get<double>(), row["popt"].get<double>(),
                    row["bound_two_popt_plus_eps"].get<double>(), row["regret"].get<double>());
      csv += buf;
    }
    detail::write_text_file(common.csv_path, csv);
  }
  detail::finish_report(report, common, watch);
  return {std::move(report), all_ok ? kExitOk : kExitVerifyFailed};
}

/// Renders and emits a report: always to stdout, optionally to --out.
inline void emit_report(const CommandResult& result, const CommonOptions& common,
                        std::ostream& os) {
  const std::string text = render_report(result.report);
  os << text;
  if (!common.out_path.empty()) detail::write_text_file(common.out_path, text);
}

}  // namespace cubelearn::cli
