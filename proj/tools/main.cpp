// Command-line front end: train/evaluate the learners, run feature
// selection, query the exact oracle, and sweep sample sizes against the
// theoretical bounds. Reports are JSON on stdout with every float printed to
// 9 significant digits; fixed --seed means byte-identical reports.

#include <CLI11.hpp>
#include <iostream>

#include "cubelearn/cli.hpp"

namespace cli = cubelearn::cli;

int main(int argc, char** argv) {
  CLI::App app{"Fourier-based learning and feature selection on the Boolean cube"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::CommonOptions common;
  app.add_option("--seed", common.seed, "Master seed; all randomness derives from it");
  app.add_option("--out", common.out_path, "Also write the JSON report to this path");
  app.add_option("--csv", common.csv_path, "Write tabular output (scores, sweep grid) as CSV");
  app.add_flag("--timings", common.timings, "Include wall-clock timings in the report");

  cli::GenOptions gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
  cmd_gen->add_option("--spec", gen.spec_path, "Synthetic spec JSON (seed field is ignored; use --seed)")->required();
  cmd_gen->add_option("--data-out", gen.data_out, "Output CSV path")->required();
  cmd_gen->add_option("--json-out", gen.json_out, "Optional dataset JSON mirror");

  cli::TrainOptions train;
  auto* cmd_train = app.add_subcommand("train", "Fit a learner and evaluate on a held-out split");
  cmd_train->add_option("--data", train.data_path, "Dataset CSV (last column is the label)");
  cmd_train->add_option("--spec", train.spec_path, "Synthetic spec JSON instead of --data");
  cmd_train->add_option("--algo", train.algo, "fourier | l2reg | basis")->capture_default_str();
  cmd_train->add_option("--k", train.k, "Degree / junta budget")->capture_default_str();
  cmd_train->add_option("--test-fraction", train.test_fraction, "Held-out fraction")->capture_default_str();
  cmd_train->add_option("--model-out", train.model_out, "Write the fitted model JSON here");
  double moment_split = 0.0;
  auto* ms = cmd_train->add_option("--moment-split", moment_split,
                                   "Estimate moments on this leading fraction only");
  cmd_train->add_flag("--tune-theta", train.tune_theta,
                      "Run threshold selection on the Fourier fit");
  cmd_train->add_option("--delta", train.delta, "Confidence for reported bounds")->capture_default_str();

  cli::SelectOptionsCli sel;
  auto* cmd_select = app.add_subcommand("select", "Subset selection with the embedded predictor");
  cmd_select->add_option("--data", sel.data_path, "Dataset CSV");
  cmd_select->add_option("--spec", sel.spec_path, "Synthetic spec JSON instead of --data");
  cmd_select->add_option("--k", sel.k, "Subset cardinality budget")->capture_default_str();
  cmd_select->add_option("--method", sel.method, "score1 | score2")->capture_default_str();
  cmd_select->add_option("--search", sel.search, "exhaustive | greedy")->capture_default_str();
  cmd_select->add_option("--test-fraction", sel.test_fraction, "Held-out fraction")->capture_default_str();
  cmd_select->add_flag("--naive-score1", sel.naive_score1,
                       "Plug-in score1 instead of the leave-one-out form");

  cli::OracleOptions oracle;
  auto* cmd_oracle = app.add_subcommand("oracle", "Exact optimum, sandwich bounds and ERM cross-check");
  cmd_oracle->add_option("--problem", oracle.problem_path, "ExactProblem JSON");
  cmd_oracle->add_option("--spec", oracle.spec_path, "Synthetic spec JSON instead of --problem");
  cmd_oracle->add_option("--k", oracle.k, "Junta budget")->capture_default_str();

  cli::VerifyOptions verify;
  auto* cmd_verify = app.add_subcommand("verify", "Sweep n, compare error to the oracle and bounds");
  cmd_verify->add_option("--spec", verify.spec_path, "Synthetic spec JSON (its n is ignored)")->required();
  cmd_verify->add_option("--algo", verify.algo, "fourier | l2reg | basis")->capture_default_str();
  cmd_verify->add_option("--k", verify.k, "Degree")->capture_default_str();
  cmd_verify->add_option("--n-grid", verify.n_grid, "Comma-separated sample sizes, e.g. 256,1024,4096")
      ->delimiter(',');
  cmd_verify->add_option("--seeds", verify.seeds, "Seeds per grid point")->capture_default_str();
  cmd_verify->add_option("--delta", verify.delta, "Confidence for the deviation bound")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return cli::kExitConfig;
  }

  try {
    cli::CommandResult result;
    if (cmd_gen->parsed()) {
      result = cli::run_gen(gen, common);
    } else if (cmd_train->parsed()) {
      if (ms->count() > 0) train.moment_split_fraction = moment_split;
      result = cli::run_train(train, common);
    } else if (cmd_select->parsed()) {
      result = cli::run_select(sel, common);
    } else if (cmd_oracle->parsed()) {
      result = cli::run_oracle(oracle, common);
    } else {
      result = cli::run_verify(verify, common);
    }
    cli::emit_report(result, common, std::cout);
    return result.exit_code;
  } catch (const cubelearn::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return cli::kExitData;
  } catch (const cubelearn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitConfig;
  }
}
