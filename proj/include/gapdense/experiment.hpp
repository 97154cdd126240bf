#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gapdense {

// One batch invocation: a command name plus its parameters. Filled by the
// command-line front end or constructed directly in tests.
struct ExperimentConfig {
  std::string command;  // orthopoly | gapspan | tdense-demo | counterexample |
                        // sobolev-demo | ratio-table | muntz | check
  std::string measure_path;
  std::optional<long> bits;

  long degree = -1;                  // orthopoly, tdense-demo
  std::string f_expr;                // gapspan
  std::string g_expr;                // sobolev-demo
  long j = -1;                       // gapspan
  long n = -1;                       // sobolev-demo
  long k = -1;                       // ratio-table
  std::vector<long> n_list;          // gapspan, sobolev-demo, ratio-table
  bool both_methods = false;         // gapspan
  std::string t_spec;                // tdense-demo
  std::string w_text;                // counterexample
  std::vector<std::string> lambdas;  // muntz
  long muntz_j = -1;                 // muntz
  std::string check_path;            // check
  std::string out_dir;               // empty: CSV to stdout
};

struct ExperimentResult {
  int exit_code = 0;
  std::string csv_text;
  std::string meta_text;
  std::string stdout_text;  // printed before the CSV (counterexample line)
  std::string error_text;
  std::vector<std::string> warnings;
};

// Runs the experiment and renders its artifacts; never throws. Exit codes:
// 0 success, 2 config/schema error, 3 precision exhausted, 4 atom on a zero
// of t, 1 anything else.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Runs and writes artifacts (CSV + metadata sidecar into out_dir, or CSV to
// stdout); returns the exit code.
int run_and_emit(const ExperimentConfig& config);

// "5,10,20" or "5..30"
std::vector<long> parse_degree_list(const std::string& text);

}  // namespace gapdense
