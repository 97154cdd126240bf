#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "gapdense/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gapdense: weighted L2 polynomial approximation experiments"};
  app.require_subcommand(0, 1);

  gapdense::ExperimentConfig cfg;
  long bits_val = 0;
  std::string n_list_text, lambdas_text, check_path;

  app.add_option("--check", check_path,
                 "re-verify the row invariants of an emitted CSV");

  auto add_common = [&](CLI::App* sub, bool needs_measure) {
    if (needs_measure) {
      sub->add_option("--measure", cfg.measure_path, "measure JSON file")
          ->required();
    }
    sub->add_option("--bits", bits_val, "working mantissa bits")
        ->envname("GAPDENSE_BITS");
    sub->add_option("--out", cfg.out_dir, "artifact directory");
  };

  auto* orthopoly =
      app.add_subcommand("orthopoly", "orthonormal system table");
  add_common(orthopoly, true);
  orthopoly->add_option("--degree", cfg.degree, "top degree N")->required();

  auto* gapspan =
      app.add_subcommand("gapspan", "projection onto span{x^j..x^N}");
  add_common(gapspan, true);
  gapspan->add_option("--f", cfg.f_expr, "target function expression")
      ->required();
  gapspan->add_option("--j", cfg.j, "lowest retained exponent")->required();
  gapspan->add_option("--N", n_list_text, "top degrees, e.g. 5,10,20")
      ->required();
  gapspan->add_flag("--both-methods", cfg.both_methods,
                    "also run the weighted-q route and report agreement");

  auto* tdense =
      app.add_subcommand("tdense-demo", "q-expansion residuals of t/t_k");
  add_common(tdense, true);
  tdense->add_option("--t", cfg.t_spec, "t-factor 'c,s,x1,x2,...'")
      ->required();
  tdense->add_option("--degree", cfg.degree, "expansion order N")->required();

  auto* counter = app.add_subcommand(
      "counterexample", "atom-on-a-zero-of-t demonstration");
  add_common(counter, false);
  counter->add_option("--w", cfg.w_text, "atom weight at x = 1")->required();

  auto* sobolev =
      app.add_subcommand("sobolev-demo", "penalized fit and gap split table");
  add_common(sobolev, true);
  sobolev->add_option("--g", cfg.g_expr, "target function expression")
      ->required();
  sobolev->add_option("--n", cfg.n, "derivative jet order")->required();
  sobolev->add_option("--N", n_list_text, "top degrees, e.g. 5,10,20,40")
      ->required();

  auto* ratio = app.add_subcommand("ratio-table", "coefficient ratio table");
  add_common(ratio, true);
  ratio->add_option("--k", cfg.k, "coefficient index")->required();
  ratio->add_option("--n", n_list_text, "degrees, e.g. 5..30")->required();

  auto* muntz = app.add_subcommand("muntz", "Muntz condition partial sums");
  add_common(muntz, false);
  muntz->add_option("--lambdas", lambdas_text, "exponents, e.g. 1,2,3")
      ->required();
  muntz->add_option("--J", cfg.muntz_j, "number of partial sums");

  CLI11_PARSE(app, argc, argv);

  if (!check_path.empty()) {
    cfg.command = "check";
    cfg.check_path = check_path;
    return gapdense::run_and_emit(cfg);
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub->count("--bits") > 0) cfg.bits = bits_val;
  try {
    if (!n_list_text.empty()) {
      cfg.n_list = gapdense::parse_degree_list(n_list_text);
    }
    std::string cur;
    for (char ch : lambdas_text + ",") {
      if (ch == ',') {
        if (!cur.empty()) cfg.lambdas.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return gapdense::run_and_emit(cfg);
}
