#include "gapdense/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gapdense/csvio.hpp"
#include "gapdense/errors.hpp"
#include "gapdense/gapspan.hpp"
#include "gapdense/measure.hpp"
#include "gapdense/orthopoly.hpp"
#include "gapdense/sobolev.hpp"
#include "gapdense/weighted.hpp"

namespace gapdense {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

long parse_long(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + " must be an integer, got '" + s +
                      "'");
  }
}

struct Prepared {
  PrecisionContext ctx;
  std::optional<Measure> mu;
  std::string measure_hash;
};

Prepared prepare(const ExperimentConfig& cfg, long default_degree) {
  long bits;
  if (cfg.bits) {
    bits = *cfg.bits;
  } else if (default_degree >= 1) {
    bits = required_bits(default_degree);
  } else {
    bits = 256;
  }
  Prepared p{PrecisionContext::with_bits(bits), std::nullopt, "-"};
  if (!cfg.measure_path.empty()) {
    std::string text = read_file(cfg.measure_path);
    p.mu = Measure::from_json_text(text);
    p.measure_hash = "fnv1a64:" + fnv1a64(text);
  }
  return p;
}

json base_meta(const ExperimentConfig& cfg, const Prepared& p) {
  json meta;
  meta["command"] = cfg.command;
  meta["bits"] = p.ctx.mantissa_bits();
  meta["rel_tol"] = format_real(p.ctx.rel_tol(), p.ctx.mantissa_bits());
  meta["measure_hash"] = p.measure_hash;
  meta["parameters"] = json::object();
  auto now = std::chrono::system_clock::now().time_since_epoch();
  meta["generated_at_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return meta;
}

const Measure& require_measure(const Prepared& p, const char* cmd) {
  if (!p.mu) {
    throw ConfigError(std::string(cmd) + " requires --measure");
  }
  return *p.mu;
}

ExperimentResult run_orthopoly(const ExperimentConfig& cfg) {
  if (cfg.degree < 0) throw ConfigError("orthopoly requires --degree");
  Prepared p = prepare(cfg, std::max<long>(cfg.degree, 1));
  const Measure& mu = require_measure(p, "orthopoly");
  const long bits = p.ctx.mantissa_bits();
  OrthonormalSystem sys = orthonormal_system(mu, cfg.degree, p.ctx);

  CsvTable t;
  t.header = {"n", "a_n", "b_n", "gamma_nn", "p_n(0)", "ratio_k0"};
  for (long n = 0; n <= cfg.degree; ++n) {
    std::vector<std::string> row;
    row.push_back(std::to_string(n));
    row.push_back(n < cfg.degree ? format_real(sys.a(n), bits) : "");
    row.push_back(n >= 1 ? format_real(sys.b(n), bits) : "");
    row.push_back(format_real(sys.poly(n).coefficient(n), bits));
    row.push_back(format_real(sys.poly(n).coefficient(0), bits));
    std::string ratio;
    if (n >= 1) {
      try {
        ratio = format_real(coefficient_ratio(sys, n, 0), bits);
      } catch (const DivisionByNegligible&) {
        ratio = "";
      }
    }
    row.push_back(ratio);
    t.rows.push_back(std::move(row));
  }
  ExperimentResult res;
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["degree"] = cfg.degree;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_gapspan(const ExperimentConfig& cfg) {
  if (cfg.f_expr.empty()) throw ConfigError("gapspan requires --f");
  if (cfg.j < 0) throw ConfigError("gapspan requires --j");
  if (cfg.n_list.empty()) throw ConfigError("gapspan requires --N");
  long n_top = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
  Prepared p = prepare(cfg, std::max<long>(n_top, 1));
  const Measure& mu = require_measure(p, "gapspan");
  const long bits = p.ctx.mantissa_bits();
  Evaluable f = Evaluable::of_expr(DensityExpr::parse(cfg.f_expr));

  CsvTable t;
  t.header = {"j", "N", "residual", "method"};
  if (cfg.both_methods) t.header.push_back("agreement");
  for (long n : cfg.n_list) {
    ApproximationReport a = gap_project_normal(f, cfg.j, n, mu, p.ctx);
    std::vector<std::string> row{std::to_string(cfg.j), std::to_string(n),
                                 format_real(a.residual, bits),
                                 "normal-equations"};
    if (cfg.both_methods) row.push_back("");
    t.rows.push_back(std::move(row));
    if (cfg.both_methods) {
      ApproximationReport b = gap_project_weighted(f, cfg.j, n, mu, p.ctx);
      BigFloat agree(bits);
      for (size_t i = 0; i < a.coeffs.size(); ++i) {
        agree = max(agree, abs(a.coeffs[i] - b.coeffs[i]));
      }
      t.rows.push_back({std::to_string(cfg.j), std::to_string(n),
                        format_real(b.residual, bits), "weighted-q",
                        format_real(agree, bits)});
    }
  }
  ExperimentResult res;
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["f"] = cfg.f_expr;
  meta["parameters"]["j"] = cfg.j;
  meta["parameters"]["N"] = cfg.n_list;
  meta["parameters"]["both_methods"] = cfg.both_methods;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_tdense(const ExperimentConfig& cfg) {
  if (cfg.t_spec.empty()) throw ConfigError("tdense-demo requires --t");
  if (cfg.degree < 0) throw ConfigError("tdense-demo requires --degree");
  TFactor t = TFactor::parse(cfg.t_spec);
  Prepared p = prepare(cfg, std::max<long>(cfg.degree + t.degree(), 1));
  const Measure& mu = require_measure(p, "tdense-demo");
  const long bits = p.ctx.mantissa_bits();

  WeightedSystem ws = build_weighted_system(mu, t, cfg.degree, p.ctx);
  CsvTable table;
  table.header = {"k", "N", "residual"};
  for (long k = 1; k <= t.degree(); ++k) {
    Polynomial target = t_over_tk(t, k, bits);
    QExpansion exp =
        expand_in_q(Evaluable::of_polynomial(target), ws, cfg.degree, p.ctx);
    for (long n = 0; n <= cfg.degree; ++n) {
      table.rows.push_back(
          {std::to_string(k), std::to_string(n),
           format_real(exp.residuals[static_cast<size_t>(n)], bits)});
    }
  }
  ExperimentResult res;
  res.csv_text = table.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["t"] = cfg.t_spec;
  meta["parameters"]["degree"] = cfg.degree;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_counterexample(const ExperimentConfig& cfg) {
  if (cfg.w_text.empty()) throw ConfigError("counterexample requires --w");
  Prepared p = prepare(cfg, -1);
  const long bits = p.ctx.mantissa_bits();
  CounterexampleResult r = counterexample_demo(cfg.w_text, p.ctx);

  // The squared H_1 distance reproduces the atom weight bit-exactly, so the
  // input literal is the faithful rendering.
  std::string d1_sq = r.d1_squared == r.atom_weight
                          ? cfg.w_text
                          : format_real(r.d1_squared, bits);
  ExperimentResult res;
  res.stdout_text = "d_t=" + r.d_t.exact_decimal() + " d1_sq=" + d1_sq + "\n";
  CsvTable t;
  t.header = {"w", "d_t", "d1_sq"};
  t.rows.push_back({cfg.w_text, r.d_t.exact_decimal(),
                    format_real(r.d1_squared, bits)});
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["w"] = cfg.w_text;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_sobolev(const ExperimentConfig& cfg) {
  if (cfg.g_expr.empty()) throw ConfigError("sobolev-demo requires --g");
  if (cfg.n < 0) throw ConfigError("sobolev-demo requires --n");
  if (cfg.n_list.empty()) throw ConfigError("sobolev-demo requires --N");
  long n_top = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
  Prepared p = prepare(cfg, std::max<long>(n_top, 1));
  const Measure& mu = require_measure(p, "sobolev-demo");
  const long bits = p.ctx.mantissa_bits();
  Evaluable g = Evaluable::of_expr(DensityExpr::parse(cfg.g_expr));

  std::vector<DemoRow> rows = maindense2_demo(g, cfg.n, cfg.n_list, mu, p.ctx);
  CsvTable t;
  t.header = {"N", "objective", "q_norm", "gap_residual", "p_at_0"};
  for (const auto& row : rows) {
    t.rows.push_back({std::to_string(row.top_degree),
                      format_real(row.objective, bits),
                      format_real(row.q_norm, bits),
                      format_real(row.gap_residual, bits),
                      format_real(row.p_at_zero, bits)});
  }
  ExperimentResult res;
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["g"] = cfg.g_expr;
  meta["parameters"]["n"] = cfg.n;
  meta["parameters"]["N"] = cfg.n_list;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_ratio_table(const ExperimentConfig& cfg) {
  if (cfg.k < 0) throw ConfigError("ratio-table requires --k");
  if (cfg.n_list.empty()) throw ConfigError("ratio-table requires --n");
  long n_top = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
  Prepared p = prepare(cfg, std::max<long>(n_top, 1));
  const Measure& mu = require_measure(p, "ratio-table");
  const long bits = p.ctx.mantissa_bits();

  RatioTable table = ratio_table(mu, cfg.k, cfg.n_list, p.ctx);
  ExperimentResult res;
  if (table.support_gap_warning) {
    res.warnings.push_back(
        "support stays away from 0; the ratio table need not decay");
  }
  CsvTable t;
  t.header = {"n", "k", "ratio"};
  for (const auto& [n, ratio] : table.rows) {
    t.rows.push_back({std::to_string(n), std::to_string(cfg.k),
                      format_real(ratio, bits)});
  }
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["k"] = cfg.k;
  meta["parameters"]["n"] = cfg.n_list;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_muntz(const ExperimentConfig& cfg) {
  if (cfg.lambdas.empty()) throw ConfigError("muntz requires --lambdas");
  Prepared p = prepare(cfg, -1);
  const long bits = p.ctx.mantissa_bits();
  std::vector<BigFloat> lambdas;
  lambdas.reserve(cfg.lambdas.size());
  for (const auto& s : cfg.lambdas) {
    lambdas.push_back(BigFloat::of_string(s, bits));
  }
  long j_count = cfg.muntz_j >= 1 ? cfg.muntz_j
                                  : static_cast<long>(lambdas.size());
  std::vector<BigFloat> sums = muntz_partial_sums(lambdas, j_count);

  CsvTable t;
  t.header = {"i", "lambda_i", "partial_sum"};
  for (size_t i = 0; i < sums.size(); ++i) {
    t.rows.push_back({std::to_string(i + 1), cfg.lambdas[i],
                      format_real(sums[i], bits)});
  }
  ExperimentResult res;
  res.csv_text = t.to_text();
  json meta = base_meta(cfg, p);
  meta["parameters"]["lambdas"] = cfg.lambdas;
  meta["parameters"]["J"] = j_count;
  res.meta_text = meta.dump(2) + "\n";
  return res;
}

ExperimentResult run_check(const ExperimentConfig& cfg) {
  if (cfg.check_path.empty()) throw ConfigError("check requires a CSV path");
  CsvTable t = CsvTable::parse(read_file(cfg.check_path));
  CheckReport rep = check_csv(t);
  ExperimentResult res;
  if (rep.ok) {
    res.stdout_text = "ok: " + std::to_string(t.rows.size()) + " rows\n";
  } else {
    res.exit_code = 2;
    for (const auto& prob : rep.problems) res.error_text += prob + "\n";
  }
  return res;
}

}  // namespace

std::vector<long> parse_degree_list(const std::string& text) {
  std::vector<long> out;
  auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    long lo = parse_long(text.substr(0, range_pos), "range start");
    long hi = parse_long(text.substr(range_pos + 2), "range end");
    if (hi < lo) throw ConfigError("empty range '" + text + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(parse_long(cur, "degree"));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (out.empty()) throw ConfigError("empty degree list");
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  try {
    if (cfg.command == "orthopoly") return run_orthopoly(cfg);
    if (cfg.command == "gapspan") return run_gapspan(cfg);
    if (cfg.command == "tdense-demo") return run_tdense(cfg);
    if (cfg.command == "counterexample") return run_counterexample(cfg);
    if (cfg.command == "sobolev-demo") return run_sobolev(cfg);
    if (cfg.command == "ratio-table") return run_ratio_table(cfg);
    if (cfg.command == "muntz") return run_muntz(cfg);
    if (cfg.command == "check") return run_check(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const PrecisionExhausted& e) {
    return ExperimentResult{3, "", "", "", std::string(e.what()) + "\n", {}};
  } catch (const AtomAtZeroOfT& e) {
    return ExperimentResult{4, "", "", "", std::string(e.what()) + "\n", {}};
  } catch (const ConfigError& e) {
    return ExperimentResult{2, "", "", "", std::string(e.what()) + "\n", {}};
  } catch (const SyntaxError& e) {
    return ExperimentResult{2, "", "", "", std::string(e.what()) + "\n", {}};
  } catch (const DomainError& e) {
    return ExperimentResult{2, "", "", "", std::string(e.what()) + "\n", {}};
  } catch (const std::exception& e) {
    return ExperimentResult{1, "", "", "", std::string(e.what()) + "\n", {}};
  }
}

int run_and_emit(const ExperimentConfig& cfg) {
  ExperimentResult res = run_experiment(cfg);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (!res.error_text.empty()) std::cerr << res.error_text;
  if (!res.stdout_text.empty()) std::cout << res.stdout_text;
  if (res.exit_code != 0) return res.exit_code;

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(std::filesystem::path(cfg.out_dir) / "result.csv",
                      std::ios::binary);
    csv << res.csv_text;
    std::ofstream meta(std::filesystem::path(cfg.out_dir) / "meta.json",
                       std::ios::binary);
    meta << res.meta_text;
  } else if (res.stdout_text.empty()) {
    std::cout << res.csv_text;
  }
  return 0;
}

}  // namespace gapdense
