#include "cosq/cli/commands.hpp"

#include "cosq/cli/sampling.hpp"
#include "cosq/cli/table1.hpp"
#include "cosq/errors.hpp"
#include "cosq/inversion.hpp"
#include "cosq/reference_oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

namespace cosq::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct QuantileRow {
  QuantileResult result;
  std::string status;
};

void write_quantile_rows(const RunConfig& cfg, const std::vector<QuantileRow>& rows, std::ostream& out) {
  if (cfg.format == OutputFormat::Json) {
    Json doc;
    doc["command"] = "quantile";
    doc["distribution"] = cfg.dist;
    auto& list = doc["rows"] = Json::array();
    for (const auto& row : rows) {
      const auto& r = row.result;
      Json j;
      j["p"] = r.p;
      j["y"] = r.y;
      j["eps_used"] = r.eps_used;
      j["h_min"] = r.h_min;
      j["bound"] = json_number(r.bound);
      j["refinements"] = r.refinements;
      j["N"] = r.cos ? r.cos->terms() : 0;
      j["b_minus_a"] = r.cos ? r.cos->width() : 0.0;
      j["status"] = row.status;
      list.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "p,y,eps_used,h_min,bound,refinements,N,b_minus_a,status\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << num(r.p) << ',' << num(r.y) << ',' << num(r.eps_used) << ',' << num(r.h_min) << ',' << num(r.bound) << ','
        << r.refinements << ',' << (r.cos ? r.cos->terms() : 0) << ',' << num(r.cos ? r.cos->width() : 0.0) << ','
        << row.status << '\n';
  }
}

}  // namespace

CharacteristicFunctionSpec RunConfig::make_spec() const {
  if (dist == "normal") return CharacteristicFunctionSpec::normal(mean, sd);
  if (dist == "ts") return CharacteristicFunctionSpec::tempered_stable(c, d, kappa);
  if (dist == "nig") return CharacteristicFunctionSpec::nig(gamma, theta, nu);
  throw std::invalid_argument("unknown distribution '" + dist + "' (expected normal, ts or nig)");
}

int cmd_quantile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = cfg.make_spec();
  cfg.tolerance.validate();
  if (cfg.ps.empty()) throw std::invalid_argument("quantile: at least one --p is required");
  for (double p : cfg.ps) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: every p must lie in (0, 1)");
  }
  const double delta = cfg.tolerance.delta;
  const bool check_delta = !cfg.no_refine || cfg.delta_given;

  std::vector<QuantileRow> rows;
  int status = kSuccess;
  std::shared_ptr<const CosApproximation> fixed_build;
  if (cfg.no_refine) fixed_build = std::make_shared<const CosApproximation>(build_cos(spec, cfg.tolerance));

  for (double p : cfg.ps) {
    QuantileRow row;
    try {
      row.result = cfg.no_refine ? quantile_on_build(fixed_build, p)
                                 : quantile_with_tolerance(spec, p, delta, cfg.tolerance);
      row.status = (!check_delta || row.result.bound <= delta) ? "ok" : "exceeds-delta";
    } catch (const RefinementError& e) {
      row.result = e.last();
      row.status = "refinement-exhausted";
      err << "warning: " << e.what() << '\n';
    }
    if (row.status != "ok") status = kToleranceFailure;
    if (!row.result.monotone) {
      err << "warning: H_COS is not monotone for p = " << p << "; increase N\n";
    }
    rows.push_back(std::move(row));
  }
  write_quantile_rows(cfg, rows, out);
  return status;
}

int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Table1Options options;
  if (cfg.full_reference) options.reference.terms = 10'000'000;
  const auto rows = table1_rows(options);
  if (cfg.format == OutputFormat::Json) {
    write_table1_json(out, rows);
  } else {
    write_table1_csv(out, rows);
  }
  const bool any_error = std::any_of(rows.begin(), rows.end(), [](const Table1Row& r) { return r.error.has_value(); });
  return any_error ? kNonConvergence : kSuccess;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = cfg.make_spec();
  const SampleSet set = sample(spec, cfg.count, cfg.seed, cfg.tolerance.delta, cfg.tolerance);
  if (cfg.format == OutputFormat::Json) {
    Json doc;
    doc["command"] = "sample";
    doc["distribution"] = cfg.dist;
    doc["seed"] = cfg.seed;
    doc["eps_used"] = set.eps_used;
    doc["N"] = set.terms;
    doc["refinements"] = set.refinements;
    doc["resampled"] = set.resampled;
    doc["max_bound"] = json_number(set.max_bound);
    doc["certified"] = set.certified;
    doc["values"] = set.values;
    out << doc.dump(2) << '\n';
  } else {
    out << "index,u,x\n";
    for (std::size_t i = 0; i < set.values.size(); ++i) {
      out << i << ',' << num(set.uniforms[i]) << ',' << num(set.values[i]) << '\n';
    }
  }
  err << "sample: eps=" << num(set.eps_used) << " N=" << set.terms << " refinements=" << set.refinements
      << " resampled=" << set.resampled << " max_bound=" << num(set.max_bound) << '\n';
  if (!set.monotone) err << "warning: H_COS is not monotone; increase N\n";
  return set.certified ? kSuccess : kToleranceFailure;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = cfg.make_spec();
  std::shared_ptr<const CosApproximation> cos;
  if (cfg.high_precision) {
    HighPrecisionOptions options;
    if (cfg.full_reference) options.terms = 10'000'000;
    cos = high_precision_build(spec, options);
  } else {
    cos = std::make_shared<const CosApproximation>(build_cos(spec, cfg.tolerance));
  }
  if (cfg.points < 1) throw std::invalid_argument("validate: --points must be positive");

  struct Point {
    double y;
    double cos_cdf;
    double reference;
    std::string error;
  };
  std::vector<Point> points;
  double max_diff = 0.0;
  bool oracle_failed = false;
  for (int i = 1; i <= cfg.points; ++i) {
    Point pt{cos->a() + cos->width() * i / (cfg.points + 1), 0.0, 0.0, {}};
    pt.cos_cdf = cos->cdf(pt.y);
    try {
      pt.reference = gil_pelaez_cdf(spec, pt.y).value;
      max_diff = std::max(max_diff, std::abs(pt.cos_cdf - pt.reference));
    } catch (const ConvergenceError& e) {
      pt.error = e.what();
      oracle_failed = true;
      err << "warning: oracle failed at y = " << num(pt.y) << ": " << e.what() << '\n';
    }
    points.push_back(std::move(pt));
  }
  const bool pass = !oracle_failed && max_diff <= cos->eps();

  if (cfg.format == OutputFormat::Json) {
    Json doc;
    doc["command"] = "validate";
    doc["distribution"] = cfg.dist;
    doc["eps"] = cos->eps();
    doc["N"] = cos->terms();
    doc["max_discrepancy"] = max_diff;
    doc["pass"] = pass;
    auto& list = doc["points"] = Json::array();
    for (const auto& pt : points) {
      Json j;
      j["y"] = pt.y;
      j["cos_cdf"] = pt.cos_cdf;
      if (pt.error.empty()) {
        j["gil_pelaez_cdf"] = pt.reference;
        j["abs_diff"] = std::abs(pt.cos_cdf - pt.reference);
      } else {
        j["error"] = pt.error;
      }
      list.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "y,cos_cdf,gil_pelaez_cdf,abs_diff\n";
    for (const auto& pt : points) {
      out << num(pt.y) << ',' << num(pt.cos_cdf) << ',';
      if (pt.error.empty()) {
        out << num(pt.reference) << ',' << num(std::abs(pt.cos_cdf - pt.reference)) << '\n';
      } else {
        out << ",\n";
      }
    }
  }
  err << "validate: max discrepancy " << num(max_diff) << " vs eps " << num(cos->eps()) << ": "
      << (pass ? "pass" : "fail") << '\n';
  if (oracle_failed) return kNonConvergence;
  return pass ? kSuccess : kToleranceFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "csv";
  std::optional<std::size_t> terms;

  CLI::App app{"Quantiles, CDFs and densities from characteristic functions with certified error bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--dist", cfg.dist, "Distribution: normal, ts or nig")
      ->check(CLI::IsMember({"normal", "ts", "nig"}));
  app.add_option("--mean", cfg.mean, "Normal mean");
  app.add_option("--sd", cfg.sd, "Normal standard deviation");
  app.add_option("--c", cfg.c, "TS parameter c > 0");
  app.add_option("--d", cfg.d, "TS parameter d >= 0");
  app.add_option("--kappa", cfg.kappa, "TS parameter kappa in (0,1)");
  app.add_option("--gamma", cfg.gamma, "NIG parameter gamma > 0");
  app.add_option("--theta", cfg.theta, "NIG parameter theta in (-gamma, gamma)");
  app.add_option("--nu", cfg.nu, "NIG parameter nu > 0");
  app.add_option("--eps", cfg.tolerance.eps, "CDF tolerance (initial value when refining)");
  auto* delta_opt = app.add_option("--delta", cfg.tolerance.delta, "Quantile tolerance");
  app.add_option("--n", cfg.tolerance.moment_order, "Even moment order for the truncation range");
  app.add_option("--s", cfg.tolerance.smoothness, "Odd smoothness order for the term count");
  app.add_option("--N", terms, "Fix the number of cosine terms");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", cfg.output, "Output file (default: standard output)");

  auto* quantile = app.add_subcommand("quantile", "Quantiles with certified error bounds");
  quantile->add_option("--p", cfg.ps, "Probabilities")->delimiter(',');
  quantile->add_flag("--no-refine", cfg.no_refine, "Keep eps fixed instead of refining to delta");

  app.add_subcommand("table1", "Quantile accuracy table for TS, N(0,1) and NIG")
      ->add_flag("--full-reference", cfg.full_reference, "Reference builds with N = 1e7 (slow)");

  auto* sample_cmd = app.add_subcommand("sample", "Inverse-transform samples");
  sample_cmd->add_option("--count", cfg.count, "Number of draws")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", cfg.seed, "64-bit seed");

  auto* validate = app.add_subcommand("validate", "Compare the COS CDF with Gil-Pelaez");
  validate->add_option("--points", cfg.points, "Grid points");
  validate->add_flag("--high-precision", cfg.high_precision, "Validate the eps = 1e-9 reference build");
  validate->add_flag("--full-reference", cfg.full_reference, "Reference build with N = 1e7 (slow)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  }
  cfg.delta_given = delta_opt->count() > 0;
  cfg.tolerance.terms_override = terms;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      err << "error: cannot open " << cfg.output << '\n';
      return kUsageError;
    }
    sink = &file;
  }

  try {
    if (quantile->parsed()) return cmd_quantile(cfg, *sink, err);
    if (sample_cmd->parsed()) return cmd_sample(cfg, *sink, err);
    if (validate->parsed()) return cmd_validate(cfg, *sink, err);
    return cmd_table1(cfg, *sink, err);
  } catch (const RefinementError& e) {
    err << "error: " << e.what() << '\n';
    return kToleranceFailure;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DegenerateRangeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace cosq::cli
