#include "cosq/cli/table1.hpp"

#include "cosq/inversion.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <string>

namespace cosq::cli {

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

struct Block {
  CharacteristicFunctionSpec spec;
  double eps;
  std::optional<std::size_t> terms_override;
  std::vector<double> ps;
};

std::vector<Block> presets() {
  const auto ts = CharacteristicFunctionSpec::tempered_stable(1.0, 1.0, 0.75);
  const auto normal = CharacteristicFunctionSpec::normal(0.0, 1.0);
  const auto nig = CharacteristicFunctionSpec::nig(1.0, 0.0, 1.0);
  return {
      {ts, 0.005, 50, {0.01, 0.1, 0.25, 0.75, 0.9, 0.99}},
      {normal, 0.005, std::nullopt, {0.75, 0.9, 0.99}},
      {nig, 0.005, std::nullopt, {0.75, 0.9, 0.99}},
      {nig, 0.0005, std::nullopt, {0.99}},
  };
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<Table1Row> table1_rows(const Table1Options& options) {
  std::vector<Table1Row> rows;
  std::map<std::string, std::shared_ptr<const CosApproximation>> references;
  for (const Block& block : presets()) {
    ToleranceConfig cfg;
    cfg.eps = block.eps;
    cfg.terms_override = block.terms_override;
    const auto cos = std::make_shared<const CosApproximation>(build_cos(block.spec, cfg));
    for (double p : block.ps) {
      Table1Row row;
      row.distribution = block.spec.label();
      row.eps = block.eps;
      row.width = cos->width();
      row.terms = cos->terms();
      row.p = p;
      row.y = bisect_quantile(*cos, p, block.eps);
      const ErrorBound eb = error_bound(*cos, row.y, block.eps);
      row.h_min = eb.h_min;
      row.bound = eb.bound;
      try {
        auto& reference = references[block.spec.label()];
        if (!reference) reference = high_precision_build(block.spec, options.reference);
        row.reference_cdf = gil_pelaez_cdf(block.spec, row.y, options.reference.gil_pelaez_tol).value;
        row.cdf_error = std::abs(cos->cdf(row.y) - row.reference_cdf);
        const auto q = high_precision_reference(*reference, p, options.reference.gil_pelaez_tol);
        row.quantile_error = std::abs(row.y - q.quantile);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
  out << "F,eps,b_minus_a,N,p,y,F_y,abs_H_minus_F,abs_quantile_error,h_min,rhs,status\n";
  for (const auto& r : rows) {
    out << csv_field(r.distribution) << ',' << general(r.eps) << ',' << fixed(r.width, 1) << ',' << r.terms << ','
        << general(r.p) << ',' << fixed(r.y, 5) << ',';
    if (r.error) {
      out << ",,," << fixed(r.h_min, 3) << ',' << fixed(r.bound, 2) << ",error\n";
      continue;
    }
    out << fixed(r.reference_cdf, 5) << ',' << fixed(r.cdf_error, 5) << ',' << fixed(r.quantile_error, 5) << ','
        << fixed(r.h_min, 3) << ',' << fixed(r.bound, 2) << ",ok\n";
  }
}

void write_table1_json(std::ostream& out, const std::vector<Table1Row>& rows) {
  nlohmann::ordered_json doc;
  doc["command"] = "table1";
  auto& list = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["F"] = r.distribution;
    j["eps"] = r.eps;
    j["b_minus_a"] = r.width;
    j["N"] = r.terms;
    j["p"] = r.p;
    j["y"] = r.y;
    if (r.error) {
      j["error"] = *r.error;
    } else {
      j["F_y"] = r.reference_cdf;
      j["abs_H_minus_F"] = r.cdf_error;
      j["abs_quantile_error"] = r.quantile_error;
    }
    j["h_min"] = r.h_min;
    j["rhs"] = r.bound;
    list.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace cosq::cli
