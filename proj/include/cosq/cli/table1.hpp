#pragma once

#include "cosq/reference_oracle.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cosq::cli {

/// One row of the quantile accuracy table for the TS, N(0,1) and NIG presets.
struct Table1Row {
  std::string distribution;
  double eps = 0.0;
  double width = 0.0;  // b - a
  std::size_t terms = 0;
  double p = 0.0;
  double y = 0.0;                   // H_Num^{-1}(p)
  double reference_cdf = 0.0;       // F(y)
  double cdf_error = 0.0;           // |H(y) - F(y)|
  double quantile_error = 0.0;      // |H_Num^{-1}(p) - F^{-1}(p)|
  double h_min = 0.0;               // h(y - eps) min h(y + eps)
  double bound = 0.0;               // certified error bound
  std::optional<std::string> error; // set when the reference oracle failed for this row
};

struct Table1Options {
  HighPrecisionOptions reference;
};

std::vector<Table1Row> table1_rows(const Table1Options& options = {});

/// CSV header and rows at the table's printed precision.
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);
void write_table1_json(std::ostream& out, const std::vector<Table1Row>& rows);

}  // namespace cosq::cli
