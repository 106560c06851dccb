#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pbergman/analysis.hpp"
#include "pbergman/geometry.hpp"

namespace pbergman {

/// "%.17g", independent of the global locale.
std::string format_double(double x);
/// "re+imi" with both parts at 17 significant digits.
std::string format_complex(complex z);
/// Accepts "a", "a+bi", "a-bi", "bi", "i" and "a,b".
complex parse_complex(std::string_view text);
/// Comma-separated list of numbers.
std::vector<double> parse_list(std::string_view text);

struct SweepRow {
  double p = 0.0;
  complex z;
  double K_p = 0.0;
  double B_p = 0.0;
};

// CSV emitters: a header row naming the columns, then one row per record.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_levi_csv(std::ostream& out, const std::vector<LeviRecord>& rows);
void write_holder_csv(std::ostream& out, const HolderFit& fit);
void write_limit_csv(std::ostream& out, const LimitRecord& record);

}  // namespace pbergman
