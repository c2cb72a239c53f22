#pragma once

#include <string>

namespace topophase {

// Fixed-point decimal rendering used for all CSV/table output. Golden-file
// tests rely on this being the single formatting path.
std::string format_fixed(double value, int decimals = 6);

// RFC-4180 style quoting; only applied when the field needs it.
std::string csv_field(const std::string& raw);

}  // namespace topophase
