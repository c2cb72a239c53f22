#include "topophase/text.hpp"

#include <cstdio>

namespace topophase {

std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // never print "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string csv_field(const std::string& raw) {
  bool needs_quotes = raw.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace topophase
