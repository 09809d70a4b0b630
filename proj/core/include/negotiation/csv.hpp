#ifndef NEGOTIATION_CSV_HPP_
#define NEGOTIATION_CSV_HPP_

#include <cmath>
#include <cstdio>
#include <string>

namespace negotiation {

// Fixed numeric formatting so identical runs produce byte-identical files.
inline std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace negotiation

#endif  // NEGOTIATION_CSV_HPP_
