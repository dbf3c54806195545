#include "wgqed/csv.hpp"

#include <cstdio>

namespace wgqed::csv {

std::string number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

}  // namespace wgqed::csv
