#include "hcps/io.hpp"

#include <cstdio>

namespace hcps {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hcps
