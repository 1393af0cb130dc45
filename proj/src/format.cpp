#include "cvsteer/format.hpp"

#include <cstdio>

namespace cvsteer {

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace cvsteer
