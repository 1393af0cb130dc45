#pragma once

#include <string>

namespace cvsteer {

// Shortest round-trippable form is not required; 17 significant digits always
// round-trip a double and keep output byte-stable.
std::string format_double(double v);

}  // namespace cvsteer
