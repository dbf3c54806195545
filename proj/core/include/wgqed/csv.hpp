#pragma once

#include <string>

namespace wgqed::csv {

// Fixed 17-significant-digit scientific notation; round-trips every double.
std::string number(double value);

}  // namespace wgqed::csv
