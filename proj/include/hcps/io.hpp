#pragma once

#include <string>

namespace hcps {

// Fixed 17-significant-digit rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace hcps
