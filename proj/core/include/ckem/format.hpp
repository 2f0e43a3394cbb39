#pragma once

#include <string>

namespace ckem {

// Shortest decimal text that reads back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double x);

}  // namespace ckem
