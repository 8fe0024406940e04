#pragma once

#include <string>
#include <string_view>

namespace fvrptw {

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double v);

// Strict parse of the whole token; returns false on any trailing junk.
bool parse_number(std::string_view text, double& out);

}  // namespace fvrptw
