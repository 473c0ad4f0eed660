#pragma once

#include <string>
#include <string_view>

namespace admfreq {

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

// Strict parse of the whole field; throws InputError on junk.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace admfreq
