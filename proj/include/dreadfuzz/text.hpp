#pragma once

#include <string>

namespace dreadfuzz::text {

// Shortest decimal string that round-trips to the same double.
// "2.5" not "2.500000", "10" not "10.0". Used by the canonical
// rulebase serializer, so its output must stay byte-stable.
std::string to_minimal_string(double value);

// Fixed two-decimal formatting with ties rounded away from zero,
// e.g. 7.605 -> "7.61". Used by report emitters.
std::string format_fixed2(double value);

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string iso8601_utc_now();

}  // namespace dreadfuzz::text
