#pragma once

#include <string>
#include <string_view>

namespace logperiodic {

// Day offsets count days since 1970-01-01 00:00 UTC.

/// Converts YYYY-MM-DD to a whole-day offset. Throws Error(Format) on bad input.
double parse_iso_date(std::string_view text);

/// Calendar date of the day containing `day_offset` (floored), as YYYY-MM-DD.
std::string format_iso_date(double day_offset);

/// Accepts either an ISO date or a plain numeric day offset.
double parse_day(std::string_view text);

}  // namespace logperiodic
