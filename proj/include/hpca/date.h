#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace hpca {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws ValidationError on anything else.
Date parse_date(std::string_view text);

std::string format_date(const Date& date);

}  // namespace hpca
