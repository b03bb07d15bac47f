#include "hpca/date.h"

#include <cctype>
#include <cstdio>

#include "hpca/error.h"

namespace hpca {

namespace {

bool parse_digits(std::string_view text, int& out) {
  out = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = out * 10 + (c - '0');
  }
  return !text.empty();
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  const bool shape_ok = text.size() == 10 && text[4] == '-' && text[7] == '-';
  if (!shape_ok || !parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d)) {
    throw ValidationError("returns-core",
                          "unparseable date '" + std::string(text) +
                              "' (expected YYYY-MM-DD)");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw ValidationError("returns-core",
                          "invalid calendar date '" + std::string(text) + "'");
  }
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

}  // namespace hpca
