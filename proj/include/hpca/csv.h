#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hpca::csv {

/// Splits one CSV record on commas. Quoting is not supported; the file
/// formats handled here never embed commas in a field.
std::vector<std::string> split(std::string_view line);

std::string trim(std::string_view text);

/// Shortest-enough decimal text: `%.<digits>g`. The default of 17 digits
/// round-trips every double.
std::string format_number(double value, int digits = 17);

/// Parses a finite decimal number; throws ValidationError on failure.
double parse_number(std::string_view text, std::string_view context);

/// Reads all non-comment (`#`-prefixed) non-blank lines of a file.
std::vector<std::string> read_lines(const std::string& path);

/// Writes `# key=value` style header lines, one per entry.
void write_comment_header(std::ostream& out,
                          const std::vector<std::string>& lines);

}  // namespace hpca::csv
