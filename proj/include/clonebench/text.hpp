#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace clonebench {

/// Returns `input` with every invalid UTF-8 sequence replaced by U+FFFD.
/// `replaced` is set when at least one substitution happened.
std::string sanitize_utf8(std::string_view input, bool* replaced = nullptr);

std::string to_lower_ascii(std::string_view text);
std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

/// Splits one RFC 4180 record. Returns false on an unterminated quote.
bool split_csv_record(std::string_view line, std::vector<std::string>& fields);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_escape(std::string_view field);

/// Fixed-point formatting with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Value rounded half away from zero to `decimals` digits.
double round_to(double value, int decimals);

}  // namespace clonebench
