#pragma once

#include <set>
#include <string>
#include <string_view>

namespace clonebench {

/// Language-agnostic token set used by the lexical baseline: identifiers and
/// keywords (lower-cased), numbers, and operator/punctuation tokens.
/// `//`, `/* */` and `#` comments are stripped; string and character
/// literals are skipped entirely.
std::set<std::string> lexical_tokens(std::string_view source);

/// Jaccard coefficient |A ∩ B| / |A ∪ B| of the two token sets. Two texts
/// without any tokens are considered identical (1.0).
double lexical_similarity(std::string_view a, std::string_view b);

}  // namespace clonebench
