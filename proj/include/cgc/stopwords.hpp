#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <string>

namespace cgc {

// Pinned English stopword list (the 179-entry NLTK English list).
inline constexpr const char* kStopwordListVersion = "nltk-english-179";
inline constexpr std::size_t kStopwordCount = 179;

const std::unordered_set<std::string>& stopword_set();

// FNV-1a over the list entries joined by '\n' in shipped order; pins the list
// content so labels are reproducible.
std::uint64_t stopword_list_hash();

// True for list members (after lowercasing) and for tokens with no
// alphanumeric character (punctuation), which are never clue or copy words.
bool is_stopword(std::string_view word);

}  // namespace cgc
