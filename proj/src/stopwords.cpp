#include "cgc/stopwords.hpp"

#include <array>
#include <cctype>

#include "cgc/types.hpp"

namespace cgc {

namespace {

constexpr std::array<const char*, kStopwordCount> kStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they",
    "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "that'll", "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and",
    "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before", "after", "above",
    "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under", "again",
    "further", "then", "once", "here", "there", "when", "where", "why", "how", "all", "any",
    "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
    "don't", "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren",
    "aren't", "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't",
    "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn",
    "mustn't", "needn", "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't",
    "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

}  // namespace

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set(kStopwords.begin(), kStopwords.end());
  return set;
}

std::uint64_t stopword_list_hash() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool first = true;
  for (const char* w : kStopwords) {
    if (!first) {
      h ^= static_cast<unsigned char>('\n');
      h *= 0x100000001b3ULL;
    }
    first = false;
    for (const char* p = w; *p; ++p) {
      h ^= static_cast<unsigned char>(*p);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

bool is_stopword(std::string_view word) {
  bool has_alnum = false;
  for (unsigned char c : word) has_alnum = has_alnum || std::isalnum(c) || c >= 0x80;
  if (!has_alnum) return true;
  return stopword_set().count(normalize(word)) != 0;
}

}  // namespace cgc
