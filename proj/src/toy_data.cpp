#include "cgc/toy_data.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <string>

#include "cgc/errors.hpp"
#include "cgc/rng.hpp"

namespace cgc {

namespace {

struct Verb {
  const char* third;
  const char* base;
  const char* participle;
};

constexpr std::array kTimes = {"Today", "Yesterday", "Monday", "Tuesday", "Friday", "Tonight", "Sunday", "Recently"};
constexpr std::array kFirst = {"Barack", "Angela", "Nelson", "Marie", "Ada", "Alan", "Grace", "Niels",
                               "Rosa", "Isaac", "Frida", "Pablo", "Indira", "Kofi", "Golda", "Yuri"};
constexpr std::array kLast = {"Obama", "Merkel", "Mandela", "Curie", "Lovelace", "Turing", "Hopper", "Bohr",
                              "Parks", "Newton", "Kahlo", "Neruda", "Gandhi", "Annan", "Meir", "Gagarin"};
constexpr std::array kVerbs = {Verb{"gives", "give", "given"}, Verb{"delivers", "deliver", "delivered"},
                               Verb{"presents", "present", "presented"}, Verb{"makes", "make", "made"}};
constexpr std::array kNouns = {"speech", "lecture", "talk", "address", "sermon", "briefing", "toast", "statement"};
constexpr std::array kTopics = {"democracy", "science", "history", "economics", "music", "poetry",
                                "medicine", "astronomy", "justice", "energy", "farming", "trade"};
constexpr std::array kPlaceA = {"White", "Grand", "Royal", "Silver", "Golden", "Crystal", "Maple", "Ocean", "Granite", "Cedar"};
constexpr std::array kPlaceB = {"House", "Hall", "Palace", "Theater", "Arena", "Library", "Museum", "Tower"};

template <typename Arr>
auto pick(const Arr& a, Rng& rng) {
  return a[std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng)];
}

AnnotatedToken token(std::string text, const char* pos, const char* ner, const char* dep, std::size_t head) {
  AnnotatedToken t;
  bool lower = true;
  for (unsigned char c : text) lower = lower && !std::isupper(c);
  t.is_lower = lower;
  t.is_digit = false;
  t.like_num = false;
  t.text = std::move(text);
  t.pos = pos;
  t.ner = ner;
  t.dep = dep;
  t.head = head;
  return t;
}

}  // namespace

std::vector<AnnotatedExample> make_toy_data(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("make-toy-data needs n >= 1");
  Rng rng = substream(seed, "toy-data");
  std::vector<AnnotatedExample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string time = pick(kTimes, rng);
    const std::string first = pick(kFirst, rng);
    const std::string last = pick(kLast, rng);
    const Verb verb = pick(kVerbs, rng);
    const std::string noun = pick(kNouns, rng);
    const std::string topic = pick(kTopics, rng);
    const std::string place_a = pick(kPlaceA, rng);
    const std::string place_b = pick(kPlaceB, rng);
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);

    AnnotatedExample ex;
    char id[32];
    std::snprintf(id, sizeof id, "toy-%05zu", k);
    ex.id = id;
    ex.passage = {
        token(time, "NN", "DATE", "npadvmod", 4),  // 0
        token(",", "PUNCT", "", "punct", 4),       // 1
        token(first, "NNP", "PERSON", "compound", 3),
        token(last, "NNP", "PERSON", "nsubj", 4),
        token(verb.third, "VBZ", "", "ROOT", 4),   // 4
        token("a", "DT", "", "det", 6),
        token(noun, "NN", "", "dobj", 4),          // 6
        token("on", "IN", "", "prep", 6),
        token(topic, "NN", "", "pobj", 7),         // 8
        token("in", "IN", "", "prep", 4),
        token("the", "DT", "", "det", 12),         // 10
        token(place_a, "NNP", "FAC", "compound", 12),
        token(place_b, "NNP", "FAC", "pobj", 9),   // 12
        token(".", "PUNCT", "", "punct", 4),
    };
    switch (kind) {
      case 0:  // who
        ex.answer = {2, 3};
        ex.question = {"the", noun, "in", "the", place_a, place_b, "is", verb.participle, "by", "whom", "?"};
        break;
      case 1:  // where
        ex.answer = {10, 12};
        ex.question = {"where", "does", first, last, verb.base, "a", noun, "on", topic, "?"};
        break;
      case 2:  // what
        ex.answer = {8, 8};
        ex.question = {"what", "is", "the", noun, "of", first, last, "in", "the", place_a, place_b, "about", "?"};
        break;
      default:  // when
        ex.answer = {0, 0};
        ex.question = {"when", "does", first, last, verb.base, "a", noun, "in", "the", place_a, place_b, "?"};
        break;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace cgc
