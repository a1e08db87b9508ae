#include "cgc/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cgc/errors.hpp"

namespace cgc {

std::string normalize(std::string_view word) {
  std::string out(word);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

const char* bio_name(BioTag t) { return t == BioTag::B ? "B" : t == BioTag::I ? "I" : "O"; }

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw IngestError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw IngestError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

void validate_example(const AnnotatedExample& ex, QuestionField q) {
  const std::size_t n = ex.passage.size();
  if (n == 0) throw IngestError("empty passage");
  if (ex.answer.start > ex.answer.end || ex.answer.end >= n)
    throw IngestError("answer span [" + std::to_string(ex.answer.start) + ", " +
                      std::to_string(ex.answer.end) + "] out of range for passage of " +
                      std::to_string(n) + " tokens");
  if (q == QuestionField::Required && ex.question.empty()) throw IngestError("empty question");

  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ex.passage[i].head >= n)
      throw IngestError("token " + std::to_string(i) + " has head " +
                        std::to_string(ex.passage[i].head) + " outside the passage");
    if (ex.passage[i].head == i) ++roots;
  }
  if (roots != 1)
    throw IngestError("parse must have exactly one root, found " + std::to_string(roots));
  // Every chain must reach the root within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cur = i;
    std::size_t steps = 0;
    while (ex.passage[cur].head != cur) {
      cur = ex.passage[cur].head;
      if (++steps > n) throw IngestError("head links starting at token " + std::to_string(i) + " form a cycle");
    }
  }
}

AnnotatedExample example_from_json(const nlohmann::json& j, QuestionField q) {
  if (!j.is_object()) throw IngestError("record is not a JSON object");
  AnnotatedExample ex;
  ex.id = field<std::string>(j, "id");
  if (!j.contains("passage_tokens")) throw IngestError("missing field 'passage_tokens'");
  const auto& toks = j.at("passage_tokens");
  if (!toks.is_array()) throw IngestError("field 'passage_tokens' must be an array");
  for (const auto& t : toks) {
    if (!t.is_object()) throw IngestError("passage token is not an object");
    AnnotatedToken tok;
    tok.text = field<std::string>(t, "text");
    tok.pos = field<std::string>(t, "pos");
    tok.ner = field<std::string>(t, "ner");
    tok.dep = field<std::string>(t, "dep");
    const auto head = field<long long>(t, "head");
    if (head < 0) throw IngestError("negative head index");
    tok.head = static_cast<std::size_t>(head);
    tok.is_lower = field<bool>(t, "is_lower");
    tok.is_digit = field<bool>(t, "is_digit");
    tok.like_num = field<bool>(t, "like_num");
    ex.passage.push_back(std::move(tok));
  }
  const auto span = field<std::vector<long long>>(j, "answer_span");
  if (span.size() != 2 || span[0] < 0 || span[1] < 0)
    throw IngestError("field 'answer_span' must be [start, end] with non-negative indices");
  ex.answer = {static_cast<std::size_t>(span[0]), static_cast<std::size_t>(span[1])};
  if (q == QuestionField::Required || j.contains("question_tokens"))
    ex.question = field<std::vector<std::string>>(j, "question_tokens");
  validate_example(ex, q);
  return ex;
}

nlohmann::json example_to_json(const AnnotatedExample& ex) {
  nlohmann::json toks = nlohmann::json::array();
  for (const auto& t : ex.passage) {
    toks.push_back({{"text", t.text},
                    {"pos", t.pos},
                    {"ner", t.ner},
                    {"dep", t.dep},
                    {"head", t.head},
                    {"is_lower", t.is_lower},
                    {"is_digit", t.is_digit},
                    {"like_num", t.like_num}});
  }
  return {{"id", ex.id},
          {"passage_tokens", std::move(toks)},
          {"answer_span", {ex.answer.start, ex.answer.end}},
          {"question_tokens", ex.question}};
}

std::vector<AnnotatedExample> read_corpus(std::istream& in, QuestionField q) {
  std::vector<AnnotatedExample> out;
  std::ostringstream errors;
  std::size_t bad = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id = "?";
    try {
      auto j = nlohmann::json::parse(line);
      if (j.is_object() && j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
      out.push_back(example_from_json(j, q));
    } catch (const nlohmann::json::exception& e) {
      ++bad;
      errors << "\n  line " << lineno << " (id " << id << "): malformed JSON: " << e.what();
    } catch (const IngestError& e) {
      ++bad;
      errors << "\n  line " << lineno << " (id " << id << "): " << e.what();
    }
  }
  if (bad) throw IngestError(std::to_string(bad) + " invalid record(s):" + errors.str());
  return out;
}

std::vector<AnnotatedExample> load_corpus(const std::string& path, QuestionField q) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open dataset " + path);
  return read_corpus(in, q);
}

void write_corpus(std::ostream& out, const std::vector<AnnotatedExample>& corpus) {
  for (const auto& ex : corpus) out << example_to_json(ex).dump() << '\n';
}

nlohmann::json labeled_to_json(const LabeledExample& ex) {
  auto j = example_to_json(ex.base);
  std::vector<std::string> bio;
  for (auto t : ex.answer_bio) bio.emplace_back(bio_name(t));
  j["question_copy_label"] = ex.question_copy_label;
  j["copy_alignment"] = ex.copy_alignment;
  j["question_target_id"] = ex.question_target_id;
  j["passage_clue_label"] = ex.passage_clue_label;
  j["answer_bio"] = bio;
  return j;
}

}  // namespace cgc
