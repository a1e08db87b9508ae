#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/types.hpp"

namespace cgc {

enum class QuestionField { Required, Optional };

// JSON-lines dataset record <-> example. Validation covers the field schema,
// the answer span, and the head links (exactly one self-headed root, no cycles).
AnnotatedExample example_from_json(const nlohmann::json& j, QuestionField q = QuestionField::Required);
nlohmann::json example_to_json(const AnnotatedExample& ex);

// Throws IngestError describing the first violated invariant.
void validate_example(const AnnotatedExample& ex, QuestionField q = QuestionField::Required);

// Reads every record; if any fail, throws one IngestError listing each
// offending line number and id.
std::vector<AnnotatedExample> load_corpus(const std::string& path,
                                          QuestionField q = QuestionField::Required);
std::vector<AnnotatedExample> read_corpus(std::istream& in,
                                          QuestionField q = QuestionField::Required);
void write_corpus(std::ostream& out, const std::vector<AnnotatedExample>& corpus);

nlohmann::json labeled_to_json(const LabeledExample& ex);

}  // namespace cgc
