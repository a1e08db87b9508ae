#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/types.hpp"
#include "cgc/vocab.hpp"

namespace cgc {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;  // mean of the two middle values for even counts
};

Summary summarize(std::vector<double> values);

struct RankPopulation {
  std::vector<std::size_t> ranks;             // one per question token, OOV = V+1
  std::map<std::size_t, std::size_t> buckets;  // bucket index (rank−1)/width -> count
  Summary summary;
};

struct RankHistogram {
  std::size_t bucket_width = 100;
  RankPopulation all, generated, copied;
};

// Every question token gets its vocabulary rank and is split by copy label.
RankHistogram rank_distributions(std::span<const LabeledExample> corpus, const Vocabulary& vocab,
                                 std::size_t bucket_width = 100);

struct TreePath {
  std::size_t distance = 0;
  std::vector<std::string> labels;  // dep of the child token on each traversed edge
};

// BFS over the undirected dependency tree to the nearest token inside the span.
// Ties between equally near span tokens go to the first one reached.
TreePath shortest_tree_path(const AnnotatedExample& ex, std::size_t from, const AnswerSpan& span);

// Minimal absolute index difference to any span token.
std::size_t sequence_distance(std::size_t from, const AnswerSpan& span);

struct DepPathStats {
  std::vector<std::size_t> tree_distances;      // per clue token outside the answer span
  std::vector<std::size_t> sequence_distances;  // same order
  std::map<std::size_t, std::size_t> tree_histogram, sequence_histogram;
  std::map<std::string, std::size_t> label_counts;
  Summary tree, sequence;

  // Most frequent labels, ties alphabetical.
  std::vector<std::pair<std::string, std::size_t>> top_labels(std::size_t k) const;
};

DepPathStats dep_path_stats(std::span<const LabeledExample> corpus);

nlohmann::json stats_summary_json(const RankHistogram& ranks, const DepPathStats& deps);
// CSV rows "population,bucket,count" for the rank populations and the two distance histograms.
std::string stats_csv(const RankHistogram& ranks, const DepPathStats& deps);

}  // namespace cgc
