#include "cgc/stats.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cgc/errors.hpp"

namespace cgc {

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

namespace {

void finish(RankPopulation& p, std::size_t width) {
  std::vector<double> v;
  for (auto r : p.ranks) {
    ++p.buckets[(r - 1) / width];
    v.push_back(static_cast<double>(r));
  }
  p.summary = summarize(std::move(v));
}

template <typename T>
std::vector<double> as_doubles(const std::vector<T>& xs) {
  return std::vector<double>(xs.begin(), xs.end());
}

}  // namespace

RankHistogram rank_distributions(std::span<const LabeledExample> corpus, const Vocabulary& vocab,
                                 std::size_t bucket_width) {
  if (bucket_width == 0) throw ConfigError("bucket width must be positive");
  RankHistogram h;
  h.bucket_width = bucket_width;
  for (const auto& ex : corpus) {
    for (std::size_t t = 0; t < ex.base.question.size(); ++t) {
      const auto r = vocab.rank(ex.base.question[t]).value_or(vocab.size() + 1);
      h.all.ranks.push_back(r);
      (ex.question_copy_label.at(t) ? h.copied : h.generated).ranks.push_back(r);
    }
  }
  finish(h.all, bucket_width);
  finish(h.generated, bucket_width);
  finish(h.copied, bucket_width);
  return h;
}

TreePath shortest_tree_path(const AnnotatedExample& ex, std::size_t from, const AnswerSpan& span) {
  const std::size_t n = ex.passage.size();
  if (from >= n) throw IndexError("token " + std::to_string(from) + " outside passage of " + std::to_string(n));
  // undirected adjacency; the edge label is the child's dep
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbor, child)
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = ex.passage[i].head;
    if (h == i) continue;
    adj[i].push_back({h, i});
    adj[h].push_back({i, i});
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, kNone), via(n, kNone);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (span.contains(u)) {
      TreePath p;
      for (auto cur = u; cur != from; cur = parent[cur]) p.labels.push_back(ex.passage[via[cur]].dep);
      std::reverse(p.labels.begin(), p.labels.end());
      p.distance = p.labels.size();
      return p;
    }
    for (auto [v, child] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = u;
      via[v] = child;
      queue.push_back(v);
    }
  }
  throw IngestError("answer span unreachable in the dependency tree of " + ex.id);
}

std::size_t sequence_distance(std::size_t from, const AnswerSpan& span) {
  if (span.contains(from)) return 0;
  return from < span.start ? span.start - from : from - span.end;
}

std::vector<std::pair<std::string, std::size_t>> DepPathStats::top_labels(std::size_t k) const {
  std::vector<std::pair<std::string, std::size_t>> v(label_counts.begin(), label_counts.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (v.size() > k) v.resize(k);
  return v;
}

DepPathStats dep_path_stats(std::span<const LabeledExample> corpus) {
  DepPathStats s;
  for (const auto& ex : corpus) {
    for (std::size_t i = 0; i < ex.base.passage.size(); ++i) {
      if (!ex.passage_clue_label.at(i) || ex.base.answer.contains(i)) continue;
      auto path = shortest_tree_path(ex.base, i, ex.base.answer);
      const auto seq = sequence_distance(i, ex.base.answer);
      s.tree_distances.push_back(path.distance);
      s.sequence_distances.push_back(seq);
      ++s.tree_histogram[path.distance];
      ++s.sequence_histogram[seq];
      for (const auto& l : path.labels) ++s.label_counts[l];
    }
  }
  s.tree = summarize(as_doubles(s.tree_distances));
  s.sequence = summarize(as_doubles(s.sequence_distances));
  return s;
}

nlohmann::json stats_summary_json(const RankHistogram& ranks, const DepPathStats& deps) {
  auto sj = [](const Summary& s) { return nlohmann::json{{"count", s.count}, {"mean", s.mean}, {"median", s.median}}; };
  nlohmann::json top = nlohmann::json::array();
  for (const auto& [label, count] : deps.top_labels(10)) top.push_back({{"label", label}, {"count", count}});
  return {{"ranks",
           {{"bucket_width", ranks.bucket_width},
            {"all", sj(ranks.all.summary)},
            {"generated", sj(ranks.generated.summary)},
            {"copied", sj(ranks.copied.summary)}}},
          {"dependency_paths", {{"tree", sj(deps.tree)}, {"sequence", sj(deps.sequence)}, {"top_labels", top}}}};
}

std::string stats_csv(const RankHistogram& ranks, const DepPathStats& deps) {
  std::ostringstream out;
  out << "population,bucket,count\n";
  auto rows = [&](const char* name, const std::map<std::size_t, std::size_t>& h) {
    for (const auto& [b, c] : h) out << name << ',' << b << ',' << c << '\n';
  };
  rows("rank_all", ranks.all.buckets);
  rows("rank_generated", ranks.generated.buckets);
  rows("rank_copied", ranks.copied.buckets);
  rows("tree_distance", deps.tree_histogram);
  rows("sequence_distance", deps.sequence_histogram);
  return out.str();
}

}  // namespace cgc
