#include "quootstrap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace quootstrap {

namespace {

std::vector<std::string> tokenize_quotation(const std::string& text) {
  Document doc;
  doc.text = text;
  TokenStream stream = tokenize(doc);
  std::vector<std::string> tokens;
  for (const Token& t : stream.tokens) {
    if (t.kind == TokenKind::quote_open || t.kind == TokenKind::quote_close) continue;
    tokens.push_back(t.surface);
  }
  return tokens;
}

}  // namespace

EvalResult evaluate(const std::vector<std::pair<QuoteKey, SpeakerId>>& retrieved,
                    const GroundTruth& gt, EvalMode mode, bool z_disjunctive) {
  EvalResult result;

  auto neutral = [&](const std::pair<QuoteKey, SpeakerId>& pair) {
    const bool quote_known = gt.relevant_quotes.count(pair.first) > 0;
    const bool speaker_known = gt.relevant_speakers.count(pair.second) > 0;
    return z_disjunctive ? (!quote_known || !speaker_known)
                         : (!quote_known && !speaker_known);
  };
  auto correct = [&](const std::pair<QuoteKey, SpeakerId>& pair) {
    auto it = gt.relevant_pairs.find(pair.first);
    return it != gt.relevant_pairs.end() && it->second == pair.second;
  };

  if (mode == EvalMode::micro) {
    std::size_t hit = 0;
    std::size_t counted = 0;
    for (const auto& pair : retrieved) {
      if (neutral(pair)) continue;
      ++counted;
      if (correct(pair)) ++hit;
    }
    if (counted > 0) result.precision = static_cast<double>(hit) / counted;
    if (!gt.relevant_pairs.empty()) {
      result.recall = static_cast<double>(hit) / gt.relevant_pairs.size();
    }
    return result;
  }

  // Macro: per speaker, restrict the ground truth to their pairs and the
  // retrieved set to pairs attributed to them plus misattributions of
  // their quotations; average the defined cells.
  std::map<SpeakerId, std::set<QuoteKey>> quotes_of;
  for (const auto& [quote, speaker] : gt.relevant_pairs) {
    quotes_of[speaker].insert(quote);
  }
  double precision_sum = 0;
  std::size_t precision_n = 0;
  double recall_sum = 0;
  std::size_t recall_n = 0;
  for (const auto& [speaker, quotes] : quotes_of) {
    SpeakerMetrics metrics;
    metrics.relevant = quotes.size();
    std::size_t hit = 0;
    std::size_t counted = 0;
    for (const auto& pair : retrieved) {
      const bool in_scope = pair.second == speaker || quotes.count(pair.first) > 0;
      if (!in_scope || neutral(pair)) continue;
      ++counted;
      if (correct(pair) && pair.second == speaker) ++hit;
    }
    metrics.retrieved = counted;
    if (counted > 0) {
      metrics.precision = static_cast<double>(hit) / counted;
      precision_sum += *metrics.precision;
      ++precision_n;
    }
    if (!quotes.empty()) {
      metrics.recall = static_cast<double>(hit) / quotes.size();
      recall_sum += *metrics.recall;
      ++recall_n;
    }
    result.per_speaker.emplace(speaker, metrics);
  }
  if (precision_n > 0) result.precision = precision_sum / precision_n;
  if (recall_n > 0) result.recall = recall_sum / recall_n;
  return result;
}

std::vector<GroundTruthRow> load_ground_truth_tsv(const std::string& path,
                                                  std::size_t* skipped) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ground-truth file: " + path);
  std::vector<GroundTruthRow> rows;
  std::size_t bad = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      ++bad;
      continue;
    }
    GroundTruthRow row;
    row.quotation = line.substr(0, tab1);
    row.speaker = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string label = line.substr(tab2 + 1);
    if (row.quotation.empty() || row.speaker.empty() || (label != "0" && label != "1")) {
      ++bad;
      continue;
    }
    row.label = label == "1";
    rows.push_back(std::move(row));
  }
  if (skipped) *skipped = bad;
  return rows;
}

GroundTruth align_ground_truth(const std::vector<GroundTruthRow>& rows,
                               const std::vector<QuotationCluster>& clusters,
                               const std::vector<QuotationSpan>& cluster_spans,
                               int group_len, bool case_insensitive) {
  // Index every member span's runs (and exact short texts) by cluster.
  std::map<std::string, ClusterId> run_index;
  std::map<std::string, ClusterId> text_index;
  auto folded_key = [&](const std::vector<std::string>& tokens, std::size_t begin,
                        std::size_t len) {
    std::string key;
    for (std::size_t i = 0; i < len; ++i) {
      key += fold_token(tokens[begin + i], case_insensitive);
      key.push_back('\x1f');
    }
    return key;
  };
  for (const QuotationCluster& c : clusters) {
    for (std::size_t member : c.members) {
      const auto& tokens = cluster_spans[member].tokens;
      text_index.emplace(folded_key(tokens, 0, tokens.size()), c.id);
      if (group_len > 0 && tokens.size() >= static_cast<std::size_t>(group_len)) {
        const auto glen = static_cast<std::size_t>(group_len);
        for (std::size_t i = 0; i + glen <= tokens.size(); ++i) {
          run_index.emplace(folded_key(tokens, i, glen), c.id);
        }
      }
    }
  }

  GroundTruth gt;
  QuoteKey fresh = -1;
  std::map<std::string, QuoteKey> unaligned;
  for (const GroundTruthRow& row : rows) {
    const auto tokens = tokenize_quotation(row.quotation);
    QuoteKey key = 0;
    bool found = false;
    if (group_len > 0 && tokens.size() >= static_cast<std::size_t>(group_len)) {
      const auto glen = static_cast<std::size_t>(group_len);
      ClusterId best = -1;
      for (std::size_t i = 0; i + glen <= tokens.size(); ++i) {
        auto it = run_index.find(folded_key(tokens, i, glen));
        if (it != run_index.end() && (best < 0 || it->second < best)) best = it->second;
      }
      if (best >= 0) {
        key = best;
        found = true;
      }
    } else {
      auto it = text_index.find(folded_key(tokens, 0, tokens.size()));
      if (it != text_index.end()) {
        key = it->second;
        found = true;
      }
    }
    if (!found) {
      auto [it, inserted] =
          unaligned.emplace(folded_key(tokens, 0, tokens.size()), fresh);
      if (inserted) --fresh;
      key = it->second;
    }
    gt.relevant_quotes.insert(key);
    gt.relevant_speakers.insert(row.speaker);
    if (row.label) gt.relevant_pairs.emplace(key, row.speaker);  // first row wins
  }
  return gt;
}

std::vector<QuoteKey> key_quotation_texts(const std::vector<std::string>& texts,
                                          int group_len, bool case_insensitive) {
  std::vector<QuotationSpan> spans;
  spans.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    QuotationSpan span;
    span.doc_index = i;
    span.tokens = tokenize_quotation(texts[i]);
    spans.push_back(std::move(span));
  }
  const auto clusters = cluster_quotations(spans, group_len, case_insensitive);
  std::vector<QuoteKey> keys(texts.size(), 0);
  for (const QuotationCluster& c : clusters) {
    for (std::size_t member : c.members) keys[member] = c.id;
  }
  return keys;
}

std::vector<PairRecord> nearest_speaker_baseline(const PreprocessedCorpus& corpus,
                                                 int window) {
  std::vector<Candidate> candidates;
  for (const AnnotatedStream& stream : corpus.streams) {
    std::vector<std::size_t> speaker_units;
    for (std::size_t i = 0; i < stream.units.size(); ++i) {
      if (stream.units[i].kind == Unit::Kind::speaker) speaker_units.push_back(i);
    }
    if (speaker_units.empty()) continue;
    for (std::size_t q = 0; q < stream.units.size(); ++q) {
      if (stream.units[q].kind != Unit::Kind::quote) continue;
      std::optional<std::size_t> best;
      std::size_t best_distance = 0;
      for (std::size_t s : speaker_units) {
        const std::size_t distance = s < q ? q - s : s - q;
        if (distance > static_cast<std::size_t>(window)) continue;
        // Ties prefer the preceding side; scanning in unit order visits
        // the preceding speaker first, so strict improvement suffices.
        if (!best || distance < best_distance) {
          best = s;
          best_distance = distance;
        }
      }
      if (!best) continue;
      Candidate c;
      c.cluster = stream.units[q].cluster;
      c.speaker = stream.units[*best].speaker;
      c.pattern = 0;
      c.doc_index = stream.doc_index;
      c.begin = std::min(q, *best);
      c.end = std::max(q, *best) + 1;
      c.quote_unit = q;
      c.speaker_unit = *best;
      candidates.push_back(std::move(c));
    }
  }

  // Conflict resolution with every attribution at precision 1.
  const std::vector<double> precisions{1.0};
  auto table = resolve_conflicts(candidates, precisions);
  std::map<ClusterId, std::map<SpeakerId, std::vector<Candidate>>> grouped;
  for (Candidate& c : candidates) grouped[c.cluster][c.speaker].push_back(std::move(c));

  std::vector<PairRecord> out;
  for (const auto& [cluster, pair] : table) {
    PairRecord record;
    record.cluster = cluster;
    record.speaker = pair.speaker;
    record.confidence = pair.confidence;
    record.first_iteration = 1;
    record.patterns = {0};
    record.occurrences = std::move(grouped[cluster][pair.speaker]);
    out.push_back(std::move(record));
  }
  std::sort(out.begin(), out.end(),
            [](const PairRecord& a, const PairRecord& b) { return a.cluster < b.cluster; });
  return out;
}

CoverageSolution explicit_coverage(double p, int n) {
  if (n < 2) throw std::domain_error("explicit coverage is defined for n >= 2");
  if (!(p > 0.0) || p > 1.0) throw std::domain_error("p must lie in (0, 1]");
  if (p == 1.0) return {1.0, false};

  auto f = [&](double x) { return 1.0 - std::pow(1.0 - p * x, n) - x; };
  // x = 0 always solves the equation; a nontrivial root in (0,1] exists
  // iff f climbs away from zero, i.e. n*p > 1.
  if (n * p <= 1.0) return {0.0, true};
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

std::vector<std::pair<std::int64_t, std::size_t>> ccdf(
    const std::vector<std::int64_t>& counts) {
  std::vector<std::pair<std::int64_t, std::size_t>> out;
  if (counts.empty()) return out;
  const std::int64_t max = *std::max_element(counts.begin(), counts.end());
  if (max < 1) return out;
  // Histogram plus suffix sums: one pass instead of a rescan per k.
  std::vector<std::size_t> hist(static_cast<std::size_t>(max) + 1, 0);
  for (std::int64_t c : counts) {
    if (c >= 1) ++hist[static_cast<std::size_t>(std::min(c, max))];
  }
  std::size_t at_least = 0;
  std::vector<std::size_t> suffix(hist.size(), 0);
  for (std::size_t k = hist.size(); k-- > 1;) {
    at_least += hist[k];
    suffix[k] = at_least;
  }
  out.reserve(static_cast<std::size_t>(max));
  for (std::int64_t k = 1; k <= max; ++k) {
    out.emplace_back(k, suffix[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace quootstrap
