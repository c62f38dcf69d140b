#include "quootstrap/bootstrap.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "quootstrap/dawg.hpp"
#include "quootstrap/eval.hpp"

namespace quootstrap {

Pattern default_seed() { return *parse_pattern("$Q , $S said", 0); }

double pair_confidence(const std::vector<double>& pattern_precisions) {
  double miss = 1.0;
  for (double p : pattern_precisions) miss *= 1.0 - p;
  return 1.0 - miss;
}

std::map<ClusterId, ResolvedPair> resolve_conflicts(
    const std::vector<Candidate>& candidates,
    const std::vector<double>& precision_by_pattern) {
  struct SpeakerEvidence {
    std::set<int> patterns;
    std::size_t occurrences = 0;
  };
  std::map<ClusterId, std::map<SpeakerId, SpeakerEvidence>> by_cluster;
  for (const Candidate& c : candidates) {
    auto& ev = by_cluster[c.cluster][c.speaker];
    ev.patterns.insert(c.pattern);
    ++ev.occurrences;
  }

  std::map<ClusterId, ResolvedPair> table;
  for (auto& [cluster, speakers] : by_cluster) {
    const SpeakerId* best = nullptr;
    double best_kappa = -1;
    std::size_t best_occ = 0;
    for (auto& [speaker, ev] : speakers) {
      std::vector<double> precisions;
      precisions.reserve(ev.patterns.size());
      for (int p : ev.patterns) {
        precisions.push_back(precision_by_pattern[static_cast<std::size_t>(p)]);
      }
      const double kappa = pair_confidence(precisions);
      const bool wins =
          !best || kappa > best_kappa ||
          (kappa == best_kappa &&
           (ev.occurrences > best_occ || (ev.occurrences == best_occ && speaker < *best)));
      if (wins) {
        best = &speaker;
        best_kappa = kappa;
        best_occ = ev.occurrences;
      }
    }
    if (best) table.emplace(cluster, ResolvedPair{*best, best_kappa});
  }
  return table;
}

std::vector<PatternStats> classify_matches(const std::vector<Candidate>& candidates,
                                           const std::map<ClusterId, SpeakerId>& previous,
                                           std::size_t pattern_count,
                                           const PreprocessedCorpus& corpus, double tau,
                                           bool weight_by_chars) {
  std::vector<PatternStats> stats(pattern_count);
  std::vector<std::set<std::pair<ClusterId, SpeakerId>>> supported(pattern_count);
  for (const Candidate& c : candidates) {
    auto known = previous.find(c.cluster);
    if (known == previous.end()) continue;  // neutral
    auto& st = stats[static_cast<std::size_t>(c.pattern)];
    const double w =
        match_weight(corpus.cluster_weight_length(c.cluster, weight_by_chars), tau);
    if (known->second == c.speaker) {
      st.w_plus += w;
      if (supported[static_cast<std::size_t>(c.pattern)].emplace(c.cluster, c.speaker)
              .second) {
        ++st.support;
      }
    } else {
      st.w_minus += w;
    }
  }
  return stats;
}

namespace {

// Minimal valid pattern for one co-occurrence, or nullopt when the
// context cannot be expressed (third placeholder unit inside, or no
// literal available to extend onto).
std::optional<Pattern> pattern_from_context(const AnnotatedStream& stream,
                                            std::size_t quote_unit,
                                            std::size_t speaker_unit) {
  std::size_t lo = std::min(quote_unit, speaker_unit);
  std::size_t hi = std::max(quote_unit, speaker_unit);
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i == quote_unit || i == speaker_unit) continue;
    if (stream.units[i].kind != Unit::Kind::token) return std::nullopt;
  }
  // A pattern may not start or end with the speaker placeholder: extend
  // one unit outward onto a plain token.
  if (speaker_unit == lo) {
    if (lo == 0 || stream.units[lo - 1].kind != Unit::Kind::token) return std::nullopt;
    --lo;
  }
  if (speaker_unit == hi) {
    if (hi + 1 >= stream.units.size() ||
        stream.units[hi + 1].kind != Unit::Kind::token) {
      return std::nullopt;
    }
    ++hi;
  }
  Pattern p;
  p.elements.reserve(hi - lo + 1);
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i == quote_unit) {
      p.elements.push_back(quote_placeholder());
    } else if (i == speaker_unit) {
      p.elements.push_back(speaker_placeholder());
    } else {
      p.elements.push_back(literal(stream.units[i].text));
    }
  }
  if (!is_valid(p)) return std::nullopt;
  return p;
}

}  // namespace

std::vector<Pattern> extract_candidate_patterns(
    const PreprocessedCorpus& corpus, const std::map<ClusterId, SpeakerId>& table,
    const std::set<ConsumedContext>& consumed, int window, int threads) {
  const std::size_t n = corpus.streams.size();
  std::vector<std::vector<Pattern>> per_doc(n);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      const AnnotatedStream& stream = corpus.streams[d];
      std::vector<std::size_t> quote_units;
      std::vector<std::size_t> speaker_units;
      for (std::size_t i = 0; i < stream.units.size(); ++i) {
        if (stream.units[i].kind == Unit::Kind::quote) quote_units.push_back(i);
        if (stream.units[i].kind == Unit::Kind::speaker) speaker_units.push_back(i);
      }
      for (std::size_t q : quote_units) {
        auto attributed = table.find(stream.units[q].cluster);
        if (attributed == table.end()) continue;
        for (std::size_t s : speaker_units) {
          if (stream.units[s].speaker != attributed->second) continue;
          const std::size_t distance = q < s ? s - q : q - s;
          if (distance > static_cast<std::size_t>(window)) continue;
          if (consumed.count({d, q, s})) continue;  // already returned a result
          if (auto p = pattern_from_context(stream, q, s)) {
            per_doc[d].push_back(std::move(*p));
          }
        }
      }
    }
  });
  std::vector<Pattern> out;
  for (auto& v : per_doc) {
    out.insert(out.end(), std::make_move_iterator(v.begin()),
               std::make_move_iterator(v.end()));
  }
  return out;
}

namespace {

struct MatchCacheEntry {
  std::vector<Candidate> hits;  // pattern field unset; filled per use
};

// Matches `patterns` against the whole corpus and locates the quote and
// speaker units of each hit.
std::vector<MatchCacheEntry> match_corpus(const std::vector<Pattern>& patterns,
                                          const PreprocessedCorpus& corpus, int threads) {
  std::vector<MatchCacheEntry> cache(patterns.size());
  if (patterns.empty()) return cache;
  MatchTrie trie(patterns);
  const std::size_t n = corpus.streams.size();
  std::vector<std::vector<MatchTrie::Hit>> per_doc(n);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      per_doc[d] = trie.match_stream(corpus.streams[d]);
    }
  });
  for (std::size_t d = 0; d < n; ++d) {
    const AnnotatedStream& stream = corpus.streams[d];
    for (const MatchTrie::Hit& h : per_doc[d]) {
      Candidate c;
      c.cluster = h.cluster;
      c.speaker = h.speaker;
      c.doc_index = d;
      c.begin = h.begin;
      c.end = h.end;
      for (std::size_t i = h.begin; i < h.end; ++i) {
        if (stream.units[i].kind == Unit::Kind::quote) c.quote_unit = i;
        if (stream.units[i].kind == Unit::Kind::speaker) c.speaker_unit = i;
      }
      cache[static_cast<std::size_t>(h.pattern)].hits.push_back(std::move(c));
    }
  }
  return cache;
}

}  // namespace

BootstrapResult run_bootstrap(const PreprocessedCorpus& corpus, const Options& options,
                              const GroundTruth* ground_truth) {
  if (options.seeds.empty()) {
    throw std::invalid_argument("bootstrap requires at least one seed pattern");
  }
  for (const Pattern& seed : options.seeds) {
    if (!is_valid(seed)) {
      throw std::invalid_argument("invalid seed pattern: " + to_string(seed));
    }
  }

  BootstrapResult result;
  std::map<std::string, int> pattern_index;
  std::vector<std::vector<Candidate>> hits_by_pattern;  // matches are corpus-static

  auto add_pattern = [&](Pattern p, int origin_iteration) -> int {
    const std::string key = to_string(p);
    auto it = pattern_index.find(key);
    if (it != pattern_index.end()) return -1;
    p.origin_iteration = origin_iteration;
    const int idx = static_cast<int>(result.patterns.size());
    pattern_index.emplace(key, idx);
    result.patterns.push_back(ActivePattern{std::move(p), {}, 1.0});
    return idx;
  };
  for (const Pattern& seed : options.seeds) add_pattern(seed, 0);

  {
    std::vector<Pattern> seed_patterns;
    for (const ActivePattern& ap : result.patterns) seed_patterns.push_back(ap.pattern);
    auto cache = match_corpus(seed_patterns, corpus, options.threads);
    for (auto& entry : cache) hits_by_pattern.push_back(std::move(entry.hits));
  }

  std::map<ClusterId, SpeakerId> previous_assignment;
  std::map<ClusterId, ResolvedPair> resolved;
  std::map<ClusterId, int> first_iteration;
  std::set<ConsumedContext> consumed;
  int iterations_run = 0;

  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    iterations_run = iteration;
    const std::size_t active = result.patterns.size();

    // Pattern precision against the pre-iteration table.
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < active; ++p) {
      for (const Candidate& c : hits_by_pattern[p]) {
        Candidate copy = c;
        copy.pattern = static_cast<int>(p);
        candidates.push_back(std::move(copy));
      }
    }
    auto stats =
        classify_matches(candidates, previous_assignment, active, corpus,
                         options.tau, options.weight_by_chars);
    std::vector<double> precisions(active);
    for (std::size_t p = 0; p < active; ++p) {
      result.patterns[p].stats = stats[p];
      precisions[p] =
          pattern_precision(stats[p], result.patterns[p].pattern.is_seed());
      result.patterns[p].precision = precisions[p];
    }

    resolved = resolve_conflicts(candidates, precisions);
    std::map<ClusterId, SpeakerId> assignment;
    std::size_t new_pairs = 0;
    for (const auto& [cluster, pair] : resolved) {
      assignment.emplace(cluster, pair.speaker);
      if (!previous_assignment.count(cluster)) ++new_pairs;
      auto [it, inserted] = first_iteration.emplace(cluster, iteration);
      if (!inserted) {
        auto prev = previous_assignment.find(cluster);
        if (prev != previous_assignment.end() && prev->second != pair.speaker) {
          it->second = iteration;  // attribution changed hands
        }
      }
    }
    for (const Candidate& c : candidates) {
      consumed.insert({c.doc_index, c.quote_unit, c.speaker_unit});
    }

    // Pattern inference: extract, cluster per orientation and threshold,
    // then filter by measured precision and support.
    std::vector<Pattern> extracted = extract_candidate_patterns(
        corpus, assignment, consumed, options.window, options.threads);
    std::vector<Pattern> quote_first;
    std::vector<Pattern> speaker_first;
    for (Pattern& p : extracted) {
      (p.quote_first() ? quote_first : speaker_first).push_back(std::move(p));
    }
    std::map<std::string, Pattern> inferred;
    for (const std::vector<Pattern>* side : {&quote_first, &speaker_first}) {
      if (side->empty()) continue;
      auto dawg = Dawg::build(*side);
      if (!dawg) continue;
      const double n = static_cast<double>(side->size());
      for (double threshold : options.cluster_thresholds) {
        const double n_min = threshold < 1.0 ? threshold * n : threshold;
        for (Pattern& p : dawg->generalize(n_min, options.max_wildcard_run)) {
          inferred.emplace(to_string(p), std::move(p));
        }
      }
    }

    std::vector<Pattern> novel;
    for (auto& [key, p] : inferred) {
      if (!pattern_index.count(key)) novel.push_back(std::move(p));
    }

    // Evaluate the candidates by matching them and classifying against
    // this iteration's table.
    std::size_t admitted = 0;
    if (!novel.empty()) {
      auto cache = match_corpus(novel, corpus, options.threads);
      for (std::size_t i = 0; i < novel.size(); ++i) {
        std::vector<Candidate> own = cache[i].hits;
        for (Candidate& c : own) c.pattern = 0;
        auto own_stats = classify_matches(own, assignment, 1, corpus, options.tau,
                                          options.weight_by_chars);
        const double precision = pattern_precision(own_stats[0], false);
        if (precision < options.filter_threshold ||
            own_stats[0].support < options.min_support) {
          continue;
        }
        const int idx = add_pattern(novel[i], iteration);
        if (idx < 0) continue;
        result.patterns[static_cast<std::size_t>(idx)].stats = own_stats[0];
        result.patterns[static_cast<std::size_t>(idx)].precision = precision;
        hits_by_pattern.push_back(std::move(cache[i].hits));
        ++admitted;
      }
    }

    IterationReport report;
    report.iteration = iteration;
    report.active_patterns = active;
    report.admitted_patterns = admitted;
    report.pairs = assignment.size();
    report.new_pairs = new_pairs;
    if (ground_truth) {
      std::vector<std::pair<QuoteKey, SpeakerId>> retrieved;
      for (const auto& [cluster, speaker] : assignment) {
        retrieved.emplace_back(cluster, speaker);
      }
      EvalResult ev = evaluate(retrieved, *ground_truth, EvalMode::micro,
                               options.z_disjunctive);
      report.precision = ev.precision;
      report.recall = ev.recall;
    }
    result.iterations.push_back(report);

    const bool stable = assignment == previous_assignment;
    previous_assignment = std::move(assignment);
    if (admitted == 0 && stable) {
      result.converged = true;
      break;
    }
  }

  // Final pair table from the last resolution.
  std::map<ClusterId, std::map<SpeakerId, std::vector<Candidate>>> grouped;
  for (std::size_t p = 0; p < result.patterns.size(); ++p) {
    for (const Candidate& c : hits_by_pattern[p]) {
      Candidate copy = c;
      copy.pattern = static_cast<int>(p);
      grouped[c.cluster][c.speaker].push_back(std::move(copy));
    }
  }
  for (const auto& [cluster, pair] : resolved) {
    PairRecord record;
    record.cluster = cluster;
    record.speaker = pair.speaker;
    record.confidence = pair.confidence;
    record.first_iteration = first_iteration.count(cluster)
                                 ? first_iteration.at(cluster)
                                 : iterations_run;
    auto& occurrences = grouped[cluster][pair.speaker];
    std::sort(occurrences.begin(), occurrences.end(),
              [](const Candidate& a, const Candidate& b) {
                return std::tie(a.doc_index, a.begin, a.pattern) <
                       std::tie(b.doc_index, b.begin, b.pattern);
              });
    std::set<int> patterns;
    for (const Candidate& c : occurrences) patterns.insert(c.pattern);
    record.patterns.assign(patterns.begin(), patterns.end());
    record.occurrences = std::move(occurrences);
    result.pairs.push_back(std::move(record));
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const PairRecord& a, const PairRecord& b) { return a.cluster < b.cluster; });
  return result;
}

}  // namespace quootstrap
