#include "quootstrap/pipeline.hpp"

#include <algorithm>
#include <thread>

namespace quootstrap {

void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

int PreprocessedCorpus::cluster_weight_length(ClusterId id, bool in_chars) const {
  if (!in_chars) return cluster_length(id);
  if (id < 0 || static_cast<std::size_t>(id) >= clusters.size()) return 0;
  const auto& tokens = clusters[static_cast<std::size_t>(id)].canonical_tokens;
  std::size_t chars = tokens.empty() ? 0 : tokens.size() - 1;  // joining spaces
  for (const auto& t : tokens) chars += t.size();
  return static_cast<int>(chars);
}

std::string PreprocessedCorpus::cluster_text(ClusterId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= clusters.size()) return {};
  const auto& tokens = clusters[static_cast<std::size_t>(id)].canonical_tokens;
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

PreprocessedCorpus preprocess(std::vector<Document> documents, AliasDictionary dictionary,
                              const Options& options) {
  PreprocessedCorpus corpus;
  corpus.documents = std::move(documents);
  corpus.dictionary = std::move(dictionary);
  const std::size_t n = corpus.documents.size();

  struct PerDoc {
    TokenStream stream;
    std::vector<QuotationSpan> quotes;
    std::vector<EntityMention> mentions;
    QuoteDetectStats quote_stats;
  };
  std::vector<PerDoc> per_doc(n);

  parallel_chunks(n, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      PerDoc& pd = per_doc[d];
      pd.stream = tokenize(corpus.documents[d]);
      pd.quotes = detect_quotations(pd.stream, options.min_quote_len,
                                    options.max_quote_len, &pd.quote_stats);
      for (QuotationSpan& q : pd.quotes) q.doc_index = d;
      pd.mentions = detect_mentions(pd.stream, corpus.dictionary);
      for (EntityMention& m : pd.mentions) {
        if (!m.resolved) {
          m.resolved = resolve_partial(m, pd.mentions, corpus.dictionary);
        }
      }
    }
  });

  // Corpus-wide clustering over spans in document order.
  std::vector<QuotationSpan> all_spans;
  std::vector<std::pair<std::size_t, std::size_t>> span_of;  // (doc, local index)
  for (std::size_t d = 0; d < n; ++d) {
    if (!per_doc[d].stream.balanced_quotes) ++corpus.unbalanced_documents;
    corpus.dropped_quotes += per_doc[d].quote_stats.dropped_length;
    for (std::size_t q = 0; q < per_doc[d].quotes.size(); ++q) {
      all_spans.push_back(per_doc[d].quotes[q]);
      span_of.emplace_back(d, q);
    }
  }
  corpus.clusters = cluster_quotations(all_spans, options.group_len,
                                       options.cluster_case_insensitive);
  corpus.spans = all_spans;
  std::vector<ClusterId> cluster_of_span(all_spans.size(), -1);
  for (const QuotationCluster& c : corpus.clusters) {
    for (std::size_t member : c.members) cluster_of_span[member] = c.id;
  }
  std::vector<std::vector<ClusterId>> doc_span_cluster(n);
  for (std::size_t s = 0; s < all_spans.size(); ++s) {
    auto [d, q] = span_of[s];
    if (doc_span_cluster[d].size() <= q) doc_span_cluster[d].resize(q + 1, -1);
    doc_span_cluster[d][q] = cluster_of_span[s];
  }

  // Rewrite each document as annotated units.
  corpus.streams.assign(n, AnnotatedStream{});
  parallel_chunks(n, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      const PerDoc& pd = per_doc[d];
      AnnotatedStream& out = corpus.streams[d];
      out.doc_id = corpus.documents[d].doc_id;
      out.doc_index = d;

      // token index -> covering quotation span / resolved mention
      struct Cover {
        std::size_t end = 0;  // inclusive token index
        int quote = -1;       // local quote index
        const EntityMention* mention = nullptr;
      };
      std::map<std::size_t, Cover> starts;
      for (std::size_t q = 0; q < pd.quotes.size(); ++q) {
        Cover c;
        c.end = pd.quotes[q].close_token;
        c.quote = static_cast<int>(q);
        starts.emplace(pd.quotes[q].open_token, c);
      }
      for (const EntityMention& m : pd.mentions) {
        if (!m.resolved) continue;
        Cover c;
        c.end = m.end_token - 1;
        c.mention = &m;
        starts.emplace(m.begin_token, c);
      }

      std::size_t i = 0;
      const auto& tokens = pd.stream.tokens;
      while (i < tokens.size()) {
        auto it = starts.find(i);
        if (it != starts.end()) {
          const Cover& c = it->second;
          Unit u;
          u.first_token = i;
          u.last_token = c.end;
          if (c.quote >= 0) {
            u.kind = Unit::Kind::quote;
            u.cluster = doc_span_cluster[d][static_cast<std::size_t>(c.quote)];
          } else {
            u.kind = Unit::Kind::speaker;
            u.speaker = *c.mention->resolved;
          }
          out.units.push_back(std::move(u));
          i = c.end + 1;
          continue;
        }
        Unit u;
        u.kind = Unit::Kind::token;
        u.text = tokens[i].surface;
        u.first_token = u.last_token = i;
        out.units.push_back(std::move(u));
        ++i;
      }
    }
  });

  return corpus;
}

}  // namespace quootstrap
