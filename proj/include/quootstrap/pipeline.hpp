#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quootstrap/corpus.hpp"
#include "quootstrap/entity.hpp"
#include "quootstrap/options.hpp"
#include "quootstrap/pattern.hpp"
#include "quootstrap/quote.hpp"

namespace quootstrap {

/// Corpus after tokenization, mention resolution, quotation clustering
/// and unit annotation. Immutable during the bootstrap loop.
struct PreprocessedCorpus {
  std::vector<Document> documents;
  IngestReport ingest;
  AliasDictionary dictionary;
  std::vector<AnnotatedStream> streams;    // one per document, same order
  std::vector<QuotationSpan> spans;        // every quotation occurrence, corpus order
  std::vector<QuotationCluster> clusters;  // cluster id == index; members index spans
  std::size_t unbalanced_documents = 0;
  std::size_t dropped_quotes = 0;

  int cluster_length(ClusterId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < clusters.size()
               ? static_cast<int>(clusters[static_cast<std::size_t>(id)]
                                      .canonical_tokens.size())
               : 0;
  }
  // Canonical length for match weighting, in tokens or characters.
  int cluster_weight_length(ClusterId id, bool in_chars) const;
  std::string cluster_text(ClusterId id) const;
};

/// Runs the per-document stages (parallel over documents) and the
/// corpus-wide clustering.
PreprocessedCorpus preprocess(std::vector<Document> documents, AliasDictionary dictionary,
                              const Options& options);

/// Chunked parallel execution: fn(begin, end) over [0, n) partitions in
/// index order. threads <= 1 degenerates to one call.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace quootstrap
