#pragma once

#include "gazsl/text/stopwords.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gazsl::text {

struct Document {
  int class_id = 0;
  std::string raw_text;
};

/// Term index over a training corpus. Terms are indexed in lexicographic
/// order, so the ordering does not depend on document order.
class Vocabulary {
 public:
  /// Throws ValidationError on an empty corpus.
  static Vocabulary build(std::span<const std::vector<std::string>> corpus);

  std::size_t size() const { return terms_.size(); }
  std::size_t corpus_size() const { return corpus_size_; }
  /// Index of a term, or -1 when out of vocabulary.
  std::ptrdiff_t index_of(std::string_view term) const;
  const std::string& term(std::size_t index) const { return index_terms_[index]; }
  std::size_t doc_frequency(std::size_t index) const { return doc_frequency_[index]; }
  double idf(std::size_t index) const;
  /// Digest over terms and document frequencies.
  std::string digest() const;

 private:
  std::map<std::string, std::size_t, std::less<>> terms_;
  std::vector<std::string> index_terms_;
  std::vector<std::size_t> doc_frequency_;
  std::size_t corpus_size_ = 0;
};

/// Sparse non-negative term weights, sorted by index.
struct TfIdfVector {
  std::size_t dimension = 0;
  std::vector<std::pair<std::size_t, double>> entries;

  double norm() const;
  std::vector<double> dense() const;
};

/// weight(t) = count(t in doc) * ln(N / df(t)); L2-normalized when the norm is positive.
/// Out-of-vocabulary terms are dropped.
TfIdfVector encode_tfidf(std::span<const std::string> doc_terms, const Vocabulary& vocab);

/// tokenize -> strip_stopwords -> porter_stem.
std::vector<std::string> preprocess(std::string_view raw_text, const Stoplist& stoplist);

/// Text encoder fitted on a training corpus of documents.
struct EncodedCorpus {
  Vocabulary vocabulary;
  std::vector<int> class_ids;
  std::vector<TfIdfVector> vectors;     // aligned with class_ids
  std::vector<int> zero_vector_classes; // classes whose vector came out all-zero
};

/// Builds the vocabulary from `training` only, then encodes `training` and
/// `others` against it (in that order).
EncodedCorpus encode_corpus(std::span<const Document> training, std::span<const Document> others,
                            const Stoplist& stoplist);

std::string to_json(const TfIdfVector& v);
TfIdfVector tfidf_from_json(std::string_view json);

}  // namespace gazsl::text
