#include "gazsl/text/tfidf.hpp"

#include "gazsl/error.hpp"
#include "gazsl/text/porter.hpp"
#include "gazsl/text/tokenizer.hpp"
#include "gazsl/util/hash.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <set>

namespace gazsl::text {

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> corpus) {
  if (corpus.empty()) throw ValidationError("build_vocabulary: empty corpus");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& doc : corpus) {
    std::set<std::string_view> distinct(doc.begin(), doc.end());
    for (std::string_view t : distinct) {
      auto it = df.find(t);
      if (it == df.end()) {
        df.emplace(std::string(t), 1);
      } else {
        ++it->second;
      }
    }
  }
  Vocabulary v;
  v.corpus_size_ = corpus.size();
  for (const auto& [term, count] : df) {
    v.terms_.emplace(term, v.index_terms_.size());
    v.index_terms_.push_back(term);
    v.doc_frequency_.push_back(count);
  }
  return v;
}

std::ptrdiff_t Vocabulary::index_of(std::string_view term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

double Vocabulary::idf(std::size_t index) const {
  return std::log(static_cast<double>(corpus_size_) / static_cast<double>(doc_frequency_[index]));
}

std::string Vocabulary::digest() const {
  util::Fnv1a h;
  h.update(static_cast<std::uint64_t>(corpus_size_));
  for (std::size_t i = 0; i < index_terms_.size(); ++i) {
    h.update(index_terms_[i]);
    h.update(std::string_view("\0", 1));
    h.update(static_cast<std::uint64_t>(doc_frequency_[i]));
  }
  return h.hex();
}

double TfIdfVector::norm() const {
  double s = 0.0;
  for (const auto& [i, w] : entries) s += w * w;
  return std::sqrt(s);
}

std::vector<double> TfIdfVector::dense() const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& [i, w] : entries) out[i] = w;
  return out;
}

TfIdfVector encode_tfidf(std::span<const std::string> doc_terms, const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& t : doc_terms) {
    const auto idx = vocab.index_of(t);
    if (idx >= 0) ++counts[static_cast<std::size_t>(idx)];
  }
  TfIdfVector v;
  v.dimension = vocab.size();
  for (const auto& [idx, tf] : counts) {
    const double w = static_cast<double>(tf) * vocab.idf(idx);
    if (w > 0.0) v.entries.emplace_back(idx, w);
  }
  const double n = v.norm();
  if (n > 0.0) {
    for (auto& e : v.entries) e.second /= n;
  }
  return v;
}

std::vector<std::string> preprocess(std::string_view raw_text, const Stoplist& stoplist) {
  std::vector<std::string> terms = strip_stopwords(tokenize(raw_text), stoplist);
  for (auto& t : terms) t = porter_stem(t);
  return terms;
}

EncodedCorpus encode_corpus(std::span<const Document> training, std::span<const Document> others,
                            const Stoplist& stoplist) {
  std::vector<std::vector<std::string>> train_terms;
  train_terms.reserve(training.size());
  for (const auto& d : training) train_terms.push_back(preprocess(d.raw_text, stoplist));

  EncodedCorpus out{Vocabulary::build(train_terms), {}, {}, {}};
  auto add = [&](int class_id, const std::vector<std::string>& terms) {
    out.class_ids.push_back(class_id);
    out.vectors.push_back(encode_tfidf(terms, out.vocabulary));
    if (out.vectors.back().entries.empty()) out.zero_vector_classes.push_back(class_id);
  };
  for (std::size_t i = 0; i < training.size(); ++i) add(training[i].class_id, train_terms[i]);
  for (const auto& d : others) add(d.class_id, preprocess(d.raw_text, stoplist));
  return out;
}

std::string to_json(const TfIdfVector& v) {
  nlohmann::json j;
  j["dimension"] = v.dimension;
  j["entries"] = nlohmann::json::array();
  for (const auto& [i, w] : v.entries) j["entries"].push_back({i, w});
  return j.dump();
}

TfIdfVector tfidf_from_json(std::string_view json) {
  TfIdfVector v;
  try {
    const auto j = nlohmann::json::parse(json);
    v.dimension = j.at("dimension").get<std::size_t>();
    for (const auto& e : j.at("entries")) {
      const auto idx = e.at(0).get<std::size_t>();
      if (idx >= v.dimension) throw ValidationError("tfidf vector: index " + std::to_string(idx) + " out of range");
      if (!v.entries.empty() && idx <= v.entries.back().first) {
        throw ValidationError("tfidf vector: indices must be strictly increasing");
      }
      v.entries.emplace_back(idx, e.at(1).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("tfidf vector: malformed JSON: ") + e.what());
  }
  return v;
}

}  // namespace gazsl::text
