#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazsl::text {

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::set<std::string, std::less<>> words) : words_(std::move(words)) {}

  /// One term per line; blank lines and lines starting with '#' are skipped.
  /// Throws ConfigError if the file cannot be read.
  static Stoplist load(const std::filesystem::path& path);
  static Stoplist parse(std::string_view content);
  /// The English list shipped in data/stopwords_en.txt.
  static const Stoplist& english();

  bool contains(std::string_view term) const { return words_.find(term) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Removes stop words, keeping the order of the surviving terms.
std::vector<std::string> strip_stopwords(std::span<const std::string> terms, const Stoplist& stoplist);

}  // namespace gazsl::text
