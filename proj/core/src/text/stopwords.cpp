#include "gazsl/text/stopwords.hpp"

#include "gazsl/error.hpp"

#include <fstream>
#include <sstream>

namespace gazsl::text {
namespace detail {
extern const char* const kDefaultStoplist;
}

Stoplist Stoplist::parse(std::string_view content) {
  std::set<std::string, std::less<>> words;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return Stoplist(std::move(words));
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read stoplist file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Stoplist& Stoplist::english() {
  static const Stoplist list = parse(detail::kDefaultStoplist);
  return list;
}

std::vector<std::string> strip_stopwords(std::span<const std::string> terms, const Stoplist& stoplist) {
  std::vector<std::string> kept;
  kept.reserve(terms.size());
  for (const auto& t : terms) {
    if (!stoplist.contains(t)) kept.push_back(t);
  }
  return kept;
}

}  // namespace gazsl::text
