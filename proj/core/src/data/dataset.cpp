#include "gazsl/data/dataset.hpp"

#include "gazsl/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace gazsl::data {
namespace {

constexpr std::array<char, 4> kMagic{'G', 'Z', 'F', 'T'};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError(path.string() + ": write failed");
}

[[noreturn]] void fail_at(const fs::path& path, std::size_t line, const std::string& what) {
  throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view buf, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<std::size_t> DatasetBundle::instances_of(std::span<const int> classes) const {
  std::set<int> wanted(classes.begin(), classes.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (wanted.count(labels[i]) != 0) out.push_back(i);
  }
  return out;
}

ad::Tensor DatasetBundle::rows(std::span<const std::size_t> indices) const {
  ad::Tensor out(indices.size(), dim());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.matrix().row(static_cast<Eigen::Index>(r)) = features.matrix().row(static_cast<Eigen::Index>(indices[r]));
  }
  return out;
}

std::vector<int> DatasetBundle::labels_at(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(labels[i]);
  return out;
}

std::vector<text::Document> DatasetBundle::documents_of(std::span<const int> classes) const {
  std::vector<text::Document> out;
  for (int c : classes) {
    auto it = documents.find(c);
    if (it == documents.end()) throw ValidationError("no document for class " + std::to_string(c));
    out.push_back(it->second);
  }
  return out;
}

void validate(const DatasetBundle& b) {
  if (b.features.rows() != b.labels.size()) {
    throw ValidationError("dataset '" + b.name + "': " + std::to_string(b.features.rows()) + " feature rows but " +
                          std::to_string(b.labels.size()) + " labels");
  }
  if (!b.features.all_finite()) throw ValidationError("dataset '" + b.name + "': features contain NaN or Inf");

  const std::vector<int> seen = sorted_unique(b.split.seen);
  const std::vector<int> unseen = sorted_unique(b.split.unseen);
  if (seen.size() != b.split.seen.size() || unseen.size() != b.split.unseen.size()) {
    throw ValidationError("split: duplicate class id within seen or unseen list");
  }
  std::vector<int> overlap;
  std::set_intersection(seen.begin(), seen.end(), unseen.begin(), unseen.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    std::string ids;
    for (int c : overlap) ids += (ids.empty() ? "" : ", ") + std::to_string(c);
    throw ValidationError("split: class(es) " + ids +
                          " listed as both seen and unseen; seen and unseen sets must be disjoint");
  }
  std::set<int> all(seen.begin(), seen.end());
  all.insert(unseen.begin(), unseen.end());
  for (std::size_t i = 0; i < b.labels.size(); ++i) {
    if (all.count(b.labels[i]) == 0) {
      throw ValidationError("instance " + std::to_string(i) + " has class " + std::to_string(b.labels[i]) +
                            " which is neither seen nor unseen");
    }
  }
  for (int c : all) {
    if (b.documents.count(c) == 0) throw ValidationError("missing document for class " + std::to_string(c));
  }
}

ad::Tensor read_features_binary(const fs::path& path) {
  const std::string buf = read_file(path);
  if (buf.size() < 16 || !std::equal(kMagic.begin(), kMagic.end(), buf.begin())) {
    throw ValidationError(path.string() + ": not a feature file (bad magic)");
  }
  const std::uint32_t version = get_u32(buf, 4);
  if (version != kFeatureFileVersion) {
    throw ValidationError(path.string() + ": unsupported feature file version " + std::to_string(version));
  }
  const std::size_t rows = get_u32(buf, 8);
  const std::size_t cols = get_u32(buf, 12);
  if (buf.size() != 16 + rows * cols * 8) {
    throw ValidationError(path.string() + ": header declares " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " values but payload is " + std::to_string(buf.size() - 16) + " bytes");
  }
  ad::Tensor t(rows, cols);
  auto values = t.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[16 + i * 8 + k])) << (8 * k);
    values[i] = std::bit_cast<double>(bits);
  }
  return t;
}

void write_features_binary(const ad::Tensor& features, const fs::path& path) {
  std::string buf(kMagic.begin(), kMagic.end());
  put_u32(buf, kFeatureFileVersion);
  put_u32(buf, static_cast<std::uint32_t>(features.rows()));
  put_u32(buf, static_cast<std::uint32_t>(features.cols()));
  buf.reserve(16 + features.size() * 8);
  for (double v : features.values()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) buf.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
  }
  write_file(path, buf);
}

ad::Tensor read_features_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split_csv(line)) {
      double v = 0.0;
      if (!parse_number(cell, v)) fail_at(path, lineno, "cannot parse '" + cell + "' as a number");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_at(path, lineno, "expected " + std::to_string(rows.front().size()) + " columns, found " +
                                std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  ad::Tensor t(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) t(r, c) = rows[r][c];
  }
  return t;
}

void write_features_csv(const ad::Tensor& features, const fs::path& path) {
  std::string out;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      if (c != 0) out.push_back(',');
      out += format_double(features(r, c));
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

DatasetBundle load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw ValidationError(root.string() + ": dataset directory does not exist");
  DatasetBundle b;

  const fs::path bin = root / "features.bin";
  const fs::path csv = root / "features.csv";
  if (fs::exists(bin)) {
    b.features = read_features_binary(bin);
  } else if (fs::exists(csv)) {
    b.features = read_features_csv(csv);
  } else {
    throw ValidationError(root.string() + ": neither features.bin nor features.csv found");
  }

  // labels.csv: header "instance_id,class_id", one row per instance.
  const fs::path labels_path = root / "labels.csv";
  {
    std::istringstream in(read_file(labels_path));
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<long, int>> rows;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      const auto cells = split_csv(line);
      if (lineno == 1 && !cells.empty() && cells[0] == "instance_id") continue;
      if (cells.size() != 2) fail_at(labels_path, lineno, "expected 2 columns (instance_id,class_id)");
      long id = 0;
      int cls = 0;
      if (!parse_number(cells[0], id) || !parse_number(cells[1], cls)) {
        fail_at(labels_path, lineno, "cannot parse '" + line + "'");
      }
      rows.emplace_back(id, cls);
    }
    if (rows.size() != b.features.rows()) {
      throw ValidationError(labels_path.string() + ": " + std::to_string(rows.size()) + " labels but features have " +
                            std::to_string(b.features.rows()) + " rows");
    }
    b.labels.assign(rows.size(), 0);
    std::vector<char> taken(rows.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const long id = rows[i].first;
      if (id < 0 || static_cast<std::size_t>(id) >= rows.size() || taken[static_cast<std::size_t>(id)]) {
        throw ValidationError(labels_path.string() + ": instance_id " + std::to_string(id) +
                              " is out of range or repeated (ids must be 0.." + std::to_string(rows.size() - 1) + ")");
      }
      taken[static_cast<std::size_t>(id)] = 1;
      b.labels[static_cast<std::size_t>(id)] = rows[i].second;
    }
  }

  const fs::path split_path = root / "split.json";
  try {
    const auto j = nlohmann::json::parse(read_file(split_path));
    b.split.seen = j.at("seen").get<std::vector<int>>();
    b.split.unseen = j.at("unseen").get<std::vector<int>>();
    b.split.style = j.value("style", std::string());
    b.name = j.value("name", root.filename().string());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(split_path.string() + ": " + e.what());
  }

  std::vector<int> classes = b.split.seen;
  classes.insert(classes.end(), b.split.unseen.begin(), b.split.unseen.end());
  for (int c : classes) {
    const fs::path doc = root / "docs" / (std::to_string(c) + ".txt");
    if (!fs::exists(doc)) continue;  // reported by validate()
    b.documents[c] = text::Document{c, read_file(doc)};
  }

  validate(b);
  return b;
}

void write_dataset(const DatasetBundle& b, const fs::path& root, FeatureFormat format) {
  validate(b);
  fs::create_directories(root / "docs");
  if (format == FeatureFormat::Binary) {
    write_features_binary(b.features, root / "features.bin");
  } else {
    write_features_csv(b.features, root / "features.csv");
  }

  std::string labels = "instance_id,class_id\n";
  for (std::size_t i = 0; i < b.labels.size(); ++i) {
    labels += std::to_string(i) + "," + std::to_string(b.labels[i]) + "\n";
  }
  write_file(root / "labels.csv", labels);

  nlohmann::ordered_json j;
  j["name"] = b.name;
  j["seen"] = b.split.seen;
  j["unseen"] = b.split.unseen;
  j["style"] = b.split.style;
  write_file(root / "split.json", j.dump(2) + "\n");

  for (const auto& [c, doc] : b.documents) write_file(root / "docs" / (std::to_string(c) + ".txt"), doc.raw_text);
}

}  // namespace gazsl::data
