#include "dosgk/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <openssl/evp.h>

#include "dosgk/error.hpp"

namespace dosgk {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view token, const fs::path& file, std::size_t lineno) {
  token = trim(token);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::MalformedLine,
                file.filename().string() + ":" + std::to_string(lineno) + ": '" +
                    std::string(token) + "' is not an integer");
  }
  return value;
}

/// Calls fn(line, lineno) for every non-blank line.
template <typename Fn>
void for_each_line(const std::string& text, Fn fn) {
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++lineno;
    const std::string_view line = trim(std::string_view(text).substr(start, end - start));
    if (!line.empty()) fn(line, lineno);
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

double Dataset::mean_nodes() const noexcept {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const CsrGraph& g : graphs) total += g.num_nodes();
  return total / static_cast<double>(graphs.size());
}

double Dataset::mean_edges() const noexcept {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const CsrGraph& g : graphs) total += static_cast<double>(g.num_edges());
  return total / static_cast<double>(graphs.size());
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes()), 0);
  for (int label : labels) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

Dataset load_tudataset(const fs::path& dir, const std::string& name) {
  const fs::path edges_path = dir / (name + "_A.txt");
  const fs::path indicator_path = dir / (name + "_graph_indicator.txt");
  const fs::path labels_path = dir / (name + "_graph_labels.txt");
  for (const fs::path& p : {edges_path, indicator_path, labels_path}) {
    if (!fs::exists(p)) throw Error(ErrorCode::MissingFile, p.string());
  }

  Dataset d;
  d.name = name;
  for (const char* suffix : {"_node_labels.txt", "_node_attributes.txt", "_edge_labels.txt",
                             "_edge_attributes.txt", "_graph_attributes.txt"}) {
    if (fs::exists(dir / (name + suffix))) {
      d.warnings.push_back("ignoring " + name + suffix + " (kernels use graph structure only)");
    }
  }

  const std::string edges_text = read_file(edges_path);
  const std::string indicator_text = read_file(indicator_path);
  const std::string labels_text = read_file(labels_path);
  {
    std::string all;
    for (const std::string* part : {&edges_text, &indicator_text, &labels_text}) {
      all += std::to_string(part->size());
      all += '\n';
      all += *part;
    }
    d.source_checksum = sha256_hex(all);
  }

  std::vector<std::int64_t> graph_of;
  for_each_line(indicator_text, [&](std::string_view line, std::size_t lineno) {
    graph_of.push_back(parse_int(line, indicator_path, lineno));
  });
  std::vector<std::int64_t> raw_labels;
  for_each_line(labels_text, [&](std::string_view line, std::size_t lineno) {
    raw_labels.push_back(parse_int(line, labels_path, lineno));
  });
  const auto num_graphs = static_cast<std::int64_t>(raw_labels.size());

  std::vector<Index> local_id(graph_of.size());
  std::vector<Index> node_count(static_cast<std::size_t>(num_graphs), 0);
  for (std::size_t v = 0; v < graph_of.size(); ++v) {
    const std::int64_t gid = graph_of[v];
    if (gid < 1 || gid > num_graphs) {
      throw Error(ErrorCode::IndicatorOutOfRange,
                  indicator_path.filename().string() + ":" + std::to_string(v + 1) + ": graph id " +
                      std::to_string(gid) + " outside 1.." + std::to_string(num_graphs));
    }
    local_id[v] = node_count[static_cast<std::size_t>(gid - 1)]++;
  }
  for (std::int64_t g = 0; g < num_graphs; ++g) {
    if (node_count[static_cast<std::size_t>(g)] == 0) {
      throw Error(ErrorCode::IndicatorOutOfRange, "graph " + std::to_string(g + 1) + " has no nodes");
    }
  }

  std::vector<std::vector<Entry>> entries(static_cast<std::size_t>(num_graphs));
  for_each_line(edges_text, [&](std::string_view line, std::size_t lineno) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, edges_path.filename().string() + ":" +
                                                std::to_string(lineno) + ": expected 'i, j'");
    }
    const std::int64_t u = parse_int(line.substr(0, comma), edges_path, lineno);
    const std::int64_t v = parse_int(line.substr(comma + 1), edges_path, lineno);
    const auto nodes = static_cast<std::int64_t>(graph_of.size());
    if (u < 1 || u > nodes || v < 1 || v > nodes) {
      throw Error(ErrorCode::IndicatorOutOfRange,
                  edges_path.filename().string() + ":" + std::to_string(lineno) +
                      ": node id outside 1.." + std::to_string(nodes));
    }
    const std::int64_t gu = graph_of[static_cast<std::size_t>(u - 1)];
    if (gu != graph_of[static_cast<std::size_t>(v - 1)]) {
      throw Error(ErrorCode::IndicatorOutOfRange, edges_path.filename().string() + ":" +
                                                      std::to_string(lineno) +
                                                      ": edge joins two different graphs");
    }
    entries[static_cast<std::size_t>(gu - 1)].push_back(
        {local_id[static_cast<std::size_t>(u - 1)], local_id[static_cast<std::size_t>(v - 1)], 1.0});
  });

  d.graphs.reserve(static_cast<std::size_t>(num_graphs));
  for (std::int64_t g = 0; g < num_graphs; ++g) {
    d.graphs.push_back(CsrGraph::from_entries(node_count[static_cast<std::size_t>(g)],
                                              std::move(entries[static_cast<std::size_t>(g)])));
  }

  d.original_labels = raw_labels;
  std::sort(d.original_labels.begin(), d.original_labels.end());
  d.original_labels.erase(std::unique(d.original_labels.begin(), d.original_labels.end()),
                          d.original_labels.end());
  d.labels.reserve(raw_labels.size());
  for (std::int64_t raw : raw_labels) {
    d.labels.push_back(static_cast<int>(
        std::lower_bound(d.original_labels.begin(), d.original_labels.end(), raw) -
        d.original_labels.begin()));
  }
  return d;
}

Dataset filter_balance(const Dataset& d, const FilterSpec& spec) {
  if (spec.min_nodes < 0) throw Error(ErrorCode::InvalidConfig, "min_nodes must be >= 0");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.graphs[i].num_nodes() > spec.min_nodes) kept.push_back(i);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyResult,
                "no graph has more than " + std::to_string(spec.min_nodes) + " nodes");
  }

  if (spec.balance_classes) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i : kept) by_class[d.labels[i]].push_back(i);
    std::size_t minority = kept.size();
    for (const auto& [label, members] : by_class) minority = std::min(minority, members.size());
    std::mt19937_64 rng(spec.seed);
    kept.clear();
    for (auto& [label, members] : by_class) {
      std::shuffle(members.begin(), members.end(), rng);
      kept.insert(kept.end(), members.begin(),
                  members.begin() + static_cast<std::ptrdiff_t>(minority));
    }
    std::sort(kept.begin(), kept.end());
  }

  Dataset out;
  out.name = d.name;
  out.source_checksum = d.source_checksum;
  out.warnings = d.warnings;
  std::vector<int> present;
  for (std::size_t i : kept) present.push_back(d.labels[i]);
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  for (int c : present) out.original_labels.push_back(d.original_labels[static_cast<std::size_t>(c)]);
  for (std::size_t i : kept) {
    out.graphs.push_back(d.graphs[i]);
    out.labels.push_back(static_cast<int>(
        std::lower_bound(present.begin(), present.end(), d.labels[i]) - present.begin()));
  }
  return out;
}

void write_tudataset(const fs::path& dir, const std::string& name,
                     std::span<const CsrGraph> graphs, std::span<const std::int64_t> labels) {
  if (graphs.size() != labels.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one label per graph required");
  }
  fs::create_directories(dir);
  std::ofstream edges(dir / (name + "_A.txt"));
  std::ofstream indicator(dir / (name + "_graph_indicator.txt"));
  std::ofstream label_out(dir / (name + "_graph_labels.txt"));
  if (!edges || !indicator || !label_out) {
    throw Error(ErrorCode::IoError, "cannot write dataset files in " + dir.string());
  }
  std::int64_t offset = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const CsrGraph& graph = graphs[g];
    for (Index i = 0; i < graph.num_nodes(); ++i) {
      indicator << g + 1 << '\n';
      for (Index j : graph.row_cols(i)) edges << offset + i + 1 << ", " << offset + j + 1 << '\n';
    }
    label_out << labels[g] << '\n';
    offset += graph.num_nodes();
  }
}

}  // namespace dosgk
