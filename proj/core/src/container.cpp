#include "dosgk/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "dosgk/dataset.hpp"
#include "dosgk/error.hpp"

namespace dosgk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {


void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

void append_matrix(std::string& payload, const Matrix& m) {
  const Eigen::Index count = m.size();
  for (Eigen::Index i = 0; i < count; ++i) append_u64(payload, std::bit_cast<std::uint64_t>(m.data()[i]));
}

std::string probe_name(ProbeKind k) {
  switch (k) {
    case ProbeKind::Gaussian: return "gaussian";
    case ProbeKind::Rademacher: return "rademacher";
    case ProbeKind::Identity: return "identity";
  }
  return "gaussian";
}

ProbeKind probe_from_name(const std::string& s) {
  if (s == "gaussian") return ProbeKind::Gaussian;
  if (s == "rademacher") return ProbeKind::Rademacher;
  if (s == "identity") return ProbeKind::Identity;
  throw Error(ErrorCode::InvalidConfig, "unknown probe kind '" + s + "'");
}

struct MatrixShape {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// Writes magic, header length, header JSON and payload. The payload hash and
/// matrix table are added to the header here.
void write_container(const fs::path& path, const std::string& format, json header,
                     const std::vector<std::pair<std::string, const Matrix*>>& matrices) {
  std::string payload;
  json table = json::array();
  for (const auto& [name, m] : matrices) {
    table.push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
    append_matrix(payload, *m);
  }
  header["format"] = format;
  header["version"] = kContainerVersion;
  header["matrices"] = std::move(table);
  header["payload_sha256"] = sha256_hex(payload);
  const std::string text = header.dump();

  std::string bytes(kContainerMagic, sizeof kContainerMagic);
  append_u64(bytes, text.size());
  bytes += text;
  bytes += payload;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

struct Container {
  json header;
  std::vector<Matrix> matrices;
  std::vector<std::string> names;
};

Container read_container(const fs::path& path, const std::string& format,
                         const std::optional<std::string>& expected_dataset_checksum) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kContainerMagic, sizeof kContainerMagic) != 0) {
    throw Error(ErrorCode::IoError, path.string() + " is not a dosgk container");
  }
  const std::uint64_t header_len = read_u64(bytes.data() + 8);
  if (header_len > bytes.size() - 16) throw Error(ErrorCode::IoError, path.string() + ": truncated header");

  Container c;
  try {
    c.header = json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": bad header: " + e.what());
  }
  try {
    const int version = c.header.at("version").get<int>();
    if (version != kContainerVersion) {
      throw Error(ErrorCode::VersionMismatch, path.string() + ": container version " +
                                                  std::to_string(version) + ", expected " +
                                                  std::to_string(kContainerVersion));
    }
    if (c.header.at("format").get<std::string>() != format) {
      throw Error(ErrorCode::IoError, path.string() + ": expected a " + format + " container");
    }
    if (expected_dataset_checksum &&
        c.header.at("dataset_checksum").get<std::string>() != *expected_dataset_checksum) {
      throw Error(ErrorCode::ChecksumMismatch,
                  path.string() + " was produced from a different dataset");
    }
    const std::string_view payload(bytes.data() + 16 + header_len, bytes.size() - 16 - header_len);
    if (sha256_hex(payload) != c.header.at("payload_sha256").get<std::string>()) {
      throw Error(ErrorCode::ChecksumMismatch, path.string() + ": payload checksum mismatch");
    }
    std::size_t offset = 0;
    for (const json& entry : c.header.at("matrices")) {
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      const auto count = static_cast<std::size_t>(rows * cols);
      if (rows < 0 || cols < 0 || offset + 8 * count > payload.size()) {
        throw Error(ErrorCode::IoError, path.string() + ": matrix table exceeds payload");
      }
      Matrix m(rows, cols);
      for (std::size_t i = 0; i < count; ++i) {
        m.data()[i] = std::bit_cast<double>(read_u64(payload.data() + offset + 8 * i));
      }
      offset += 8 * count;
      c.names.push_back(entry.at("name").get<std::string>());
      c.matrices.push_back(std::move(m));
    }
    if (offset != payload.size()) throw Error(ErrorCode::IoError, path.string() + ": trailing payload bytes");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": bad header: " + e.what());
  }
  return c;
}

json kernel_params_to_json(const KernelParams& p) {
  return {{"kind", to_string(p.kind)},
          {"gamma", p.gamma},
          {"p", p.p},
          {"base_gamma", p.base_gamma},
          {"w1", p.weights.w1},
          {"w2", p.weights.w2},
          {"dos_gamma", p.dos_gamma},
          {"ldos_gamma", p.ldos_gamma}};
}

KernelParams kernel_params_from_json(const json& j) {
  KernelParams p;
  p.kind = kernel_kind_from_string(j.at("kind").get<std::string>());
  p.gamma = j.at("gamma").get<double>();
  p.p = j.at("p").get<int>();
  p.base_gamma = j.at("base_gamma").get<double>();
  p.weights.w1 = j.at("w1").get<double>();
  p.weights.w2 = j.at("w2").get<double>();
  p.dos_gamma = j.at("dos_gamma").get<double>();
  p.ldos_gamma = j.at("ldos_gamma").get<double>();
  return p;
}

}  // namespace

std::vector<DosFeature> FeatureSet::dos_features() const {
  std::vector<DosFeature> out;
  out.reserve(static_cast<std::size_t>(dos.rows()));
  for (Eigen::Index g = 0; g < dos.rows(); ++g) {
    out.push_back({dos.row(g).transpose(), static_cast<Index>(g)});
  }
  return out;
}

std::vector<RpfFeature> FeatureSet::rpf_features() const {
  std::vector<RpfFeature> out;
  out.reserve(rpf.size());
  for (std::size_t g = 0; g < rpf.size(); ++g) out.push_back({rpf[g], static_cast<Index>(g)});
  return out;
}

void save_features(const fs::path& path, const FeatureSet& f) {
  if (static_cast<std::size_t>(f.dos.rows()) != f.rpf.size() || f.labels.size() != f.rpf.size()) {
    throw Error(ErrorCode::ShapeMismatch, "feature set has inconsistent graph counts");
  }
  json header;
  header["dataset"] = f.dataset_name;
  header["dataset_checksum"] = f.dataset_checksum;
  header["labels"] = f.labels;
  header["seed"] = f.params.seed;
  header["params"] = {{"num_moments", f.params.num_moments},
                      {"rpf_degree", f.params.rpf_degree},
                      {"num_probes", f.params.num_probes},
                      {"probe_kind", probe_name(f.params.probe_kind)},
                      {"jackson", f.params.jackson},
                      {"motif_eigenvalues", f.params.motif_eigenvalues},
                      {"isolated_policy", f.params.isolated_policy == IsolatedNodePolicy::Drop
                                              ? "drop"
                                              : "keep_zero_row"}};
  std::vector<std::pair<std::string, const Matrix*>> matrices;
  matrices.emplace_back("dos", &f.dos);
  std::vector<std::string> names;
  names.reserve(f.rpf.size());
  for (std::size_t g = 0; g < f.rpf.size(); ++g) names.push_back("rpf/" + std::to_string(g));
  for (std::size_t g = 0; g < f.rpf.size(); ++g) matrices.emplace_back(names[g], &f.rpf[g]);
  write_container(path, "features", std::move(header), matrices);
}

FeatureSet load_features(const fs::path& path, const std::optional<std::string>& expected_dataset_checksum) {
  Container c = read_container(path, "features", expected_dataset_checksum);
  FeatureSet f;
  try {
    f.dataset_name = c.header.at("dataset").get<std::string>();
    f.dataset_checksum = c.header.at("dataset_checksum").get<std::string>();
    f.labels = c.header.at("labels").get<std::vector<int>>();
    f.params.seed = c.header.at("seed").get<std::uint64_t>();
    const json& p = c.header.at("params");
    f.params.num_moments = p.at("num_moments").get<int>();
    f.params.rpf_degree = p.at("rpf_degree").get<int>();
    f.params.num_probes = p.at("num_probes").get<int>();
    f.params.probe_kind = probe_from_name(p.at("probe_kind").get<std::string>());
    f.params.jackson = p.at("jackson").get<bool>();
    f.params.motif_eigenvalues = p.at("motif_eigenvalues").get<std::vector<double>>();
    f.params.isolated_policy = p.at("isolated_policy").get<std::string>() == "drop"
                                   ? IsolatedNodePolicy::Drop
                                   : IsolatedNodePolicy::KeepZeroRow;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": bad header: " + e.what());
  }
  if (c.matrices.empty() || c.names.front() != "dos") {
    throw Error(ErrorCode::IoError, path.string() + ": missing dos matrix");
  }
  f.dos = std::move(c.matrices.front());
  for (std::size_t i = 1; i < c.matrices.size(); ++i) f.rpf.push_back(std::move(c.matrices[i]));
  if (static_cast<std::size_t>(f.dos.rows()) != f.rpf.size() || f.labels.size() != f.rpf.size()) {
    throw Error(ErrorCode::IoError, path.string() + ": inconsistent graph counts");
  }
  return f;
}

void save_kernel(const fs::path& path, const KernelFile& kf) {
  if (kf.kernel.K.rows() != kf.kernel.K.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "kernel matrix must be square");
  }
  json header;
  header["dataset"] = kf.dataset_name;
  header["dataset_checksum"] = kf.dataset_checksum;
  header["labels"] = kf.labels;
  header["params"] = kernel_params_to_json(kf.kernel.params);
  write_container(path, "kernel", std::move(header), {{"K", &kf.kernel.K}});
}

KernelFile load_kernel(const fs::path& path, const std::optional<std::string>& expected_dataset_checksum) {
  Container c = read_container(path, "kernel", expected_dataset_checksum);
  KernelFile kf;
  try {
    kf.dataset_name = c.header.at("dataset").get<std::string>();
    kf.dataset_checksum = c.header.at("dataset_checksum").get<std::string>();
    kf.labels = c.header.at("labels").get<std::vector<int>>();
    kf.kernel.params = kernel_params_from_json(c.header.at("params"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": bad header: " + e.what());
  }
  if (c.matrices.size() != 1 || c.matrices[0].rows() != c.matrices[0].cols()) {
    throw Error(ErrorCode::IoError, path.string() + ": expected one square matrix");
  }
  kf.kernel.K = std::move(c.matrices[0]);
  return kf;
}

std::string kernel_params_json(const KernelFile& kf) {
  json j = kernel_params_to_json(kf.kernel.params);
  j["dataset"] = kf.dataset_name;
  j["dataset_checksum"] = kf.dataset_checksum;
  j["num_graphs"] = kf.kernel.K.rows();
  return j.dump(2);
}

void write_dos_csv(std::ostream& out, const FeatureSet& f) {
  out << "graph_id";
  for (Eigen::Index m = 0; m < f.dos.cols(); ++m) out << ",m" << m;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index g = 0; g < f.dos.rows(); ++g) {
    out << g;
    for (Eigen::Index m = 0; m < f.dos.cols(); ++m) out << ',' << f.dos(g, m);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dosgk
