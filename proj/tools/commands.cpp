#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dosgk/container.hpp"
#include "dosgk/cross_validation.hpp"
#include "dosgk/dataset.hpp"
#include "dosgk/features.hpp"
#include "dosgk/kernels.hpp"
#include "dosgk/kpm.hpp"
#include "dosgk/parallel.hpp"
#include "dosgk/synthetic.hpp"

namespace dosgk::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double parse_number(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) {
    throw Error(ErrorCode::InvalidConfig, "'" + token + "' is not a number");
  }
  return value;
}

ProbeKind parse_probe_kind(const std::string& s) {
  if (s == "gaussian") return ProbeKind::Gaussian;
  if (s == "rademacher") return ProbeKind::Rademacher;
  if (s == "identity") return ProbeKind::Identity;
  throw Error(ErrorCode::InvalidConfig, "unknown probe kind '" + s + "'");
}

/// Dataset checksum recorded in features: the source checksum, extended by
/// the filter settings when any filter is active.
std::string effective_checksum(const Dataset& d, const FilterSpec& spec) {
  if (spec.min_nodes == 0 && !spec.balance_classes) return d.source_checksum;
  std::ostringstream key;
  key << d.source_checksum << ";min_nodes=" << spec.min_nodes
      << ";balance=" << spec.balance_classes << ";seed=" << spec.seed;
  return sha256_hex(key.str());
}

std::string format_c(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", c);
  return buf;
}

std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  std::vector<std::int64_t> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      raw.push_back(std::stoll(line.substr(first), &used));
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedLine, path + ":" + std::to_string(lineno));
    }
  }
  std::vector<std::int64_t> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> labels;
  labels.reserve(raw.size());
  for (std::int64_t v : raw) {
    labels.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  }
  return labels;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::IoError:
    case ErrorCode::VersionMismatch:
      return kIoError;
    case ErrorCode::MalformedLine:
    case ErrorCode::IndicatorOutOfRange:
    case ErrorCode::EmptyResult:
    case ErrorCode::AsymmetricInput:
    case ErrorCode::NegativeWeight:
      return kMalformedDataset;
    case ErrorCode::ChecksumMismatch:
      return kChecksumMismatch;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::TooFewInstances:
      return kSizeMismatch;
    default:
      return kUsage;
  }
}

std::vector<double> parse_motif_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (item.empty()) continue;
    const auto slash = item.find('/');
    if (slash == std::string::npos) {
      out.push_back(parse_number(item));
    } else {
      const double den = parse_number(item.substr(slash + 1));
      if (den == 0.0) throw Error(ErrorCode::InvalidConfig, "zero denominator in '" + item + "'");
      out.push_back(parse_number(item.substr(0, slash)) / den);
    }
  }
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2 || x.size() != y.size()) return fit;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

int cmd_features(const FeaturesOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.out.empty()) throw Error(ErrorCode::InvalidConfig, "--out is required");
    if (opt.moments < 0) throw Error(ErrorCode::InvalidConfig, "--moments must be >= 0");
    Dataset raw = load_tudataset(opt.dataset_dir, opt.name);
    for (const std::string& w : raw.warnings) err << "warning: " << w << '\n';
    const FilterSpec spec{opt.min_nodes, opt.balance, opt.seed};
    const Dataset d = filter_balance(raw, spec);

    KpmConfig cfg;
    cfg.num_moments = opt.moments + 1;
    cfg.num_probes = opt.probes;
    cfg.probe_kind = parse_probe_kind(opt.probe_kind);
    cfg.jackson = opt.jackson;
    cfg.motif_eigenvalues = parse_motif_list(opt.motifs);
    cfg.seed = opt.seed;
    cfg.threads = 1;
    cfg.validate();
    const IsolatedNodePolicy policy =
        opt.isolated == "drop" ? IsolatedNodePolicy::Drop : IsolatedNodePolicy::KeepZeroRow;
    if (opt.isolated != "drop" && opt.isolated != "keep") {
      throw Error(ErrorCode::InvalidConfig, "--isolated must be keep or drop");
    }

    const int rpf_degree = std::min(opt.moments, kDefaultRpfDegree);
    if (opt.moments > kDefaultRpfDegree) {
      err << "notice: DOS keeps " << opt.moments + 1 << " Chebyshev moments; RPF capped at degree "
          << rpf_degree << " (" << rpf_degree + 1 << " rows)\n";
    }

    const std::size_t count = d.size();
    FeatureSet fs;
    fs.dataset_name = d.name;
    fs.dataset_checksum = effective_checksum(d, spec);
    fs.labels = d.labels;
    fs.params = {opt.moments, rpf_degree, opt.probes, cfg.probe_kind, opt.jackson,
                 cfg.motif_eigenvalues, opt.seed, policy};
    fs.dos = Matrix::Zero(static_cast<Eigen::Index>(count), opt.moments + 1);
    fs.rpf.resize(count);
    std::vector<double> elapsed(count, 0.0);
    std::vector<Index> isolated(count, 0);

    const auto start = Clock::now();
    parallel_for(count, opt.threads, [&](std::size_t g) {
      const auto t0 = Clock::now();
      isolated[g] = d.graphs[g].num_isolated();
      const CsrGraph a = normalize(d.graphs[g], policy);
      KpmConfig local = cfg;
      local.stream = g;
      if (a.num_nodes() == 0) {
        // Every node was isolated and dropped: spectrum is empty, keep T_0 only.
        fs.rpf[g] = Matrix::Zero(rpf_degree + 1, 0);
        fs.dos(static_cast<Eigen::Index>(g), 0) = 1.0;
      } else {
        GraphFeatures f = ldos_plus_dos(a, local, rpf_degree, static_cast<std::int64_t>(g));
        fs.rpf[g] = std::move(f.rpf.V);
        fs.dos.row(static_cast<Eigen::Index>(g)) = f.dos.r.transpose();
      }
      elapsed[g] = seconds_since(t0);
    });
    const double total = seconds_since(start);

    const auto with_isolated = std::count_if(isolated.begin(), isolated.end(), [](Index c) { return c > 0; });
    if (with_isolated > 0) {
      err << "notice: " << with_isolated << " graph(s) contain isolated nodes; policy "
          << (policy == IsolatedNodePolicy::Drop ? "drop" : "keep-zero-row") << " applied\n";
    }

    save_features(opt.out, fs);
    if (!opt.dos_csv.empty()) {
      std::ofstream csv(opt.dos_csv);
      if (!csv) throw Error(ErrorCode::IoError, "cannot write " + opt.dos_csv);
      write_dos_csv(csv, fs);
    }

    if (!opt.quiet) {
      out << "graph,nodes,edges,seconds\n";
      for (std::size_t g = 0; g < count; ++g) {
        out << g << ',' << d.graphs[g].num_nodes() << ',' << d.graphs[g].num_edges() << ','
            << std::setprecision(6) << elapsed[g] << '\n';
      }
    }
    out << "features: " << count << " graphs, " << d.num_classes() << " classes, mean nodes "
        << std::fixed << std::setprecision(2) << d.mean_nodes() << ", " << std::setprecision(3)
        << total << " s\n"
        << std::defaultfloat;
    return kOk;
  });
}

int cmd_kernel(const KernelOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.out.empty()) throw Error(ErrorCode::InvalidConfig, "--out is required");
    const FeatureSet fs = load_features(opt.features, opt.expect_checksum);
    const KernelKind kind = kernel_kind_from_string(opt.kind);
    if (opt.p != 1 && opt.p != 2) throw Error(ErrorCode::InvalidConfig, "--p must be 1 or 2");
    const bool auto_gamma = opt.gamma == "auto";
    const double fixed_gamma = auto_gamma ? 0.0 : parse_number(opt.gamma);

    const auto pick_gamma = [&](const Matrix& dist, const char* what) {
      if (!auto_gamma) return fixed_gamma;
      const MedianHeuristic h = median_heuristic(dist, opt.p);
      if (h.all_zero) err << "warning: all " << what << " distances are zero; gamma set to 1\n";
      return h.gamma;
    };

    KernelFile kf;
    kf.dataset_name = fs.dataset_name;
    kf.dataset_checksum = fs.dataset_checksum;
    kf.labels = fs.labels;

    KernelMatrix dos;
    KernelMatrix ldos;
    double base = 0.0;
    if (kind != KernelKind::Ldos) {
      const std::vector<DosFeature> feats = fs.dos_features();
      const Matrix dist = dos_distances(feats, opt.threads);
      const double g = pick_gamma(dist, "DOS");
      dos.K = exponential_kernel(dist, g, opt.p);
      dos.params = {KernelKind::Dos, g, opt.p, 0.0, {}, 0.0, 0.0};
    }
    if (kind != KernelKind::Dos) {
      const std::vector<RpfFeature> rpfs = fs.rpf_features();
      if (opt.base_gamma == "auto") {
        const MedianHeuristic h = base_bandwidth(rpfs, kDefaultBandwidthPairs, opt.seed);
        if (h.all_zero) err << "warning: sampled RPF columns coincide; base gamma set to 1\n";
        base = h.gamma;
      } else {
        base = parse_number(opt.base_gamma);
      }
      const Matrix dist = mmd_distances(rpfs, base, opt.threads);
      const double g = pick_gamma(dist, "MMD");
      ldos.K = exponential_kernel(dist, g, opt.p);
      ldos.params = {KernelKind::Ldos, g, opt.p, base, {}, 0.0, 0.0};
    }
    switch (kind) {
      case KernelKind::Dos: kf.kernel = std::move(dos); break;
      case KernelKind::Ldos: kf.kernel = std::move(ldos); break;
      case KernelKind::Composite: {
        const CompositeWeights w = CompositeWeights::from_w1(opt.w1);
        kf.kernel = composite_kernel(dos, ldos, w);
        kf.kernel.params = {KernelKind::Composite, 0.0, opt.p, base, w, dos.params.gamma, ldos.params.gamma};
        break;
      }
    }

    save_kernel(opt.out, kf);
    {
      std::ofstream sidecar(opt.out + ".json");
      if (!sidecar) throw Error(ErrorCode::IoError, "cannot write " + opt.out + ".json");
      sidecar << kernel_params_json(kf) << '\n';
    }
    if (!opt.csv.empty()) {
      std::ofstream csv(opt.csv);
      if (!csv) throw Error(ErrorCode::IoError, "cannot write " + opt.csv);
      write_matrix_csv(csv, kf.kernel.K);
    }
    out << "kernel: " << to_string(kind) << ", " << kf.kernel.K.rows() << " graphs";
    if (kind == KernelKind::Composite) {
      out << ", dos gamma " << kf.kernel.params.dos_gamma << ", ldos gamma " << kf.kernel.params.ldos_gamma;
    } else {
      out << ", gamma " << kf.kernel.params.gamma;
    }
    if (kind != KernelKind::Dos) out << ", base gamma " << base;
    out << '\n';
    return kOk;
  });
}

int cmd_classify(const ClassifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const KernelFile kf = load_kernel(opt.kernel, opt.expect_checksum);
    const std::vector<int> labels = opt.labels.empty() ? kf.labels : read_labels(opt.labels);
    if (static_cast<Eigen::Index>(labels.size()) != kf.kernel.K.rows()) {
      throw Error(ErrorCode::ShapeMismatch, std::to_string(labels.size()) + " labels for a " +
                                                std::to_string(kf.kernel.K.rows()) + "-graph kernel");
    }
    CvProtocol protocol;
    protocol.outer_folds = opt.folds;
    protocol.repeats = opt.repeats;
    protocol.inner_folds = opt.inner_folds;
    protocol.seed = opt.seed;
    protocol.threads = opt.threads;
    const CvResult r = cross_validate(kf.kernel, labels, protocol);
    if (!r.all_converged) err << "warning: some SMO runs hit the iteration cap\n";

    json params = json::parse(kernel_params_json(kf));
    params["folds"] = opt.folds;
    params["repeats"] = opt.repeats;
    params["inner_folds"] = opt.inner_folds;
    params["seed"] = opt.seed;
    params["c_grid"] = protocol.c_grid;
    json hist = json::object();
    for (const auto& [c, n] : r.chosen_c) hist[format_c(c)] = n;
    json report = {{"dataset", kf.dataset_name},
                   {"kernel_kind", to_string(kf.kernel.params.kind)},
                   {"params", params},
                   {"mean_accuracy", r.mean_accuracy},
                   {"std", r.std_dev},
                   {"std_all_folds", r.std_all_folds},
                   {"per_repeat", r.per_repeat},
                   {"per_fold", r.per_fold},
                   {"chosen_C_histogram", hist},
                   {"all_converged", r.all_converged}};
    if (!opt.omit_timing) report["wall_time"] = seconds_since(start);
    if (!opt.out.empty()) {
      std::ofstream file(opt.out);
      if (!file) throw Error(ErrorCode::IoError, "cannot write " + opt.out);
      file << report.dump(2) << '\n';
    }
    char line[64];
    std::snprintf(line, sizeof line, "%.2f (%.2f)", r.mean_accuracy, r.std_dev);
    out << kf.dataset_name << ' ' << to_string(kf.kernel.params.kind) << ": " << line << '\n';
    return kOk;
  });
}

namespace {

// Every family keeps |E| close to edges_per_node * n.
CsrGraph scaling_graph(const std::string& family, Index n, Index edges_per_node, std::mt19937_64& rng) {
  if (family == "circulant") return synthetic::circulant(n, edges_per_node);
  if (family == "random-regular") return synthetic::random_regular(n, 2 * edges_per_node, rng);
  if (family == "preferential") return synthetic::preferential_attachment(n, edges_per_node, rng);
  throw Error(ErrorCode::InvalidConfig, "unknown graph family '" + family + "'");
}

}  // namespace

std::vector<ScalingRow> run_scaling(const ScalingOptions& opt) {
  if (opt.edges_per_node < 1 || opt.repetitions < 1) {
    throw Error(ErrorCode::InvalidConfig, "edges per node and repetitions must be >= 1");
  }
  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i < opt.sizes.size(); ++i) {
    const std::int64_t target = opt.sizes[i];
    const auto n = static_cast<Index>(std::max<std::int64_t>(target / opt.edges_per_node, 2 * opt.edges_per_node + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    const CsrGraph a = normalize(scaling_graph(opt.family, n, opt.edges_per_node, rng));
    KpmConfig cfg;
    cfg.num_moments = opt.moments + 1;
    cfg.num_probes = opt.probes;
    cfg.seed = opt.seed;
    cfg.stream = i;
    cfg.threads = opt.threads;
    double best = 0.0;
    for (int rep = 0; rep < opt.repetitions; ++rep) {
      const auto t0 = Clock::now();
      const NodeMoments m = estimate_node_moments(a, cfg);
      const double t = seconds_since(t0);
      if (m.values.size() == 0) throw Error(ErrorCode::EmptyResult, "no moments computed");
      best = rep == 0 ? t : std::min(best, t);
    }
    rows.push_back({a.num_edges(), a.num_nodes(), best});
  }
  return rows;
}

int cmd_scaling_bench(const ScalingOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<ScalingRow> rows = run_scaling(opt);
    std::ostringstream csv;
    csv << "edges,nodes,seconds\n" << std::setprecision(9);
    std::vector<double> x, y;
    for (const ScalingRow& r : rows) {
      csv << r.edges << ',' << r.nodes << ',' << r.seconds << '\n';
      x.push_back(static_cast<double>(r.edges));
      y.push_back(r.seconds);
    }
    if (opt.out.empty()) {
      out << csv.str();
    } else {
      std::ofstream file(opt.out);
      if (!file) throw Error(ErrorCode::IoError, "cannot write " + opt.out);
      file << csv.str();
    }
    const LinearFit fit = fit_line(x, y);
    err << "fit: seconds = " << fit.slope << " * edges + " << fit.intercept << ", R^2 = " << fit.r_squared
        << '\n';
    return kOk;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"DOS/LDOS graph kernels: features, kernels, classification"};
  app.require_subcommand(1);
  const std::size_t default_threads = default_thread_count();

  FeaturesOptions fo;
  fo.threads = default_threads;
  std::string jackson = "on";
  auto* features = app.add_subcommand("features", "Compute LDOS (RPF) and DOS features for a dataset");
  features->add_option("dataset_dir", fo.dataset_dir, "Directory holding the dataset files")->required();
  features->add_option("name", fo.name, "Dataset name, e.g. IMDB-BINARY")->required();
  features->add_option("--moments", fo.moments, "Highest Chebyshev moment S")->capture_default_str();
  features->add_option("--probes", fo.probes, "Number of probe vectors")->capture_default_str();
  features->add_option("--seed", fo.seed, "RNG seed")->capture_default_str();
  features->add_option("--jackson", jackson, "Jackson damping of the DOS moments")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  features->add_option("--motifs", fo.motifs, "Eigenvalues to filter, comma separated, or none")
      ->capture_default_str();
  features->add_option("--probe-kind", fo.probe_kind, "gaussian, rademacher or identity")
      ->check(CLI::IsMember({"gaussian", "rademacher", "identity"}))
      ->capture_default_str();
  features->add_option("--isolated", fo.isolated, "Isolated node policy")
      ->check(CLI::IsMember({"keep", "drop"}))
      ->capture_default_str();
  features->add_option("--min-nodes", fo.min_nodes, "Drop graphs with at most this many nodes")
      ->capture_default_str();
  features->add_flag("--balance", fo.balance, "Downsample classes to the minority count");
  features->add_option("--out", fo.out, "Output feature container")->required();
  features->add_option("--dos-csv", fo.dos_csv, "Also write DOS vectors as CSV");
  features->add_option("--threads", fo.threads, "Worker threads")->capture_default_str();
  features->add_flag("--quiet", fo.quiet, "Skip the per-graph timing table");

  KernelOptions ko;
  ko.threads = default_threads;
  auto* kernel = app.add_subcommand("kernel", "Build a Gram matrix from a feature container");
  kernel->add_option("features", ko.features, "Feature container")->required();
  kernel->add_option("--kind", ko.kind, "dos, ldos or composite")
      ->check(CLI::IsMember({"dos", "ldos", "composite"}))
      ->capture_default_str();
  kernel->add_option("--p", ko.p, "Exponent on the distance, 1 or 2")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  kernel->add_option("--w1", ko.w1, "Weight of the Hadamard term; w2 = 1 - w1")->capture_default_str();
  kernel->add_option("--gamma", ko.gamma, "Bandwidth, or auto for the median heuristic")->capture_default_str();
  kernel->add_option("--base-gamma", ko.base_gamma, "RBF bandwidth inside the MMD, or auto")
      ->capture_default_str();
  kernel->add_option("--expect-checksum", ko.expect_checksum, "Require this dataset checksum");
  kernel->add_option("--seed", ko.seed, "Seed for bandwidth pair sampling")->capture_default_str();
  kernel->add_option("--out", ko.out, "Output kernel container")->required();
  kernel->add_option("--csv", ko.csv, "Also write the matrix as CSV");
  kernel->add_option("--threads", ko.threads, "Worker threads")->capture_default_str();

  ClassifyOptions co;
  co.threads = default_threads;
  auto* classify = app.add_subcommand("classify", "Repeated stratified cross-validation of a C-SVM");
  classify->add_option("kernel", co.kernel, "Kernel container")->required();
  classify->add_option("--labels", co.labels, "Label file overriding the stored labels");
  classify->add_option("--folds", co.folds, "Outer folds")->capture_default_str();
  classify->add_option("--repeats", co.repeats, "Outer repetitions")->capture_default_str();
  classify->add_option("--inner-folds", co.inner_folds, "Folds for choosing C")->capture_default_str();
  classify->add_option("--seed", co.seed, "Seed for fold assignment")->capture_default_str();
  classify->add_option("--threads", co.threads, "Worker threads")->capture_default_str();
  classify->add_option("--expect-checksum", co.expect_checksum, "Require this dataset checksum");
  classify->add_option("--out", co.out, "Write the JSON report here");
  classify->add_flag("--omit-timing", co.omit_timing, "Leave wall_time out of the JSON report");

  ScalingOptions so;
  auto* scaling = app.add_subcommand("scaling-bench", "Time the moment pass on growing synthetic graphs");
  scaling->add_option("--sizes", so.sizes, "Target edge counts")->delimiter(',')->capture_default_str();
  scaling->add_option("--probes", so.probes, "Probe vectors")->capture_default_str();
  scaling->add_option("--moments", so.moments, "Highest Chebyshev moment")->capture_default_str();
  scaling->add_option("--family", so.family, "Graph family")
      ->check(CLI::IsMember({"circulant", "random-regular", "preferential"}))
      ->capture_default_str();
  scaling->add_option("--edges-per-node", so.edges_per_node, "Mean edges per node, |E| / n")->capture_default_str();
  scaling->add_option("--repetitions", so.repetitions, "Timings per size; the minimum is kept")
      ->capture_default_str();
  scaling->add_option("--seed", so.seed, "Graph generator seed")->capture_default_str();
  scaling->add_option("--threads", so.threads, "Worker threads inside the pass")->capture_default_str();
  scaling->add_option("--out", so.out, "CSV output; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*features) {
    fo.jackson = jackson == "on";
    return cmd_features(fo, std::cout, std::cerr);
  }
  if (*kernel) return cmd_kernel(ko, std::cout, std::cerr);
  if (*classify) return cmd_classify(co, std::cout, std::cerr);
  return cmd_scaling_bench(so, std::cout, std::cerr);
}

}  // namespace dosgk::cli
