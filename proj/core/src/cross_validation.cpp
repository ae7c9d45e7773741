#include "dosgk/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dosgk/error.hpp"
#include "dosgk/parallel.hpp"

namespace dosgk {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

double population_std(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

void split(const std::vector<int>& fold_of, std::span<const Index> pool, int fold,
           std::vector<Index>& train, std::vector<Index>& test) {
  train.clear();
  test.clear();
  for (std::size_t t = 0; t < pool.size(); ++t) {
    (fold_of[t] == fold ? test : train).push_back(pool[t]);
  }
}

}  // namespace

std::vector<double> default_c_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::mt19937_64& rng) {
  std::vector<int> fold_of(labels.size(), 0);
  if (labels.empty() || folds <= 0) return fold_of;
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  int position = 0;
  for (int c = 0; c < classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      if (labels[t] == c) members.push_back(t);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t m : members) {
      fold_of[m] = position;
      position = (position + 1) % folds;
    }
  }
  return fold_of;
}

double holdout_accuracy(const Matrix& kernel, std::span<const int> labels,
                        std::span<const Index> train, std::span<const Index> test,
                        const SvmParams& params, int num_classes,
                        const KernelAccessRecorder* recorder, bool* converged) {
  if (test.empty()) return 0.0;
  std::vector<int> train_labels;
  train_labels.reserve(train.size());
  for (Index t : train) train_labels.push_back(labels[t]);
  const SvmModel model =
      train_svm(KernelView(kernel, train, train, recorder), train_labels, params, num_classes);
  if (converged != nullptr) *converged = *converged && model.converged();
  const auto predicted = predict(model, KernelView(kernel, test, train, recorder));
  std::size_t correct = 0;
  for (std::size_t t = 0; t < test.size(); ++t) correct += (predicted[t] == labels[test[t]]);
  return 100.0 * static_cast<double>(correct) / static_cast<double>(test.size());
}

double select_c(const Matrix& kernel, std::span<const int> labels, std::span<const Index> train,
                const CvProtocol& protocol, std::uint64_t seed, int num_classes,
                const KernelAccessRecorder* recorder) {
  std::vector<int> train_labels;
  for (Index t : train) train_labels.push_back(labels[t]);
  std::mt19937_64 rng(seed);
  const auto fold_of = stratified_folds(train_labels, protocol.inner_folds, rng);

  double best_c = protocol.c_grid.front();
  std::size_t best_correct = 0;
  std::vector<Index> inner_train, inner_test;
  for (double c : protocol.c_grid) {
    SvmParams params;
    params.C = c;
    params.tolerance = protocol.tolerance;
    std::size_t correct = 0;
    for (int f = 0; f < protocol.inner_folds; ++f) {
      split(fold_of, train, f, inner_train, inner_test);
      if (inner_test.empty()) continue;
      const double acc = holdout_accuracy(kernel, labels, inner_train, inner_test, params,
                                          num_classes, recorder);
      correct += static_cast<std::size_t>(std::lround(acc * inner_test.size() / 100.0));
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_c = c;
    }
  }
  return best_c;
}

CvResult cross_validate(const KernelMatrix& kernel, std::span<const int> labels,
                        const CvProtocol& protocol, const KernelAccessRecorder* recorder) {
  const auto m = static_cast<Index>(labels.size());
  if (kernel.K.rows() != m || kernel.K.cols() != m) {
    throw Error(ErrorCode::ShapeMismatch, "kernel has " + std::to_string(kernel.K.rows()) +
                                              " rows but there are " + std::to_string(m) +
                                              " labels");
  }
  if (protocol.c_grid.empty() || protocol.outer_folds < 2 || protocol.repeats < 1 ||
      protocol.inner_folds < 2) {
    throw Error(ErrorCode::InvalidConfig, "invalid cross-validation protocol");
  }
  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  for (int c = 0; c < num_classes; ++c) {
    const auto count = std::count(labels.begin(), labels.end(), c);
    if (count < protocol.outer_folds) {
      throw Error(ErrorCode::TooFewInstances,
                  "class " + std::to_string(c) + " has " + std::to_string(count) +
                      " instances, fewer than " + std::to_string(protocol.outer_folds) + " folds");
    }
  }

  std::vector<Index> everyone(static_cast<std::size_t>(m));
  std::iota(everyone.begin(), everyone.end(), 0);
  std::vector<std::vector<int>> folds_per_repeat;
  for (int r = 0; r < protocol.repeats; ++r) {
    std::mt19937_64 rng(mix_seed(protocol.seed, static_cast<std::uint64_t>(r), 0));
    folds_per_repeat.push_back(stratified_folds(labels, protocol.outer_folds, rng));
  }

  struct Job {
    double accuracy = 0.0;
    double c = 0.0;
    std::size_t test_size = 0;
    bool converged = true;
  };
  const auto jobs = static_cast<std::size_t>(protocol.repeats * protocol.outer_folds);
  std::vector<Job> results(jobs);
  parallel_for(jobs, protocol.threads, [&](std::size_t job) {
    const int r = static_cast<int>(job) / protocol.outer_folds;
    const int f = static_cast<int>(job) % protocol.outer_folds;
    std::vector<Index> train, test;
    split(folds_per_repeat[r], everyone, f, train, test);
    const double c = select_c(kernel.K, labels, train, protocol,
                              mix_seed(protocol.seed, static_cast<std::uint64_t>(r),
                                       static_cast<std::uint64_t>(f) + 1),
                              num_classes, recorder);
    SvmParams params;
    params.C = c;
    params.tolerance = protocol.tolerance;
    Job& out = results[job];
    out.c = c;
    out.test_size = test.size();
    out.accuracy = holdout_accuracy(kernel.K, labels, train, test, params, num_classes, recorder,
                                    &out.converged);
  });

  CvResult result;
  std::vector<double> all_folds;
  for (int r = 0; r < protocol.repeats; ++r) {
    std::vector<double> folds;
    double correct = 0.0;
    for (int f = 0; f < protocol.outer_folds; ++f) {
      const Job& job = results[static_cast<std::size_t>(r * protocol.outer_folds + f)];
      folds.push_back(job.accuracy);
      all_folds.push_back(job.accuracy);
      correct += job.accuracy * static_cast<double>(job.test_size) / 100.0;
      ++result.chosen_c[job.c];
      result.all_converged = result.all_converged && job.converged;
    }
    result.per_repeat.push_back(100.0 * correct / static_cast<double>(m));
    result.per_fold.push_back(std::move(folds));
  }
  result.mean_accuracy = std::accumulate(result.per_repeat.begin(), result.per_repeat.end(), 0.0) /
                         static_cast<double>(result.per_repeat.size());
  result.std_dev = population_std(result.per_repeat);
  result.std_all_folds = population_std(all_folds);
  return result;
}

}  // namespace dosgk
