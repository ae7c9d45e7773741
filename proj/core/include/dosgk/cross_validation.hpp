#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "dosgk/kernels.hpp"
#include "dosgk/svm.hpp"

namespace dosgk {

std::vector<double> default_c_grid();  // 10^-3 .. 10^3

/// Repeated stratified k-fold evaluation with C chosen by an inner
/// cross-validation on each training fold.
struct CvProtocol {
  int outer_folds = 10;
  int repeats = 10;
  std::vector<double> c_grid = default_c_grid();
  int inner_folds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  double tolerance = 1e-3;
};

struct CvResult {
  /// Percent, mean over repeat-level accuracies.
  double mean_accuracy = 0.0;
  /// Percent, population std of the repeat-level accuracies.
  double std_dev = 0.0;
  /// Percent, population std over every outer fold.
  double std_all_folds = 0.0;
  std::vector<double> per_repeat;
  std::vector<std::vector<double>> per_fold;
  std::map<double, int> chosen_c;
  bool all_converged = true;
};

/// Fold id per instance. Each class is shuffled, then dealt round-robin with
/// the dealing position carried over between classes.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::mt19937_64& rng);

/// Percent of test points predicted correctly by a model trained on `train`.
double holdout_accuracy(const Matrix& kernel, std::span<const int> labels,
                        std::span<const Index> train, std::span<const Index> test,
                        const SvmParams& params, int num_classes,
                        const KernelAccessRecorder* recorder = nullptr, bool* converged = nullptr);

/// Inner-CV choice of C on the training indices only. Ties go to the smaller C.
double select_c(const Matrix& kernel, std::span<const int> labels, std::span<const Index> train,
                const CvProtocol& protocol, std::uint64_t seed, int num_classes,
                const KernelAccessRecorder* recorder = nullptr);

/// Throws TooFewInstances when some class has fewer members than outer folds.
CvResult cross_validate(const KernelMatrix& kernel, std::span<const int> labels,
                        const CvProtocol& protocol,
                        const KernelAccessRecorder* recorder = nullptr);

}  // namespace dosgk
