#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dosgk/graph.hpp"

namespace dosgk {

/// Called with the global (row, col) of every kernel entry a view reads.
using KernelAccessRecorder = std::function<void(Index, Index)>;

/// Read-only window K[rows, cols] into a precomputed Gram matrix. Training
/// and prediction only ever touch the kernel through a view, which makes
/// train/test separation checkable.
class KernelView {
 public:
  KernelView(const Matrix& kernel, std::span<const Index> rows, std::span<const Index> cols,
             const KernelAccessRecorder* recorder = nullptr);

  Index rows() const noexcept { return static_cast<Index>(rows_.size()); }
  Index cols() const noexcept { return static_cast<Index>(cols_.size()); }

  double operator()(Index i, Index j) const {
    if (recorder_ != nullptr) (*recorder_)(rows_[i], cols_[j]);
    return (*kernel_)(rows_[i], cols_[j]);
  }

 private:
  const Matrix* kernel_;
  std::span<const Index> rows_;
  std::span<const Index> cols_;
  const KernelAccessRecorder* recorder_;
};

struct SvmParams {
  double C = 1.0;
  /// Stop once the maximal KKT violation drops below this.
  double tolerance = 1e-3;
  std::int64_t max_iterations = 10'000'000;
  /// When set, the dual objective is appended every trace_interval iterations.
  std::vector<double>* objective_trace = nullptr;
  std::int64_t trace_interval = 1000;
};

/// One-vs-one machine between classes positive (< negative).
struct BinarySvm {
  int positive = 0;
  int negative = 1;
  /// Positions into the training set of the enclosing model.
  std::vector<Index> support;
  /// alpha_i * y_i for each support vector.
  std::vector<double> coef;
  std::vector<double> alpha;
  double rho = 0.0;
  bool converged = true;
  std::int64_t iterations = 0;

  double bias() const noexcept { return -rho; }
};

struct SvmModel {
  int num_classes = 0;
  Index num_train = 0;
  std::vector<BinarySvm> machines;

  bool converged() const noexcept;
};

/// C-SVC dual by SMO with second-order working-set selection, one machine per
/// class pair. `train` must be the square train x train view; labels are in
/// [0, num_classes).
SvmModel train_svm(const KernelView& train, std::span<const int> labels, const SvmParams& params,
                   int num_classes = 0);

/// Decision values of every machine for each test row; cross is test x train.
std::vector<std::vector<double>> decision_values(const SvmModel& model, const KernelView& cross);

/// One-vs-one voting, ties go to the lowest class index.
std::vector<int> predict(const SvmModel& model, const KernelView& cross);

}  // namespace dosgk
