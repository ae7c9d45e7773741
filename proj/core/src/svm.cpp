#include "dosgk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dosgk/error.hpp"

namespace dosgk {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Binary C-SVC on a dense local kernel, following the LIBSVM solver.
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& k, std::vector<signed char> y, const SvmParams& params)
      : k_(k), y_(std::move(y)), params_(params), l_(static_cast<Index>(y_.size())),
        alpha_(static_cast<std::size_t>(l_), 0.0), grad_(static_cast<std::size_t>(l_), -1.0) {}

  void solve() {
    for (iterations_ = 0; iterations_ < params_.max_iterations; ++iterations_) {
      if (params_.objective_trace != nullptr && iterations_ % params_.trace_interval == 0) {
        params_.objective_trace->push_back(dual_objective());
      }
      Index i = -1;
      Index j = -1;
      if (select_working_set(i, j)) {
        converged_ = true;
        break;
      }
      update(i, j);
    }
    if (params_.objective_trace != nullptr) params_.objective_trace->push_back(dual_objective());
    rho_ = compute_rho();
  }

  const std::vector<double>& alpha() const { return alpha_; }
  double rho() const { return rho_; }
  bool converged() const { return converged_; }
  std::int64_t iterations() const { return iterations_; }

  /// e^T alpha - 1/2 alpha^T Q alpha.
  double dual_objective() const {
    double v = 0.0;
    for (Index t = 0; t < l_; ++t) v += alpha_[t] * (grad_[t] - 1.0);
    return -0.5 * v;
  }

 private:
  double q(Index i, Index j) const { return y_[i] * y_[j] * k_(i, j); }
  bool upper(Index t) const { return alpha_[t] >= params_.C; }
  bool lower(Index t) const { return alpha_[t] <= 0.0; }

  bool select_working_set(Index& out_i, Index& out_j) const {
    double gmax = -kInf;
    double gmax2 = -kInf;
    Index gmax_idx = -1;
    Index gmin_idx = -1;
    double obj_diff_min = kInf;

    for (Index t = 0; t < l_; ++t) {
      if (y_[t] == 1) {
        if (!upper(t) && -grad_[t] >= gmax) {
          gmax = -grad_[t];
          gmax_idx = t;
        }
      } else if (!lower(t) && grad_[t] >= gmax) {
        gmax = grad_[t];
        gmax_idx = t;
      }
    }
    const Index i = gmax_idx;
    if (i < 0) return true;

    for (Index t = 0; t < l_; ++t) {
      if (y_[t] == 1) {
        if (lower(t)) continue;
        const double grad_diff = gmax + grad_[t];
        gmax2 = std::max(gmax2, grad_[t]);
        if (grad_diff > 0.0) {
          double quad = k_(i, i) + k_(t, t) - 2.0 * y_[i] * q(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_diff_min) {
            gmin_idx = t;
            obj_diff_min = obj;
          }
        }
      } else {
        if (upper(t)) continue;
        const double grad_diff = gmax - grad_[t];
        gmax2 = std::max(gmax2, -grad_[t]);
        if (grad_diff > 0.0) {
          double quad = k_(i, i) + k_(t, t) + 2.0 * y_[i] * q(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_diff_min) {
            gmin_idx = t;
            obj_diff_min = obj;
          }
        }
      }
    }
    if (gmax + gmax2 < params_.tolerance || gmin_idx < 0) return true;
    out_i = i;
    out_j = gmin_idx;
    return false;
  }

  void update(Index i, Index j) {
    const double c = params_.C;
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    const double qij = q(i, j);
    if (y_[i] != y_[j]) {
      double quad = k_(i, i) + k_(j, j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = alpha_[i] - alpha_[j];
      alpha_[i] += delta;
      alpha_[j] += delta;
      if (diff > 0.0) {
        if (alpha_[j] < 0.0) {
          alpha_[j] = 0.0;
          alpha_[i] = diff;
        }
      } else if (alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha_[i] > c) {
          alpha_[i] = c;
          alpha_[j] = c - diff;
        }
      } else if (alpha_[j] > c) {
        alpha_[j] = c;
        alpha_[i] = c + diff;
      }
    } else {
      double quad = k_(i, i) + k_(j, j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = alpha_[i] + alpha_[j];
      alpha_[i] -= delta;
      alpha_[j] += delta;
      if (sum > c) {
        if (alpha_[i] > c) {
          alpha_[i] = c;
          alpha_[j] = sum - c;
        }
      } else if (alpha_[j] < 0.0) {
        alpha_[j] = 0.0;
        alpha_[i] = sum;
      }
      if (sum > c) {
        if (alpha_[j] > c) {
          alpha_[j] = c;
          alpha_[i] = sum - c;
        }
      } else if (alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = sum;
      }
    }
    const double di = alpha_[i] - old_i;
    const double dj = alpha_[j] - old_j;
    for (Index t = 0; t < l_; ++t) grad_[t] += q(i, t) * di + q(j, t) * dj;
  }

  double compute_rho() const {
    double ub = kInf;
    double lb = -kInf;
    double sum_free = 0.0;
    Index free = 0;
    for (Index t = 0; t < l_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (upper(t)) {
        if (y_[t] == -1) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else if (lower(t)) {
        if (y_[t] == 1) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else {
        ++free;
        sum_free += yg;
      }
    }
    return free > 0 ? sum_free / free : (ub + lb) / 2.0;
  }

  const Eigen::MatrixXd& k_;
  std::vector<signed char> y_;
  const SvmParams& params_;
  Index l_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  double rho_ = 0.0;
  bool converged_ = false;
  std::int64_t iterations_ = 0;
};

}  // namespace

KernelView::KernelView(const Matrix& kernel, std::span<const Index> rows,
                       std::span<const Index> cols, const KernelAccessRecorder* recorder)
    : kernel_(&kernel), rows_(rows), cols_(cols), recorder_(recorder) {}

bool SvmModel::converged() const noexcept {
  return std::all_of(machines.begin(), machines.end(),
                     [](const BinarySvm& m) { return m.converged; });
}

SvmModel train_svm(const KernelView& train, std::span<const int> labels, const SvmParams& params,
                   int num_classes) {
  const Index l = train.rows();
  if (train.cols() != l || static_cast<Index>(labels.size()) != l) {
    throw Error(ErrorCode::ShapeMismatch, "training view must be square and match the labels");
  }
  if (!(params.C > 0.0)) throw Error(ErrorCode::InvalidConfig, "C must be positive");
  if (num_classes <= 0) {
    num_classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }

  SvmModel model;
  model.num_classes = num_classes;
  model.num_train = l;
  for (int a = 0; a < num_classes; ++a) {
    for (int b = a + 1; b < num_classes; ++b) {
      std::vector<Index> members;
      std::vector<signed char> y;
      for (Index t = 0; t < l; ++t) {
        if (labels[t] == a || labels[t] == b) {
          members.push_back(t);
          y.push_back(labels[t] == a ? 1 : -1);
        }
      }
      BinarySvm machine;
      machine.positive = a;
      machine.negative = b;
      const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
      const bool has_neg = std::find(y.begin(), y.end(), -1) != y.end();
      if (!has_pos || !has_neg) {
        // A class absent from training can never win this pair.
        machine.rho = has_pos ? -1.0 : 1.0;
        model.machines.push_back(std::move(machine));
        continue;
      }

      const auto m = static_cast<Eigen::Index>(members.size());
      Eigen::MatrixXd local(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) local(r, c) = train(members[r], members[c]);
      }
      SmoSolver solver(local, y, params);
      solver.solve();
      machine.rho = solver.rho();
      machine.converged = solver.converged();
      machine.iterations = solver.iterations();
      for (Eigen::Index r = 0; r < m; ++r) {
        const double a_r = solver.alpha()[r];
        if (a_r > 0.0) {
          machine.support.push_back(members[r]);
          machine.alpha.push_back(a_r);
          machine.coef.push_back(a_r * y[r]);
        }
      }
      model.machines.push_back(std::move(machine));
    }
  }
  return model;
}

std::vector<std::vector<double>> decision_values(const SvmModel& model, const KernelView& cross) {
  if (cross.cols() != model.num_train) {
    throw Error(ErrorCode::ShapeMismatch,
                "cross kernel has " + std::to_string(cross.cols()) + " columns, model expects " +
                    std::to_string(model.num_train));
  }
  std::vector<std::vector<double>> out(static_cast<std::size_t>(cross.rows()));
  for (Index r = 0; r < cross.rows(); ++r) {
    auto& row = out[r];
    row.reserve(model.machines.size());
    for (const BinarySvm& m : model.machines) {
      double f = -m.rho;
      for (std::size_t s = 0; s < m.support.size(); ++s) f += m.coef[s] * cross(r, m.support[s]);
      row.push_back(f);
    }
  }
  return out;
}

std::vector<int> predict(const SvmModel& model, const KernelView& cross) {
  const auto values = decision_values(model, cross);
  std::vector<int> labels;
  labels.reserve(values.size());
  std::vector<int> votes(static_cast<std::size_t>(model.num_classes));
  for (const auto& row : values) {
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const BinarySvm& m = model.machines[k];
      ++votes[row[k] > 0.0 ? m.positive : m.negative];
    }
    labels.push_back(static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin()));
  }
  return labels;
}

}  // namespace dosgk
