#ifndef CASCADELAB_BASELINES_HPP
#define CASCADELAB_BASELINES_HPP

#include <span>
#include <vector>

#include "cascadelab/cascades.hpp"

namespace cascadelab {

/**
  Missing-data-unaware regression baselines: labels are taken from the
  observed sets as-is. Logistic learns one per-node model of activation from
  the seed indicator vector; Linear learns the total observed size.
*/
struct LogisticRow {
  std::vector<double> weights;
  double bias = 0.0;
};

struct LogisticModel {
  int n = 0;
  std::vector<LogisticRow> rows;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct LogisticConfig {
  double l2 = 1e-4;
  double step = 0.25;  // mean-loss GD; curvature is at most (max |S|+1)/4
  int iters = 800;
};

LogisticRow train_logistic_row(const std::vector<IncompleteCascade>& cascades,
                               NodeId target, int n, const LogisticConfig& cfg);
LogisticModel train_logistic(const std::vector<IncompleteCascade>& cascades, int n,
                             const LogisticConfig& cfg, int threads = 0);
LinearModel train_linear(const std::vector<IncompleteCascade>& cascades, int n,
                         double l2);

double logistic_predict_node(const LogisticRow& row, const std::vector<NodeId>& seeds);
std::vector<double> logistic_predict(const LogisticModel& model,
                                     const std::vector<NodeId>& seeds);
double linear_predict_total(const LinearModel& model, const std::vector<NodeId>& seeds);

namespace detail {
// Mean regularized logistic loss and gradient, exposed for numeric checks.
double logistic_objective(const std::vector<std::vector<NodeId>>& rows,
                          std::span<const std::uint8_t> labels,
                          std::span<const double> weights, double bias, double l2);
void logistic_gradient(const std::vector<std::vector<NodeId>>& rows,
                       std::span<const std::uint8_t> labels,
                       std::span<const double> weights, double bias, double l2,
                       std::span<double> grad_w, double& grad_b);
// Solves (A + ridge adjustments) x = b for symmetric positive definite A.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b,
                                   int dim);
}  // namespace detail

}  // namespace cascadelab

#endif
