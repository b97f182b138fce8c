#include "cascadelab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cascadelab/threads.hpp"

namespace cascadelab {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

namespace detail {

double logistic_objective(const std::vector<std::vector<NodeId>>& rows,
                          std::span<const std::uint8_t> labels,
                          std::span<const double> weights, double bias, double l2) {
  const double m = static_cast<double>(rows.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = bias;
    for (NodeId u : rows[i]) z += weights[u];
    // log(1 + exp(-z)) for y=1, log(1 + exp(z)) for y=0, stably.
    double margin = labels[i] ? z : -z;
    loss += margin > 0 ? std::log1p(std::exp(-margin))
                       : -margin + std::log1p(std::exp(margin));
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss / m + 0.5 * l2 * reg;
}

void logistic_gradient(const std::vector<std::vector<NodeId>>& rows,
                       std::span<const std::uint8_t> labels,
                       std::span<const double> weights, double bias, double l2,
                       std::span<double> grad_w, double& grad_b) {
  const double m = static_cast<double>(rows.size());
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = bias;
    for (NodeId u : rows[i]) z += weights[u];
    double d = (sigmoid(z) - labels[i]) / m;
    grad_b += d;
    for (NodeId u : rows[i]) grad_w[u] += d;
  }
  for (std::size_t u = 0; u < grad_w.size(); ++u) grad_w[u] += l2 * weights[u];
}

std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b,
                                   int dim) {
  // In-place lower Cholesky of the row-major dim x dim matrix.
  for (int j = 0; j < dim; ++j) {
    double d = a[j * dim + j];
    for (int k = 0; k < j; ++k) d -= a[j * dim + k] * a[j * dim + k];
    if (!(d > 1e-12))
      throw std::runtime_error("normal equations singular; increase l2");
    d = std::sqrt(d);
    a[j * dim + j] = d;
    for (int i = j + 1; i < dim; ++i) {
      double s = a[i * dim + j];
      for (int k = 0; k < j; ++k) s -= a[i * dim + k] * a[j * dim + k];
      a[i * dim + j] = s / d;
    }
  }
  for (int i = 0; i < dim; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a[i * dim + k] * b[k];
    b[i] = s / a[i * dim + i];
  }
  for (int i = dim - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < dim; ++k) s -= a[k * dim + i] * b[k];
    b[i] = s / a[i * dim + i];
  }
  return b;
}

}  // namespace detail

LogisticRow train_logistic_row(const std::vector<IncompleteCascade>& cascades,
                               NodeId target, int n, const LogisticConfig& cfg) {
  if (cascades.empty()) throw std::invalid_argument("logistic: no cascades");
  std::vector<std::vector<NodeId>> rows;
  std::vector<std::uint8_t> labels;
  rows.reserve(cascades.size());
  labels.reserve(cascades.size());
  for (const IncompleteCascade& c : cascades) {
    rows.push_back(c.seeds);
    labels.push_back(
        std::binary_search(c.observed.begin(), c.observed.end(), target) ? 1 : 0);
  }

  LogisticRow row;
  row.weights.assign(n, 0.0);
  std::vector<double> grad_w(n, 0.0);
  double grad_b = 0.0;
  for (int it = 0; it < cfg.iters; ++it) {
    detail::logistic_gradient(rows, labels, row.weights, row.bias, cfg.l2, grad_w,
                              grad_b);
    for (int u = 0; u < n; ++u) row.weights[u] -= cfg.step * grad_w[u];
    row.bias -= cfg.step * grad_b;
  }
  return row;
}

LogisticModel train_logistic(const std::vector<IncompleteCascade>& cascades, int n,
                             const LogisticConfig& cfg, int threads) {
  LogisticModel model;
  model.n = n;
  model.rows.resize(n);
  const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (NodeId v = 0; v < n; ++v)
    model.rows[v] = train_logistic_row(cascades, v, n, cfg);
#else
  (void)nthreads;
  for (NodeId v = 0; v < n; ++v)
    model.rows[v] = train_logistic_row(cascades, v, n, cfg);
#endif
  return model;
}

LinearModel train_linear(const std::vector<IncompleteCascade>& cascades, int n,
                         double l2) {
  if (cascades.empty()) throw std::invalid_argument("linear: no cascades");
  if (l2 < 0.0) throw std::invalid_argument("linear: negative l2");
  const int dim = n + 1;  // weights then bias; the bias is not penalized
  std::vector<double> ata(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> atb(dim, 0.0);
  std::vector<double> x(dim, 0.0);
  for (const IncompleteCascade& c : cascades) {
    std::fill(x.begin(), x.end(), 0.0);
    for (NodeId u : c.seeds) x[u] = 1.0;
    x[n] = 1.0;
    const double y = static_cast<double>(c.observed.size());
    for (NodeId u : c.seeds) {
      for (NodeId w : c.seeds) ata[static_cast<std::size_t>(u) * dim + w] += 1.0;
      ata[static_cast<std::size_t>(u) * dim + n] += 1.0;
      ata[static_cast<std::size_t>(n) * dim + u] += 1.0;
      atb[u] += y;
    }
    ata[static_cast<std::size_t>(n) * dim + n] += 1.0;
    atb[n] += y;
  }
  for (int u = 0; u < n; ++u) ata[static_cast<std::size_t>(u) * dim + u] += l2;

  std::vector<double> sol = detail::cholesky_solve(std::move(ata), std::move(atb), dim);
  LinearModel model;
  model.bias = sol[n];
  sol.resize(n);
  model.weights = std::move(sol);
  return model;
}

double logistic_predict_node(const LogisticRow& row, const std::vector<NodeId>& seeds) {
  double z = row.bias;
  for (NodeId u : seeds) z += row.weights[u];
  return sigmoid(z);
}

std::vector<double> logistic_predict(const LogisticModel& model,
                                     const std::vector<NodeId>& seeds) {
  std::vector<double> out(model.n);
  for (NodeId v = 0; v < model.n; ++v)
    out[v] = logistic_predict_node(model.rows[v], seeds);
  return out;
}

double linear_predict_total(const LinearModel& model, const std::vector<NodeId>& seeds) {
  double total = model.bias;
  for (NodeId u : seeds) total += model.weights[u];
  return total;
}

}  // namespace cascadelab
