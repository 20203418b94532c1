#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"
#include "cmx/features.hpp"

namespace cmx {

enum class PenaltyKind { L2, L1, ElasticNet };

inline std::string to_string(PenaltyKind p) {
  switch (p) {
    case PenaltyKind::L2: return "l2";
    case PenaltyKind::L1: return "l1";
    case PenaltyKind::ElasticNet: return "elasticnet";
  }
  return "?";
}

inline PenaltyKind parse_penalty(std::string_view s) {
  if (s == "l2") return PenaltyKind::L2;
  if (s == "l1") return PenaltyKind::L1;
  if (s == "elasticnet") return PenaltyKind::ElasticNet;
  throw UsageError("unknown penalty '" + std::string(s) + "'");
}

struct SgdHyper {
  double learning_rate = 1e-4;  // constant
  double alpha = 1e-4;          // regularization strength
  PenaltyKind penalty = PenaltyKind::L2;
  double l1_ratio = 0.15;  // elasticnet mix
  int epochs = 20;
  std::uint64_t shuffle_seed = 0;

  void validate() const {
    if (learning_rate <= 0) throw UsageError("sgd: learning_rate must be > 0");
    if (alpha < 0) throw UsageError("sgd: alpha must be >= 0");
    if (epochs < 1) throw UsageError("sgd: epochs must be >= 1");
  }
};

struct LogRegHyper {
  double C = 0.01;
  double tol = 1e-6;  // gradient-norm tolerance
  int max_iter = 200;

  void validate() const {
    if (C <= 0) throw UsageError("logreg: C must be > 0");
    if (tol <= 0) throw UsageError("logreg: tol must be > 0");
  }
};

enum class ModelKind { SgdOvr, LogRegMultinomial };

struct LinearModel {
  ModelKind kind = ModelKind::SgdOvr;
  std::vector<SentimentLabel> labels;    // order of first appearance
  std::uint32_t n_columns = 0;
  std::vector<std::vector<double>> weights;  // per label, size n_columns
  std::vector<double> intercepts;            // per label
  bool converged = true;

  double decision(std::size_t k, const FeatureVector& x) const {
    double z = intercepts[k];
    for (const auto& [col, value] : x.entries) z += weights[k][col] * value;
    return z;
  }
};

// Piecewise margin loss: (1-z)^2 clipped at 0 for z >= -1, linear -4z below.
// Continuous (and once differentiable) at the joins.
inline std::pair<double, double> modified_huber(double z) {
  if (z >= 1.0) return {0.0, 0.0};
  if (z >= -1.0) {
    const double d = 1.0 - z;
    return {d * d, -2.0 * d};
  }
  return {-4.0 * z, -4.0};
}

struct Dataset {
  const std::vector<FeatureVector>* X = nullptr;
  std::vector<int> y;  // label indices into `labels`
  std::vector<SentimentLabel> labels;
  std::uint32_t n_columns = 0;
};

// Maps raw labels to dense indices in order of first appearance.
inline Dataset make_dataset(const std::vector<FeatureVector>& X,
                            const std::vector<SentimentLabel>& y,
                            std::uint32_t n_columns) {
  if (X.size() != y.size()) throw UsageError("make_dataset: size mismatch");
  Dataset ds;
  ds.X = &X;
  ds.n_columns = n_columns;
  for (SentimentLabel label : y) {
    auto it = std::find(ds.labels.begin(), ds.labels.end(), label);
    if (it == ds.labels.end()) {
      ds.labels.push_back(label);
      ds.y.push_back(static_cast<int>(ds.labels.size()) - 1);
    } else {
      ds.y.push_back(static_cast<int>(it - ds.labels.begin()));
    }
  }
  return ds;
}

namespace detail {

// One binary modified-Huber SGD problem (+1 vs rest). L2 handled by a lazy
// weight-scale factor, L1 by the cumulative-penalty scheme, so each sample
// costs O(nnz).
inline void sgd_binary(const Dataset& ds, int positive_label,
                       const SgdHyper& hyper, std::vector<double>& w_out,
                       double& b_out, std::mt19937_64& rng) {
  const std::size_t n = ds.X->size();
  const std::uint32_t d = ds.n_columns;
  const double eta = hyper.learning_rate;
  const double alpha_l2 =
      hyper.penalty == PenaltyKind::L2
          ? hyper.alpha
          : (hyper.penalty == PenaltyKind::ElasticNet
                 ? hyper.alpha * (1.0 - hyper.l1_ratio)
                 : 0.0);
  const double alpha_l1 =
      hyper.penalty == PenaltyKind::L1
          ? hyper.alpha
          : (hyper.penalty == PenaltyKind::ElasticNet
                 ? hyper.alpha * hyper.l1_ratio
                 : 0.0);

  std::vector<double> v(d, 0.0);   // w = scale * v
  std::vector<double> q(d, 0.0);   // applied cumulative L1 penalty (on w scale)
  double scale = 1.0;
  double u = 0.0;                  // total available L1 penalty
  double b = 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto apply_l1 = [&](std::uint32_t col) {
    if (alpha_l1 == 0.0) return;
    const double w = scale * v[col];
    double nw;
    if (w > 0) nw = std::max(0.0, w - (u + q[col]));
    else nw = std::min(0.0, w + (u - q[col]));
    q[col] += nw - w;
    v[col] = nw / scale;
  };

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const FeatureVector& x = (*ds.X)[idx];
      const double y = ds.y[idx] == positive_label ? 1.0 : -1.0;
      double z = b;
      for (const auto& [col, value] : x.entries)
        z += scale * v[col] * value;
      z *= y;
      const double dloss = modified_huber(z).second;
      // lazy L2 shrink on the whole vector
      if (alpha_l2 > 0.0) {
        scale *= (1.0 - eta * alpha_l2);
        if (scale < 1e-9) {  // renormalize to keep v finite
          for (double& vi : v) vi *= scale;
          if (alpha_l1 > 0.0)
            ;  // q is tracked on the w scale, unaffected
          scale = 1.0;
        }
      }
      if (dloss != 0.0) {
        const double g = eta * dloss * y;
        for (const auto& [col, value] : x.entries) v[col] -= g * value / scale;
        b -= g;
      }
      u += eta * alpha_l1;
      for (const auto& [col, value] : x.entries) {
        (void)value;
        apply_l1(col);
      }
    }
  }
  w_out.assign(d, 0.0);
  for (std::uint32_t c = 0; c < d; ++c) w_out[c] = scale * v[c];
  b_out = b;
}

}  // namespace detail

// One-vs-rest SGD with modified Huber loss; deterministic for a fixed seed.
inline LinearModel train_sgd(const std::vector<FeatureVector>& X,
                             const std::vector<SentimentLabel>& y,
                             std::uint32_t n_columns, const SgdHyper& hyper) {
  hyper.validate();
  Dataset ds = make_dataset(X, y, n_columns);
  if (ds.labels.size() < 2)
    throw UsageError("train_sgd: need at least 2 distinct labels");
  LinearModel model;
  model.kind = ModelKind::SgdOvr;
  model.labels = ds.labels;
  model.n_columns = n_columns;
  model.weights.resize(ds.labels.size());
  model.intercepts.resize(ds.labels.size(), 0.0);
  for (std::size_t k = 0; k < ds.labels.size(); ++k) {
    std::mt19937_64 rng(hyper.shuffle_seed + k);
    detail::sgd_binary(ds, static_cast<int>(k), hyper, model.weights[k],
                       model.intercepts[k], rng);
  }
  return model;
}

namespace detail {

// Flat parameter block for the multinomial solver: K rows of D weights
// followed by K intercepts.
struct LogRegProblem {
  const Dataset& ds;
  double inv_C;
  std::size_t K, D;

  std::size_t dim() const { return K * D + K; }

  void probabilities(const std::vector<double>& theta, std::size_t i,
                     std::vector<double>& p) const {
    const FeatureVector& x = (*ds.X)[i];
    double max_z = -1e300;
    for (std::size_t k = 0; k < K; ++k) {
      double z = theta[K * D + k];
      const double* w = theta.data() + k * D;
      for (const auto& [col, value] : x.entries) z += w[col] * value;
      p[k] = z;
      max_z = std::max(max_z, z);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      p[k] = std::exp(p[k] - max_z);
      sum += p[k];
    }
    for (std::size_t k = 0; k < K; ++k) p[k] /= sum;
  }

  double objective(const std::vector<double>& theta) const {
    const std::size_t n = ds.X->size();
    std::vector<double> p(K);
    double nll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      probabilities(theta, i, p);
      nll -= std::log(std::max(p[ds.y[i]], 1e-300));
    }
    double reg = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double* w = theta.data() + k * D;
      for (std::size_t c = 0; c < D; ++c) reg += w[c] * w[c];
    }
    return nll + 0.5 * inv_C * reg;
  }

  void gradient(const std::vector<double>& theta, std::vector<double>& g) const {
    g.assign(dim(), 0.0);
    const std::size_t n = ds.X->size();
    std::vector<double> p(K);
    for (std::size_t i = 0; i < n; ++i) {
      probabilities(theta, i, p);
      const FeatureVector& x = (*ds.X)[i];
      for (std::size_t k = 0; k < K; ++k) {
        const double coeff = p[k] - (ds.y[i] == static_cast<int>(k) ? 1.0 : 0.0);
        if (coeff == 0.0) continue;
        double* gk = g.data() + k * D;
        for (const auto& [col, value] : x.entries) gk[col] += coeff * value;
        g[K * D + k] += coeff;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      double* gk = g.data() + k * D;
      const double* w = theta.data() + k * D;
      for (std::size_t c = 0; c < D; ++c) gk[c] += inv_C * w[c];
    }
  }

  // Gauss-Newton (exact here) Hessian-vector product of the NLL + ridge.
  void hessian_vec(const std::vector<double>& theta, const std::vector<double>& v,
                   std::vector<double>& hv) const {
    hv.assign(dim(), 0.0);
    const std::size_t n = ds.X->size();
    std::vector<double> p(K), a(K);
    for (std::size_t i = 0; i < n; ++i) {
      probabilities(theta, i, p);
      const FeatureVector& x = (*ds.X)[i];
      double m = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        double ak = v[K * D + k];
        const double* vk = v.data() + k * D;
        for (const auto& [col, value] : x.entries) ak += vk[col] * value;
        a[k] = ak;
      }
      for (std::size_t k = 0; k < K; ++k) m += p[k] * a[k];
      for (std::size_t k = 0; k < K; ++k) {
        const double coeff = p[k] * (a[k] - m);
        if (coeff == 0.0) continue;
        double* hk = hv.data() + k * D;
        for (const auto& [col, value] : x.entries) hk[col] += coeff * value;
        hv[K * D + k] += coeff;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      double* hk = hv.data() + k * D;
      const double* vk = v.data() + k * D;
      for (std::size_t c = 0; c < D; ++c) hk[c] += inv_C * vk[c];
    }
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Truncated CG for H d = -g.
inline std::vector<double> newton_cg_direction(const LogRegProblem& prob,
                                               const std::vector<double>& theta,
                                               const std::vector<double>& g) {
  const std::size_t dim = prob.dim();
  std::vector<double> d(dim, 0.0), r(dim), p(dim), hp(dim);
  for (std::size_t i = 0; i < dim; ++i) r[i] = -g[i];
  p = r;
  double rs = dot(r, r);
  const double gnorm = std::sqrt(rs);
  const double cg_tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
  const int max_cg = 200;
  for (int it = 0; it < max_cg && std::sqrt(rs) > cg_tol; ++it) {
    prob.hessian_vec(theta, p, hp);
    const double php = dot(p, hp);
    if (php <= 1e-16) break;  // numerically flat curvature
    const double alpha = rs / php;
    for (std::size_t i = 0; i < dim; ++i) {
      d[i] += alpha * p[i];
      r[i] -= alpha * hp[i];
    }
    const double rs_new = dot(r, r);
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t i = 0; i < dim; ++i) p[i] = r[i] + beta * p[i];
  }
  if (dot(d, d) == 0.0) {  // fall back to steepest descent
    for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
  }
  return d;
}

}  // namespace detail

// Multinomial logistic regression with ridge penalty 1/(2C)*||W||^2
// (intercepts unpenalized), solved by Newton-CG with Armijo backtracking.
// The objective is convex; accepted steps never increase it.
inline LinearModel train_logreg(const std::vector<FeatureVector>& X,
                                const std::vector<SentimentLabel>& y,
                                std::uint32_t n_columns,
                                const LogRegHyper& hyper) {
  hyper.validate();
  Dataset ds = make_dataset(X, y, n_columns);
  if (ds.labels.size() < 2)
    throw UsageError("train_logreg: need at least 2 distinct labels");
  const std::size_t K = ds.labels.size();
  const std::size_t D = n_columns;
  detail::LogRegProblem prob{ds, 1.0 / hyper.C, K, D};

  std::vector<double> theta(prob.dim(), 0.0), g, d;
  double f = prob.objective(theta);
  bool converged = false;
  for (int iter = 0; iter < hyper.max_iter; ++iter) {
    prob.gradient(theta, g);
    const double gnorm = std::sqrt(detail::dot(g, g));
    if (gnorm <= hyper.tol) {
      converged = true;
      break;
    }
    d = detail::newton_cg_direction(prob, theta, g);
    const double slope = detail::dot(g, d);
    double step = 1.0;
    std::vector<double> trial(theta.size());
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < theta.size(); ++i)
        trial[i] = theta[i] + step * d[i];
      const double f_trial = prob.objective(trial);
      if (f_trial <= f + 1e-4 * step * slope) {
        theta.swap(trial);
        f = f_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress possible at this scale
  }
  if (!converged) {
    prob.gradient(theta, g);
    converged = std::sqrt(detail::dot(g, g)) <= hyper.tol;
  }

  LinearModel model;
  model.kind = ModelKind::LogRegMultinomial;
  model.labels = ds.labels;
  model.n_columns = n_columns;
  model.converged = converged;
  model.weights.resize(K);
  model.intercepts.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    model.weights[k].assign(theta.begin() + k * D, theta.begin() + (k + 1) * D);
    model.intercepts[k] = theta[K * D + k];
  }
  return model;
}

struct Prediction {
  SentimentLabel label;
  std::vector<double> scores;  // per label; softmax probs for logreg
};

inline Prediction predict(const LinearModel& model, const FeatureVector& x) {
  const std::size_t K = model.labels.size();
  Prediction out{model.labels[0], std::vector<double>(K)};
  for (std::size_t k = 0; k < K; ++k) out.scores[k] = model.decision(k, x);
  if (model.kind == ModelKind::LogRegMultinomial) {
    const double max_z = *std::max_element(out.scores.begin(), out.scores.end());
    double sum = 0.0;
    for (double& s : out.scores) {
      s = std::exp(s - max_z);
      sum += s;
    }
    for (double& s : out.scores) s /= sum;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < K; ++k)
    if (out.scores[k] > out.scores[best]) best = k;  // ties keep label order
  out.label = model.labels[best];
  return out;
}

}  // namespace cmx
