#include "matpg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace matpg {

double auc_difficulty(const TrainingCurve& curve) {
  if (curve.mean.empty() || curve.mean.size() != curve.stddev.size()) {
    throw MetricError("training curve must be non-empty and rectangular");
  }
  const double final_mean = curve.mean.back();
  if (final_mean == 0.0) {
    throw MetricError("AUC difficulty undefined: final mean score is zero");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.mean.size(); ++i) {
    sum += curve.mean[i] - curve.stddev[i];
  }
  return sum / final_mean;
}

std::vector<double> normalize_difficulty(std::span<const double> aucs) {
  if (aucs.empty()) {
    throw MetricError("no AUC values to normalize");
  }
  const double top = *std::max_element(aucs.begin(), aucs.end());
  if (!(top > 0.0)) {
    throw MetricError("difficulty normalization needs a positive maximum");
  }
  std::vector<double> out(aucs.size());
  for (std::size_t i = 0; i < aucs.size(); ++i) {
    out[i] = aucs[i] / top;
  }
  return out;
}

double sample_mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return ss / static_cast<double>(xs.size() - 1);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  // Symmetry keeps the continued fraction in its fast-converging region.
  if (x > (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
  }

  const double log_prefix = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);

  // Lentz's continued fraction.
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < kTiny) {
    d = kTiny;
  }
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= 400; ++m) {
    const double dm = static_cast<double>(m);
    // even step
    double numerator = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + numerator * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + numerator / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    result *= d * c;
    // odd step
    numerator = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + numerator * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + numerator / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      break;
    }
  }
  return std::exp(log_prefix) * result / a;
}

double student_t_cdf(double t, double df) {
  if (std::isnan(t) || !(df > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (std::isinf(t)) {
    return t > 0 ? 1.0 : 0.0;
  }
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw MetricError("welch_t needs at least two samples per group");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);

  WelchResult result;
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    // Degenerate zero-variance samples.
    result.t = ma == mb ? 0.0
                        : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    result.df = na + nb - 2.0;
    result.p = ma == mb ? 1.0 : 0.0;
    return result;
  }
  result.t = (ma - mb) / std::sqrt(se2);
  result.df = se2 * se2 /
              ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  // two-tailed p in its symmetric closed form, exact under t <-> -t
  const double x = result.df / (result.df + result.t * result.t);
  result.p = std::min(1.0, regularized_incomplete_beta(result.df / 2.0, 0.5, x));
  return result;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw MetricError("cohens_d needs at least two samples per group");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  const double pooled =
      std::sqrt(((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0));
  if (pooled == 0.0) {
    return ma == mb ? 0.0
                    : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
  }
  return (ma - mb) / pooled;
}

double bonferroni(double alpha, int n_tests) {
  if (n_tests < 1) {
    throw MetricError("bonferroni needs at least one test");
  }
  return alpha / static_cast<double>(n_tests);
}

CrossTaskMatrix cross_task_matrix(const std::vector<std::vector<double>>& raw,
                                  std::span<const double> baselines) {
  CrossTaskMatrix m;
  m.n = raw.size();
  if (baselines.size() != m.n) {
    throw MetricError("baseline count must match the task count");
  }
  m.raw.resize(m.n * m.n);
  m.normalized.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    if (raw[i].size() != m.n) {
      throw MetricError("cross-task matrix must be square");
    }
    for (std::size_t j = 0; j < m.n; ++j) {
      m.raw[i * m.n + j] = raw[i][j];
      m.normalized[i * m.n + j] =
          baselines[j] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                              : raw[i][j] / baselines[j];
    }
  }
  return m;
}

}  // namespace matpg
