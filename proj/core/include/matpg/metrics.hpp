#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace matpg {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-generation mean and standard deviation of a task's score across
/// seeds. `stddev` uses the population (n denominator) convention.
struct TrainingCurve {
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Area-under-curve difficulty: sum_i (mean_i - stddev_i) / mean_n. Higher
/// values indicate easier tasks.
double auc_difficulty(const TrainingCurve& curve);

/// Divides every AUC by the maximum, yielding coefficients in (0, 1].
std::vector<double> normalize_difficulty(std::span<const double> aucs);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Two-tailed Welch's t-test with the Welch-Satterthwaite degrees of
/// freedom. Degenerate zero-variance samples give p = 1 for equal means and
/// p = 0 otherwise.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

/// Cohen's d with the pooled (n-1 weighted) standard deviation. Zero pooled
/// deviation gives 0 for equal means, else a signed infinity.
double cohens_d(std::span<const double> a, std::span<const double> b);

double bonferroni(double alpha, int n_tests);

/// Cross-task score matrix: raw[i][j] is the score of the population
/// trained on task i evaluated on task j; normalized cells divide by the
/// trained baseline of the *evaluated* task.
struct CrossTaskMatrix {
  std::size_t n = 0;
  std::vector<double> raw;         // row-major trained x evaluated
  std::vector<double> normalized;  // NaN where the baseline is zero
  double raw_at(std::size_t i, std::size_t j) const { return raw[i * n + j]; }
  double normalized_at(std::size_t i, std::size_t j) const {
    return normalized[i * n + j];
  }
};

CrossTaskMatrix cross_task_matrix(const std::vector<std::vector<double>>& raw,
                                  std::span<const double> baselines);

/// CDF of Student's t distribution, evaluated through the regularized
/// incomplete beta function (continued fraction, ~1e-12 accuracy).
double student_t_cdf(double t, double df);
double regularized_incomplete_beta(double a, double b, double x);

double sample_mean(std::span<const double> xs);
/// Sample variance (n-1 denominator).
double sample_variance(std::span<const double> xs);

}  // namespace matpg
