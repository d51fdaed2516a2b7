#include "neuroirl/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace neuroirl {

MispredictionScore misprediction(const Policy& learned, const Policy& expert) {
  if (learned.actions.size() != expert.actions.size())
    throw std::invalid_argument("policy size mismatch");
  if (learned.actions.empty()) throw std::invalid_argument("empty policy");
  long long mismatched = 0;
  for (std::size_t s = 0; s < learned.actions.size(); ++s) {
    if (learned.actions[s] != expert.actions[s]) ++mismatched;
  }
  return {static_cast<double>(mismatched) / static_cast<double>(learned.actions.size())};
}

MispredictionScore misprediction_stochastic(
    const std::vector<std::array<double, kNumActions>>& action_dist,
    const Policy& expert) {
  if (action_dist.size() != expert.actions.size())
    throw std::invalid_argument("policy size mismatch");
  if (action_dist.empty()) throw std::invalid_argument("empty policy");
  long double matched = 0.0L;
  for (std::size_t s = 0; s < action_dist.size(); ++s) {
    matched += action_dist[s][static_cast<int>(expert.actions[s])];
  }
  const long double mean = matched / static_cast<long double>(action_dist.size());
  return {static_cast<double>(1.0L - mean)};
}

namespace {

// Continued fraction for I_x(a,b), modified Lentz iteration.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIters = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIters; ++m) {
    const int m2 = 2 * m;
    double num = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  return h;  // converged to working precision long before this in practice
}

double sample_mean(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
  double total = 0.0;
  for (double x : xs) total += (x - mean) * (x - mean);
  return total / static_cast<double>(xs.size() - 1);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

TTestResult two_tailed_t_test(std::span<const double> sample_a,
                              std::span<const double> sample_b) {
  if (sample_a.size() < 2 || sample_b.size() < 2)
    throw std::invalid_argument("each sample needs at least two observations");

  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  const double ma = sample_mean(sample_a), mb = sample_mean(sample_b);
  const double va = sample_variance(sample_a, ma), vb = sample_variance(sample_b, mb);

  TTestResult result;
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    // Both samples constant. Equal means: no evidence of a difference.
    if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
    result.t_statistic = ma > mb ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
    result.degrees_of_freedom = na + nb - 2.0;
    result.p_value = 0.0;
    return result;
  }

  result.t_statistic = (ma - mb) / std::sqrt(se2);
  const double ra = va / na, rb = vb / nb;
  result.degrees_of_freedom =
      se2 * se2 / (ra * ra / (na - 1.0) + rb * rb / (nb - 1.0));

  const double t2 = result.t_statistic * result.t_statistic;
  const double nu = result.degrees_of_freedom;
  result.p_value = regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t2));
  return result;
}

}  // namespace neuroirl
