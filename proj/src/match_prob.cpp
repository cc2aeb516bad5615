#include "euro/match_prob.hpp"

#include <cmath>

namespace euro {

namespace {

constexpr double kMinIntensity = 1e-6;
constexpr int kGoalTrunc = 220;  // covers lambda up to ~60 with <1e-14 tail

// poisson_pmf(g) for g = 0..n, computed iteratively.
double poisson_pmf(int g, double lambda) {
  double p = std::exp(-lambda);
  for (int i = 1; i <= g; ++i) p *= lambda / i;
  return p;
}

}  // namespace

MatchIntensities MatchIntensities::clamped(double l1, double l2) {
  return MatchIntensities{l1 < kMinIntensity ? kMinIntensity : l1,
                          l2 < kMinIntensity ? kMinIntensity : l2};
}

double skellam_pmf(int k, double lambda1, double lambda2) {
  // Sum over the second team's goal count m: P(G1 = m + k) * P(G2 = m).
  // For k < 0 use the reflection pmf(k, a, b) = pmf(-k, b, a) so that the
  // two orientations produce bit-identical values.
  if (k < 0) return skellam_pmf(-k, lambda2, lambda1);
  double p1 = poisson_pmf(k, lambda1);  // P(G1 = m + k), starting at m = 0
  double p2 = std::exp(-lambda2);       // P(G2 = m)
  double sum = 0.0;
  for (int m = 0;; ++m) {
    sum += p1 * p2;
    if (m >= kGoalTrunc) break;
    p1 *= lambda1 / (m + k + 1);
    p2 *= lambda2 / (m + 1);
  }
  return sum;
}

double skellam_pmf_bessel(int k, double lambda1, double lambda2) {
  int a = std::abs(k);
  // I_a(x) series: sum_m (x/2)^(2m+a) / (m! (m+a)!)
  double x_half = std::sqrt(lambda1 * lambda2);  // x/2 with x = 2*sqrt(l1*l2)
  double term = 1.0;
  for (int i = 1; i <= a; ++i) term *= x_half / i;  // m = 0 term
  double bessel = term;
  for (int m = 1; m < 400; ++m) {
    term *= x_half * x_half / (static_cast<double>(m) * (m + a));
    bessel += term;
    if (term < bessel * 1e-18) break;
  }
  double ratio = std::pow(lambda1 / lambda2, k / 2.0);
  return std::exp(-(lambda1 + lambda2)) * ratio * bessel;
}

namespace {

// P(K > 0) summed over positive differences.
double win_prob_sum(double lambda1, double lambda2) {
  double sum = 0.0;
  for (int k = 1; k <= kGoalTrunc; ++k) {
    double p = skellam_pmf(k, lambda1, lambda2);
    sum += p;
    if (p < 1e-16 && k > 4) break;
  }
  return sum;
}

}  // namespace

OutcomeProbs outcome_probs(const MatchIntensities& m) {
  OutcomeProbs out;
  out.win1 = win_prob_sum(m.lambda1, m.lambda2);
  out.win2 = win_prob_sum(m.lambda2, m.lambda1);
  out.draw = skellam_pmf(0, m.lambda1, m.lambda2);
  return out;
}

int sample_poisson(double lambda, Rng& rng) {
  if (lambda >= 10.0) {
    int chunks = static_cast<int>(lambda / 9.0) + 1;
    double sub = lambda / chunks;
    int total = 0;
    for (int c = 0; c < chunks; ++c) total += sample_poisson(sub, rng);
    return total;
  }
  double u = rng.next_double();
  double p = std::exp(-lambda);
  double cum = p;
  int x = 0;
  while (u > cum && x < 400) {
    ++x;
    p *= lambda / x;
    cum += p;
  }
  return x;
}

std::pair<int, int> sample_score(const MatchIntensities& m, Rng& rng) {
  int g1 = sample_poisson(m.lambda1, rng);
  int g2 = sample_poisson(m.lambda2, rng);
  return {g1, g2};
}

}  // namespace euro
