#pragma once

#include <utility>

#include "euro/rng.hpp"

namespace euro {

// Expected goals of the two sides of one match.  Values below 1e-6 are
// clamped up on construction.
struct MatchIntensities {
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  static MatchIntensities clamped(double l1, double l2);
};

struct OutcomeProbs {
  double win1 = 0;
  double draw = 0;
  double win2 = 0;
};

// P(G1 - G2 = k) for independent Poisson goal counts.  Evaluated as a
// truncated sum over the smaller count; tail error < 1e-12 for lambda <= 8.
double skellam_pmf(int k, double lambda1, double lambda2);

// Same quantity through the Bessel-series form, exposed for cross-checks.
double skellam_pmf_bessel(int k, double lambda1, double lambda2);

// (P(K>0), P(K=0), P(K<0)), summing to 1.
OutcomeProbs outcome_probs(const MatchIntensities& m);

// One Poisson draw.  Inversion by sequential search below lambda = 10;
// larger intensities are split into sub-10 chunks whose draws are summed,
// keeping the sampler exact and platform-deterministic.
int sample_poisson(double lambda, Rng& rng);

std::pair<int, int> sample_score(const MatchIntensities& m, Rng& rng);

}  // namespace euro
