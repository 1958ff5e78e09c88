#pragma once

#include "matchelicit/rng.hpp"
#include "matchelicit/scoremodel.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

// Monte-Carlo estimate of the distribution over optimal matchings: draws
// num_samples complete score matrices from the fitted model, solves each
// exactly, and averages the match matrices in a fixed order. Entry (r,p) of
// the result estimates the probability that the pair is matched.
ProbabilisticMatching estimate_prob_matching(const BpmfModel& model,
                                             const SuitabilityMatrix& scores,
                                             const MatchConstraints& constraints,
                                             int num_samples, RngStream& rng);

// Same estimator with entries drawn independently as N(mean, variance) from
// a pinned posterior instead of a fitted model; used by the toy demo and by
// tests that force specific variances.
ProbabilisticMatching estimate_prob_matching_gaussian(const ScorePosterior& posterior,
                                                      const MatchConstraints& constraints,
                                                      int num_samples, RngStream& rng);

// The single matching solved on the posterior-mean grid (observed entries are
// their observed values by the ScorePosterior contract).
Matching map_matching(const ScorePosterior& posterior, const MatchConstraints& constraints);

}  // namespace matchelicit
