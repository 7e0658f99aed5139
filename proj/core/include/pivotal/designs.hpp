#pragma once

#include <variant>
#include <vector>

#include "pivotal/population.hpp"
#include "pivotal/random.hpp"

namespace pivotal {

/// Without-replacement sample in selection order (F_1 first); unit ids are
/// 1-based and distinct.
struct OrderedSample {
    std::vector<int> units;

    long long size() const { return static_cast<long long>(units.size()); }
};

/// With-replacement sample as per-unit draw counts; counts sum to n.
struct MultiSample {
    std::vector<long long> counts;
};

/// Ordered pivotal sampling: sequential duels along the cumulated
/// probability axis, losers carrying their residual probability forward.
/// Draws exactly one fixed-size sample of n distinct units.
OrderedSample sample_ordered_pivotal(const Population& p, RandomStream& rng);

/// Multinomial sampling: n independent draws, unit k with probability
/// pi_k / n at each draw.
MultiSample sample_multinomial(const Population& p, RandomStream& rng);

/// Ordered pivotal sampling applied to a uniformly permuted copy of the
/// population; selections are reported under the original unit ids.
OrderedSample sample_randomized_pivotal(const Population& p, RandomStream& rng);

enum class FirstStage { ordered_pivotal, multinomial };

/// Two-stage selection: clusters by the chosen design with parameter phi,
/// then one unit per selected cluster (per cluster hit, for the
/// multinomial first stage) with probabilities pi_k / phi_i.
OrderedSample sample_two_stage_pivotal(const ClusteredPopulation<double>& cp,
                                       RandomStream& rng);
MultiSample sample_two_stage_multinomial(const ClusteredPopulation<double>& cp,
                                         RandomStream& rng);
std::variant<OrderedSample, MultiSample> sample_two_stage(
    const ClusteredPopulation<double>& cp, FirstStage first, RandomStream& rng);

}  // namespace pivotal
