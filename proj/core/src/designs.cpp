#include "pivotal/designs.hpp"

#include <algorithm>
#include <numeric>

#include "pivotal/walk.hpp"

namespace pivotal {

namespace {

// Inverse-CDF pick over candidates in ascending unit order. Falls back to
// the last candidate if rounding pushes the draw past the total.
int pick_candidate(const PivotalWalk<double>& walk, double total, RandomStream& rng) {
    const double u = rng.next_unit() * total;
    double running = 0.0;
    int chosen = 0;
    bool done = false;
    walk.visit_candidates([&](int unit, double w) {
        if (done) return;
        running += w;
        chosen = unit;
        if (u < running) done = true;
    });
    return chosen;
}

int pick_weighted(const std::vector<double>& weights, double total, RandomStream& rng) {
    const double u = rng.next_unit() * total;
    double running = 0.0;
    int chosen = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        running += weights[j];
        chosen = static_cast<int>(j);
        if (u < running) break;
    }
    return chosen;
}

OrderedSample run_walk(const StageLayout<double>& layout, RandomStream& rng) {
    PivotalWalk<double> walk(layout);
    while (!walk.finished()) {
        if (walk.at_final_stage()) {
            walk.choose_final(pick_candidate(walk, walk.candidate_total(), rng));
            break;
        }
        const double total = walk.candidate_total();
        if (total <= 0.0) {
            walk.resolve_duel(0, true);
            continue;
        }
        const int survivor = pick_candidate(walk, total, rng);
        const bool border_wins = rng.next_unit() < walk.border_win_probability();
        walk.resolve_duel(survivor, border_wins);
    }
    return OrderedSample{walk.selection()};
}

}  // namespace

OrderedSample sample_ordered_pivotal(const Population& p, RandomStream& rng) {
    StageLayout<double> layout(p);
    return run_walk(layout, rng);
}

MultiSample sample_multinomial(const Population& p, RandomStream& rng) {
    const long long n = p.sample_size();
    MultiSample s;
    s.counts.assign(p.size(), 0);
    for (long long draw = 0; draw < n; ++draw) {
        const double u = rng.next_unit() * double(n);
        double running = 0.0;
        int chosen = p.size() - 1;
        for (int k = 1; k <= p.size(); ++k) {
            running += p.prob(k);
            if (u < running) {
                chosen = k - 1;
                break;
            }
        }
        ++s.counts[chosen];
    }
    return s;
}

OrderedSample sample_randomized_pivotal(const Population& p, RandomStream& rng) {
    const int N = p.size();
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 1);
    for (int j = N - 1; j > 0; --j) {
        const int r = static_cast<int>(rng.next_unit() * (j + 1));
        std::swap(perm[j], perm[std::min(r, j)]);
    }
    std::vector<double> shuffled(N);
    for (int j = 0; j < N; ++j) shuffled[j] = p.prob(perm[j]);
    Population permuted(std::move(shuffled));
    OrderedSample local = sample_ordered_pivotal(permuted, rng);
    for (int& u : local.units) u = perm[u - 1];
    return local;
}

OrderedSample sample_two_stage_pivotal(const ClusteredPopulation<double>& cp,
                                       RandomStream& rng) {
    std::vector<int> retained;
    Population stage1 = cluster_population(cp, retained);
    OrderedSample clusters = sample_ordered_pivotal(stage1, rng);
    OrderedSample out;
    out.units.reserve(clusters.units.size());
    for (int local : clusters.units) {
        const int c = retained[local - 1];
        const auto& members = cp.members[c];
        const int j = members.size() == 1
                          ? 0
                          : pick_weighted(cp.within[c], 1.0, rng);
        out.units.push_back(members[j]);
    }
    return out;
}

MultiSample sample_two_stage_multinomial(const ClusteredPopulation<double>& cp,
                                         RandomStream& rng) {
    std::vector<int> retained;
    Population stage1 = cluster_population(cp, retained);
    MultiSample clusters = sample_multinomial(stage1, rng);
    MultiSample out;
    out.counts.assign(cp.unit_probs.size(), 0);
    for (std::size_t local = 0; local < clusters.counts.size(); ++local) {
        const int c = retained[local];
        const auto& members = cp.members[c];
        for (long long hit = 0; hit < clusters.counts[local]; ++hit) {
            const int j = members.size() == 1
                              ? 0
                              : pick_weighted(cp.within[c], 1.0, rng);
            ++out.counts[members[j] - 1];
        }
    }
    return out;
}

std::variant<OrderedSample, MultiSample> sample_two_stage(
    const ClusteredPopulation<double>& cp, FirstStage first, RandomStream& rng) {
    if (first == FirstStage::ordered_pivotal) return sample_two_stage_pivotal(cp, rng);
    return sample_two_stage_multinomial(cp, rng);
}

}  // namespace pivotal
