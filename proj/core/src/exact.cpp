#include "pivotal/exact.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <numeric>
#include <ostream>

namespace pivotal {

namespace {

void check_cap(const BasicPopulation<Rational>& p, const EnumerationLimits& limits) {
    if (p.size() > limits.max_units)
        throw EnumerationTooLarge("population of " + std::to_string(p.size()) +
                                  " units exceeds the enumeration cap of " +
                                  std::to_string(limits.max_units));
}

DesignDistribution from_map(DesignKind kind, bool with_replacement, int population_size,
                            long long sample_size,
                            std::map<std::vector<int>, Rational>&& agg) {
    DesignDistribution d;
    d.kind = kind;
    d.with_replacement = with_replacement;
    d.population_size = population_size;
    d.sample_size = sample_size;
    d.outcomes.reserve(agg.size());
    for (auto& [key, prob] : agg)
        if (!prob.is_zero()) d.outcomes.emplace_back(key, prob);
    return d;
}

Rational probability_total(const DesignDistribution& d) {
    Rational t;
    for (const auto& [o, p] : d.outcomes) t += p;
    return t;
}

// Expands n draws into per-unit counts over units [first..N], multiplying
// the multinomial probability along the way.
void multinomial_rec(const RationalPopulation& p, int unit, long long left,
                     const Rational& partial, std::vector<int>& counts,
                     std::map<std::vector<int>, Rational>& agg,
                     const std::vector<Rational>& draw_prob) {
    const int N = p.size();
    if (unit == N) {
        // all remaining draws land on the last unit
        Rational prob = partial;
        for (long long j = 0; j < left; ++j)
            prob *= draw_prob[N - 1] / Rational(j + 1);
        counts[N - 1] = static_cast<int>(left);
        agg[counts] += prob;
        counts[N - 1] = 0;
        return;
    }
    Rational prob = partial;
    for (long long c = 0; c <= left; ++c) {
        counts[unit - 1] = static_cast<int>(c);
        multinomial_rec(p, unit + 1, left - c, prob, counts, agg, draw_prob);
        prob *= draw_prob[unit - 1] / Rational(c + 1);
    }
    counts[unit - 1] = 0;
}

double compositions_estimate(long long n, int N) {
    double v = 1.0;
    for (int j = 1; j < N; ++j) v *= double(n + j) / double(j);
    return v;
}

}  // namespace

DesignDistribution enumerate_ordered_pivotal(const RationalPopulation& p,
                                             EnumerationLimits limits) {
    check_cap(p, limits);
    std::map<std::vector<int>, Rational> agg;
    for_each_pivotal_path(p, [&](const std::vector<int>& sel, const Rational& prob) {
        agg[sel] += prob;
    });
    auto d = from_map(DesignKind::ordered_pivotal, false, p.size(), p.sample_size(),
                      std::move(agg));
    assert(probability_total(d) == Rational(1));
    return d;
}

DesignDistribution enumerate_multinomial(const RationalPopulation& p,
                                         EnumerationLimits limits) {
    check_cap(p, limits);
    if (compositions_estimate(p.sample_size(), p.size()) > double(limits.max_outcomes))
        throw EnumerationTooLarge("too many draw-count vectors to enumerate");
    const long long n = p.sample_size();
    std::vector<Rational> draw_prob;
    draw_prob.reserve(p.size());
    for (int k = 1; k <= p.size(); ++k) draw_prob.push_back(p.prob(k) / Rational(n));
    Rational n_factorial(1);
    for (long long j = 2; j <= n; ++j) n_factorial *= Rational(j);

    std::map<std::vector<int>, Rational> agg;
    std::vector<int> counts(p.size(), 0);
    multinomial_rec(p, 1, n, n_factorial, counts, agg, draw_prob);
    auto d = from_map(DesignKind::multinomial, true, p.size(), n, std::move(agg));
    assert(probability_total(d) == Rational(1));
    return d;
}

DesignDistribution enumerate_randomized_pivotal(const RationalPopulation& p,
                                                EnumerationLimits limits) {
    check_cap(p, limits);
    const int N = p.size();
    if (N > 8)
        throw EnumerationTooLarge(
            "randomized-design enumeration sums over all permutations; capped at 8 units");
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 1);
    Rational permutations(1);
    for (int j = 2; j <= N; ++j) permutations *= Rational(j);
    const Rational weight = Rational(1) / permutations;

    std::map<std::vector<int>, Rational> agg;
    std::vector<int> mapped;
    do {
        std::vector<Rational> shuffled;
        shuffled.reserve(N);
        for (int j = 0; j < N; ++j) shuffled.push_back(p.prob(perm[j]));
        RationalPopulation permuted(std::move(shuffled));
        for_each_pivotal_path(permuted, [&](const std::vector<int>& sel, const Rational& prob) {
            mapped.clear();
            for (int pos : sel) mapped.push_back(perm[pos - 1]);
            agg[mapped] += prob * weight;
        });
    } while (std::next_permutation(perm.begin(), perm.end()));
    auto d = from_map(DesignKind::randomized_pivotal, false, N, p.sample_size(),
                      std::move(agg));
    assert(probability_total(d) == Rational(1));
    return d;
}

DesignDistribution enumerate_cluster_pivotal(const ClusteredPopulation<Rational>& cp,
                                             EnumerationLimits limits) {
    std::vector<int> retained;
    RationalPopulation stage1 = cluster_population(cp, retained);
    DesignDistribution local = enumerate_ordered_pivotal(stage1, limits);
    std::map<std::vector<int>, Rational> agg;
    for (auto& [sel, prob] : local.outcomes) {
        std::vector<int> mapped;
        mapped.reserve(sel.size());
        for (int c : sel) mapped.push_back(retained[c - 1] + 1);
        agg[std::move(mapped)] += prob;
    }
    return from_map(DesignKind::ordered_pivotal, false, cp.cluster_count(),
                    local.sample_size, std::move(agg));
}

DesignDistribution enumerate_cluster_multinomial(const ClusteredPopulation<Rational>& cp,
                                                 EnumerationLimits limits) {
    std::vector<int> retained;
    RationalPopulation stage1 = cluster_population(cp, retained);
    DesignDistribution local = enumerate_multinomial(stage1, limits);
    std::map<std::vector<int>, Rational> agg;
    for (auto& [counts, prob] : local.outcomes) {
        std::vector<int> mapped(cp.cluster_count(), 0);
        for (std::size_t j = 0; j < counts.size(); ++j) mapped[retained[j]] = counts[j];
        agg[std::move(mapped)] += prob;
    }
    return from_map(DesignKind::multinomial, true, cp.cluster_count(), local.sample_size,
                    std::move(agg));
}

namespace {

// ordered cluster selections -> ordered unit selections
void expand_pivotal_stage2(const ClusteredPopulation<Rational>& cp,
                           const std::vector<int>& clusters, const Rational& prob,
                           std::size_t slot, std::vector<int>& units,
                           std::map<std::vector<int>, Rational>& agg) {
    if (slot == clusters.size()) {
        agg[units] += prob;
        return;
    }
    const int c = clusters[slot] - 1;
    const auto& members = cp.members[c];
    for (std::size_t j = 0; j < members.size(); ++j) {
        units.push_back(members[j]);
        expand_pivotal_stage2(cp, clusters, prob * cp.within[c][j], slot + 1, units, agg);
        units.pop_back();
    }
}

// per-cluster hit counts -> per-unit draw counts
void expand_multinomial_stage2(const ClusteredPopulation<Rational>& cp,
                               const std::vector<int>& cluster_counts, const Rational& prob,
                               int cluster, std::vector<int>& unit_counts,
                               std::map<std::vector<int>, Rational>& agg) {
    if (cluster == cp.cluster_count()) {
        agg[unit_counts] += prob;
        return;
    }
    const int hits = cluster_counts[cluster];
    const auto& members = cp.members[cluster];
    if (hits == 0) {
        expand_multinomial_stage2(cp, cluster_counts, prob, cluster + 1, unit_counts, agg);
        return;
    }
    Rational hits_factorial(1);
    for (int j = 2; j <= hits; ++j) hits_factorial *= Rational(j);

    auto rec = [&](auto&& self, std::size_t member, int left, const Rational& partial) -> void {
        if (member + 1 == members.size()) {
            Rational q = partial;
            for (int j = 0; j < left; ++j)
                q *= cp.within[cluster][member] / Rational(j + 1);
            unit_counts[members[member] - 1] += left;
            expand_multinomial_stage2(cp, cluster_counts, q, cluster + 1, unit_counts, agg);
            unit_counts[members[member] - 1] -= left;
            return;
        }
        Rational q = partial;
        for (int c = 0; c <= left; ++c) {
            unit_counts[members[member] - 1] += c;
            self(self, member + 1, left - c, q);
            unit_counts[members[member] - 1] -= c;
            q *= cp.within[cluster][member] / Rational(c + 1);
        }
    };
    rec(rec, 0, hits, prob * hits_factorial);
}

}  // namespace

DesignDistribution enumerate_two_stage(const ClusteredPopulation<Rational>& cp,
                                       FirstStage first, EnumerationLimits limits) {
    const int N = static_cast<int>(cp.unit_probs.size());
    std::map<std::vector<int>, Rational> agg;
    if (first == FirstStage::ordered_pivotal) {
        DesignDistribution stage1 = enumerate_cluster_pivotal(cp, limits);
        std::vector<int> units;
        for (const auto& [clusters, prob] : stage1.outcomes)
            expand_pivotal_stage2(cp, clusters, prob, 0, units, agg);
        auto d = from_map(DesignKind::two_stage, false, N, stage1.sample_size,
                          std::move(agg));
        assert(probability_total(d) == Rational(1));
        return d;
    }
    DesignDistribution stage1 = enumerate_cluster_multinomial(cp, limits);
    std::vector<int> unit_counts(N, 0);
    for (const auto& [cluster_counts, prob] : stage1.outcomes)
        expand_multinomial_stage2(cp, cluster_counts, prob, 0, unit_counts, agg);
    auto d = from_map(DesignKind::two_stage, true, N, stage1.sample_size, std::move(agg));
    assert(probability_total(d) == Rational(1));
    return d;
}

InclusionMatrix inclusion_matrix(const DesignDistribution& d) {
    if (d.with_replacement)
        throw ValidationError("inclusion matrix is defined for without-replacement designs");
    const int N = d.population_size;
    InclusionMatrix im;
    im.first_order.assign(N, Rational());
    im.second_order.assign(N, std::vector<Rational>(N, Rational()));
    for (const auto& [sel, prob] : d.outcomes) {
        for (std::size_t i = 0; i < sel.size(); ++i) {
            im.first_order[sel[i] - 1] += prob;
            for (std::size_t j = i + 1; j < sel.size(); ++j) {
                const int a = sel[i] - 1, b = sel[j] - 1;
                im.second_order[a][b] += prob;
            }
        }
    }
    for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
            im.second_order[a][b] += im.second_order[b][a];  // fold both triangles
            im.second_order[b][a] = im.second_order[a][b];
        }
        im.second_order[a][a] = im.first_order[a];
    }
    return im;
}

Rational exact_variance_expanded(const DesignDistribution& d,
                                 const std::vector<Rational>& ycheck,
                                 const Rational& total) {
    if (static_cast<int>(ycheck.size()) != d.population_size)
        throw DimensionMismatch("expanded values do not match the outcome index space");
    Rational acc;
    for (const auto& [o, p] : d.outcomes) {
        Rational t;
        if (d.with_replacement) {
            for (std::size_t k = 0; k < o.size(); ++k)
                if (o[k] != 0) t += Rational(o[k]) * ycheck[k];
        } else {
            for (int unit : o) t += ycheck[unit - 1];
        }
        const Rational dlt = t - total;
        acc += p * dlt * dlt;
    }
    return acc;
}

namespace {

std::vector<Rational> expanded_values(const RationalPopulation& p,
                                      const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != p.size())
        throw DimensionMismatch("variable length does not match population size");
    std::vector<Rational> ycheck;
    ycheck.reserve(y.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        ycheck.push_back(y[k] / p.prob(static_cast<int>(k) + 1));
    return ycheck;
}

}  // namespace

Rational exact_variance(const DesignDistribution& d, const RationalPopulation& p,
                        const std::vector<Rational>& y) {
    if (d.population_size != p.size())
        throw DimensionMismatch("distribution and population sizes differ");
    const Rational total = std::accumulate(y.begin(), y.end(), Rational());
    return exact_variance_expanded(d, expanded_values(p, y), total);
}

Rational multinomial_variance(const RationalPopulation& p, const std::vector<Rational>& y) {
    const auto ycheck = expanded_values(p, y);
    const Rational total = std::accumulate(y.begin(), y.end(), Rational());
    const Rational mean = total / Rational(p.sample_size());
    Rational acc;
    for (std::size_t k = 0; k < ycheck.size(); ++k) {
        const Rational d = ycheck[k] - mean;
        acc += p.prob(static_cast<int>(k) + 1) * d * d;
    }
    return acc;
}

Rational ht_variance_quadratic(const InclusionMatrix& im,
                               const std::vector<Rational>& ycheck) {
    const int N = im.size();
    if (static_cast<int>(ycheck.size()) != N)
        throw DimensionMismatch("expanded values do not match the inclusion matrix");
    Rational acc;
    for (int a = 0; a < N; ++a) {
        const Rational da = im.first_order[a] - im.first_order[a] * im.first_order[a];
        acc += da * ycheck[a] * ycheck[a];
        for (int b = a + 1; b < N; ++b) {
            const Rational cov = im.second_order[a][b] - im.first_order[a] * im.first_order[b];
            acc += Rational(2) * cov * ycheck[a] * ycheck[b];
        }
    }
    return acc;
}

Rational expected_hh_variance(const DesignDistribution& d, const RationalPopulation& p,
                              const std::vector<Rational>& y) {
    if (d.with_replacement)
        throw ValidationError("estimator expectation is taken over a fixed-size design");
    const long long n = d.sample_size;
    if (n < 2)
        throw RequiresSampleSizeTwo("variance estimation needs sample size >= 2");
    const auto ycheck = expanded_values(p, y);
    const Rational scale = Rational(n) / Rational(n - 1);
    const Rational inv_n = Rational(1) / Rational(n);
    Rational acc;
    for (const auto& [sel, prob] : d.outcomes) {
        Rational that;
        for (int unit : sel) that += ycheck[unit - 1];
        const Rational mean = that * inv_n;
        Rational ss;
        for (int unit : sel) {
            const Rational dlt = ycheck[unit - 1] - mean;
            ss += dlt * dlt;
        }
        acc += prob * scale * ss;
    }
    return acc;
}

ClusterTotals cluster_totals(const ClusteredPopulation<Rational>& cp,
                             const std::vector<Rational>& y) {
    if (y.size() != cp.unit_probs.size())
        throw DimensionMismatch("variable length does not match the clustered population");
    ClusterTotals t;
    t.total.reserve(cp.cluster_count());
    t.check.reserve(cp.cluster_count());
    for (int c = 0; c < cp.cluster_count(); ++c) {
        Rational sum;
        for (int unit : cp.members[c]) sum += y[unit - 1];
        t.total.push_back(sum);
        t.check.push_back(cp.probs[c].is_zero() ? Rational() : sum / cp.probs[c]);
    }
    return t;
}

Rational within_cluster_term(const ClusteredPopulation<Rational>& cp,
                             const std::vector<Rational>& y) {
    const ClusterTotals totals = cluster_totals(cp, y);
    Rational acc;
    for (int c = 0; c < cp.cluster_count(); ++c) {
        for (std::size_t j = 0; j < cp.members[c].size(); ++j) {
            const int unit = cp.members[c][j];
            const Rational ycheck = y[unit - 1] / cp.unit_probs[unit - 1];
            const Rational dlt = ycheck - totals.check[c];
            acc += cp.unit_probs[unit - 1] * dlt * dlt;
        }
    }
    return acc;
}

RecursiveVarianceCheck recursive_variance_check(const RationalPopulation& p,
                                                const std::vector<Rational>& y) {
    const long long n = p.sample_size();
    if (n < 2 || p.size() != 2 * n - 1)
        throw RequiresClusterLayout("population must have 2n-1 units with n >= 2");
    const auto cb = cross_border(p);
    for (int i = 0; i < cb.count(); ++i)
        if (cb.borders[i].unit != 2 * (i + 1))
            throw RequiresClusterLayout("cross-border units must sit at even positions");

    const auto ycheck = expanded_values(p, y);
    const Rational total = std::accumulate(y.begin(), y.end(), Rational());
    const DesignDistribution d = enumerate_ordered_pivotal(p);

    RecursiveVarianceCheck out;
    out.pivotal_variance = exact_variance_expanded(d, ycheck, total);

    // E{ V( sum_{i>=2} Ycheck_{F_i} | F_1 ) } from the enumerated tree
    std::map<int, std::array<Rational, 3>> by_first;  // {P, E[t2 P], E[t2^2 P]}
    for (const auto& [sel, prob] : d.outcomes) {
        Rational t2;
        for (std::size_t i = 1; i < sel.size(); ++i) t2 += ycheck[sel[i] - 1];
        auto& acc = by_first[sel.front()];
        acc[0] += prob;
        acc[1] += prob * t2;
        acc[2] += prob * t2 * t2;
    }
    Rational expected_conditional;
    for (const auto& [first, acc] : by_first)
        expected_conditional += acc[2] - acc[1] * acc[1] / acc[0];

    const Rational a1 = cb.borders[0].before;
    const Rational b1 = cb.borders[0].beyond;
    const Rational contrast = ycheck[0] - ycheck[1];
    const Rational duel_term = a1 * (Rational(1) - a1 - b1) * contrast * contrast;
    out.pivotal_decomposition = duel_term + expected_conditional;

    out.multinomial_variance = multinomial_variance(p, y);

    // residual multinomial population after the first duel: the loser with
    // weight b1, then clusters 3..2n-1 unchanged; n-1 draws
    auto residual_variance = [&](int loser) {
        Rational sw, swv, swvv;
        auto add = [&](const Rational& w, const Rational& v) {
            sw += w;
            swv += w * v;
            swvv += w * v * v;
        };
        add(b1, ycheck[loser - 1]);
        for (int c = 3; c <= p.size(); ++c) add(p.prob(c), ycheck[c - 1]);
        return swvv - swv * swv / sw;
    };
    const Rational p_border = a1 / (Rational(1) - b1);
    out.multinomial_bound = duel_term + (Rational(1) - p_border) * residual_variance(2) +
                            p_border * residual_variance(1);
    return out;
}

std::map<std::vector<int>, Rational> unordered_view(const DesignDistribution& d) {
    std::map<std::vector<int>, Rational> agg;
    for (const auto& [o, p] : d.outcomes) {
        if (d.with_replacement) {
            agg[o] += p;
        } else {
            std::vector<int> key = o;
            std::sort(key.begin(), key.end());
            agg[std::move(key)] += p;
        }
    }
    return agg;
}

void write_distribution_csv(const DesignDistribution& d, std::ostream& os) {
    os << "outcome,numerator,denominator\n";
    for (const auto& [o, p] : d.outcomes) {
        std::string ids;
        if (d.with_replacement) {
            for (std::size_t k = 0; k < o.size(); ++k)
                for (int j = 0; j < o[k]; ++j) {
                    if (!ids.empty()) ids += ';';
                    ids += std::to_string(k + 1);
                }
        } else {
            for (std::size_t i = 0; i < o.size(); ++i) {
                if (i) ids += ';';
                ids += std::to_string(o[i]);
            }
        }
        os << ids << ',' << Rational(p.numerator(), 1).to_string() << ','
           << Rational(p.denominator(), 1).to_string() << '\n';
    }
}

}  // namespace pivotal
