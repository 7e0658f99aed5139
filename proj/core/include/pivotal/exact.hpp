#pragma once

#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "pivotal/designs.hpp"
#include "pivotal/population.hpp"
#include "pivotal/rational.hpp"
#include "pivotal/walk.hpp"

namespace pivotal {

enum class DesignKind { ordered_pivotal, multinomial, two_stage, randomized_pivotal };

/// Exhaustive list of (outcome, exact probability) pairs for a design.
/// Without replacement, an outcome is the ordered selection (F_1..F_n);
/// with replacement it is the per-unit draw-count vector. Outcomes are
/// distinct and their probabilities sum to exactly 1.
struct DesignDistribution {
    DesignKind kind;
    bool with_replacement;
    int population_size;
    long long sample_size;
    std::vector<std::pair<std::vector<int>, Rational>> outcomes;
};

struct EnumerationLimits {
    int max_units = 16;
    long long max_outcomes = 2'000'000;
};

/// Depth-first expansion of every branch point of ordered pivotal sampling
/// (survivor pick, duel outcome), multiplying exact branch probabilities
/// along each path. `visit(selection, probability)` is called once per
/// leaf; zero-probability branches are never entered.
template <class Visitor>
void for_each_pivotal_path(const RationalPopulation& p, Visitor&& visit) {
    const StageLayout<Rational> layout(p);
    const long long n = layout.stages();
    const Rational one(1), zero;
    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(n));

    auto rec = [&](auto&& self, long long stage, int leftover, const Rational& residual,
                   const Rational& prob) -> void {
        const auto [lo, hi] = layout.segment(stage);
        if (stage == n) {
            if (leftover != 0) {
                selected.push_back(leftover);
                visit(selected, prob * residual);
                selected.pop_back();
            }
            for (int u = lo; u <= hi; ++u) {
                selected.push_back(u);
                visit(selected, prob * p.prob(u));
                selected.pop_back();
            }
            return;
        }
        const auto& border = layout.border(stage);
        Rational total = leftover != 0 ? residual : zero;
        for (int u = lo; u <= hi; ++u) total += p.prob(u);
        if (total.is_zero()) {
            selected.push_back(border.unit);
            self(self, stage + 1, 0, zero, prob);
            selected.pop_back();
            return;
        }
        const Rational border_wins = layout.border_win_probability(stage);
        const Rational border_loses = one - border_wins;
        const bool carry = border.beyond > zero;
        auto branch = [&](int survivor, const Rational& weight) {
            const Rational reach = prob * (weight / total);
            selected.push_back(border.unit);
            self(self, stage + 1, carry ? survivor : 0, carry ? border.beyond : zero,
                 reach * border_wins);
            selected.pop_back();
            if (!border_loses.is_zero()) {
                selected.push_back(survivor);
                self(self, stage + 1, carry ? border.unit : 0, carry ? border.beyond : zero,
                     reach * border_loses);
                selected.pop_back();
            }
        };
        if (leftover != 0) branch(leftover, residual);
        for (int u = lo; u <= hi; ++u) branch(u, p.prob(u));
    };
    rec(rec, 1, 0, zero, one);
}

DesignDistribution enumerate_ordered_pivotal(const RationalPopulation& p,
                                             EnumerationLimits limits = {});
DesignDistribution enumerate_multinomial(const RationalPopulation& p,
                                         EnumerationLimits limits = {});
DesignDistribution enumerate_randomized_pivotal(const RationalPopulation& p,
                                                EnumerationLimits limits = {});

/// First-stage designs over the positive-probability clusters; outcomes are
/// reported in the original 1-based cluster index space (empty clusters keep
/// their slot and never appear).
DesignDistribution enumerate_cluster_pivotal(const ClusteredPopulation<Rational>& cp,
                                             EnumerationLimits limits = {});
DesignDistribution enumerate_cluster_multinomial(const ClusteredPopulation<Rational>& cp,
                                                 EnumerationLimits limits = {});

/// Full two-stage composition: clusters by the chosen first-stage design,
/// then one unit per cluster hit with probabilities pi_k / phi_i. Outcomes
/// live in the unit index space.
DesignDistribution enumerate_two_stage(const ClusteredPopulation<Rational>& cp,
                                       FirstStage first, EnumerationLimits limits = {});

/// First- and second-order inclusion probabilities of a without-replacement
/// design, by direct summation over outcomes. second_order is symmetric with
/// the first-order probabilities on its diagonal.
struct InclusionMatrix {
    std::vector<Rational> first_order;
    std::vector<std::vector<Rational>> second_order;

    int size() const { return static_cast<int>(first_order.size()); }
};
InclusionMatrix inclusion_matrix(const DesignDistribution& d);

/// Definitional design variance sum_outcomes p (t_hat - t_y)^2, with t_hat
/// the Horvitz-Thompson sum without replacement and the Hansen-Hurvitz sum
/// with replacement.
Rational exact_variance(const DesignDistribution& d, const RationalPopulation& p,
                        const std::vector<Rational>& y);

/// Same, over precomputed expanded values (ycheck indexed by the outcome
/// space); lets cluster-level variables bypass a population object.
Rational exact_variance_expanded(const DesignDistribution& d,
                                 const std::vector<Rational>& ycheck,
                                 const Rational& total);

/// Closed-form Hansen-Hurvitz variance under multinomial sampling:
/// sum_k pi_k (ycheck_k - t_y/n)^2.
Rational multinomial_variance(const RationalPopulation& p, const std::vector<Rational>& y);

/// Horvitz-Thompson variance as the quadratic form
/// sum_{k,l} (phi_kl - phi_k phi_l) ycheck_k ycheck_l over an exact
/// inclusion matrix. Equals exact_variance for fixed-size designs.
Rational ht_variance_quadratic(const InclusionMatrix& im,
                               const std::vector<Rational>& ycheck);

/// Exact expectation of the with-replacement variance estimator under a
/// without-replacement design.
Rational expected_hh_variance(const DesignDistribution& d, const RationalPopulation& p,
                              const std::vector<Rational>& y);

/// Per-cluster totals Y_i and expanded totals Y_i / phi_i (zero for empty
/// clusters).
struct ClusterTotals {
    std::vector<Rational> total;
    std::vector<Rational> check;
};
ClusterTotals cluster_totals(const ClusteredPopulation<Rational>& cp,
                             const std::vector<Rational>& y);

/// Second-stage variance term shared by the two-stage decompositions:
/// sum_i sum_{k in u_i} pi_k (ycheck_k - Ycheck_i)^2.
Rational within_cluster_term(const ClusteredPopulation<Rational>& cp,
                             const std::vector<Rational>& y);

/// Both sides of the stage-one variance decomposition on a population in
/// clustered layout (2n-1 units, cross-border at even positions):
///   V(pivotal)     =  a1 (1-a1-b1) (Ycheck_1 - Ycheck_2)^2 + E{V(rest | F_1)}
///   V(multinomial) >= a1 (1-a1-b1) (Ycheck_1 - Ycheck_2)^2
///                       + E{V(multinomial rest | F_1)}
/// where the rest-population after the first duel carries (b1, phi_3, ...).
struct RecursiveVarianceCheck {
    Rational pivotal_variance;        // lhs, equality
    Rational pivotal_decomposition;   // rhs
    Rational multinomial_variance;    // lhs, inequality (>=)
    Rational multinomial_bound;       // rhs
};
RecursiveVarianceCheck recursive_variance_check(const RationalPopulation& p,
                                                const std::vector<Rational>& y);

/// Distribution collapsed over selection order: sorted unit sets without
/// replacement, count vectors with replacement. Two designs are equal when
/// these maps are equal.
std::map<std::vector<int>, Rational> unordered_view(const DesignDistribution& d);

/// CSV dump, one outcome per row: semicolon-joined unit ids (in selection
/// order; expanded with multiplicity for with-replacement designs), then
/// the exact numerator and denominator.
void write_distribution_csv(const DesignDistribution& d, std::ostream& os);

}  // namespace pivotal
