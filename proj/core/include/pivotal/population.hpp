#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pivotal/errors.hpp"
#include "pivotal/scalar.hpp"

namespace pivotal {

/// A finite population described by its first-order inclusion probabilities.
///
/// Units are indexed 1..N. Construction validates 0 < pi_k <= 1 and that the
/// probabilities sum to an integer sample size n >= 1 (exactly in rational
/// mode, within 1e-9 in double mode). Immutable after construction; safe to
/// share across threads.
template <class T>
class BasicPopulation {
public:
    explicit BasicPopulation(std::vector<T> pi) : pi_(std::move(pi)) {
        if (pi_.empty()) throw ValidationError("population must be nonempty");
        const T zero = scalar_traits<T>::from_int(0);
        const T one = scalar_traits<T>::from_int(1);
        cum_.reserve(pi_.size());
        T running = zero;
        for (std::size_t k = 0; k < pi_.size(); ++k) {
            if (!(pi_[k] > zero))
                throw NonPositiveProbability("pi[" + std::to_string(k + 1) + "] must be > 0");
            if (pi_[k] > one)
                throw ProbabilityAboveOne("pi[" + std::to_string(k + 1) + "] must be <= 1");
            running = scalar_traits<T>::tidy(running + pi_[k]);
            cum_.push_back(running);
        }
        if (!scalar_traits<T>::integer_value(running, size_n_) || size_n_ < 1)
            throw NonIntegerSampleSize("probabilities must sum to a positive integer");
    }

    int size() const { return static_cast<int>(pi_.size()); }
    long long sample_size() const { return size_n_; }

    const std::vector<T>& probabilities() const { return pi_; }

    /// pi_k, unit index 1-based.
    const T& prob(int unit) const { return pi_[unit - 1]; }

    /// Cumulated probability C_k, with cum(0) = 0.
    T cum(int k) const {
        return k == 0 ? scalar_traits<T>::from_int(0) : cum_[k - 1];
    }

private:
    std::vector<T> pi_;
    std::vector<T> cum_;
    long long size_n_ = 0;
};

using Population = BasicPopulation<double>;
using RationalPopulation = BasicPopulation<Rational>;

/// One unit whose cumulated-probability interval straddles the integer
/// border i: `before` is the part lying left of the border (a_i > 0),
/// `beyond` the residual carried past it (0 <= b_i < 1).
template <class T>
struct CrossBorder {
    int unit;
    T before;
    T beyond;
};

template <class T>
struct CrossBorderInfo {
    std::vector<CrossBorder<T>> borders;  // one entry per border i = 1..n-1

    int count() const { return static_cast<int>(borders.size()); }
};

/// Finds the units straddling the integer borders 1..n-1. Empty for n = 1.
/// A cumulated probability landing exactly on a border makes that unit
/// cross-border with beyond = 0.
template <class T>
CrossBorderInfo<T> cross_border(const BasicPopulation<T>& p) {
    CrossBorderInfo<T> info;
    const long long n = p.sample_size();
    info.borders.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    int k = 1;
    for (long long i = 1; i < n; ++i) {
        const T border = scalar_traits<T>::from_int(i);
        while (!(p.cum(k - 1) < border && p.cum(k) >= border)) ++k;
        info.borders.push_back({k, border - p.cum(k - 1), p.cum(k) - border});
        ++k;  // a unit spans less than one full border interval (pi <= 1)
    }
    return info;
}

/// The population regrouped around its cross-border units: 2n-1 clusters,
/// even positions holding the cross-border singletons, odd positions the
/// segments between them. Clusters may be empty (probability zero) when
/// consecutive cross-border units are adjacent; they are retained so that
/// cluster indices always follow the 2n-1 layout.
template <class T>
struct ClusteredPopulation {
    std::vector<T> probs;                   // phi_1..phi_{2n-1}, sums to n
    std::vector<std::vector<int>> members;  // original unit ids per cluster
    std::vector<std::vector<T>> within;     // second-stage probs pi_k / phi_i
    std::vector<T> unit_probs;              // source pi, kept for estimators

    int cluster_count() const { return static_cast<int>(probs.size()); }
};

template <class T>
ClusteredPopulation<T> build_clustered(const BasicPopulation<T>& p) {
    const auto cb = cross_border(p);
    const long long n = p.sample_size();
    const int N = p.size();

    ClusteredPopulation<T> cp;
    cp.unit_probs = p.probabilities();
    cp.probs.reserve(2 * n - 1);
    cp.members.reserve(2 * n - 1);

    const T one = scalar_traits<T>::from_int(1);
    T prev_beyond = scalar_traits<T>::from_int(0);
    int next_unit = 1;
    for (long long i = 1; i <= n; ++i) {
        const bool last = i == n;
        const int stop = last ? N + 1 : cb.borders[i - 1].unit;
        std::vector<int> segment;
        for (; next_unit < stop; ++next_unit) segment.push_back(next_unit);
        T seg_prob = last ? one - prev_beyond
                          : one - prev_beyond - cb.borders[i - 1].before;
        cp.probs.push_back(seg_prob);
        cp.members.push_back(std::move(segment));
        if (!last) {
            const auto& border = cb.borders[i - 1];
            cp.probs.push_back(border.before + border.beyond);
            cp.members.push_back({border.unit});
            prev_beyond = border.beyond;
            next_unit = border.unit + 1;
        }
    }

    cp.within.reserve(cp.probs.size());
    for (std::size_t c = 0; c < cp.probs.size(); ++c) {
        std::vector<T> w;
        w.reserve(cp.members[c].size());
        for (int unit : cp.members[c]) w.push_back(p.prob(unit) / cp.probs[c]);
        cp.within.push_back(std::move(w));
    }
    return cp;
}

/// The positive-probability clusters of `cp` as a population in their own
/// right. `retained[j]` gives the original cluster index (0-based) of unit
/// j+1 in the returned population.
template <class T>
BasicPopulation<T> cluster_population(const ClusteredPopulation<T>& cp,
                                      std::vector<int>& retained) {
    const T zero = scalar_traits<T>::from_int(0);
    std::vector<T> probs;
    retained.clear();
    for (int c = 0; c < cp.cluster_count(); ++c) {
        if (cp.probs[c] > zero) {
            probs.push_back(cp.probs[c]);
            retained.push_back(c);
        }
    }
    return BasicPopulation<T>(std::move(probs));
}

}  // namespace pivotal
