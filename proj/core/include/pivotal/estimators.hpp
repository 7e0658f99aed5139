#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pivotal/designs.hpp"
#include "pivotal/population.hpp"

namespace pivotal {

/// A study variable together with its expanded values y_k / pi_k and total.
/// Constructing it through `make` revalidates lengths against the
/// population, so estimators cannot silently mix mismatched vectors.
template <class T>
struct StudyVariable {
    std::vector<T> values;  // y_k
    std::vector<T> check;   // y_k / pi_k
    T total;                // sum of y_k

    static StudyVariable make(const BasicPopulation<T>& p, std::vector<T> y) {
        if (static_cast<int>(y.size()) != p.size())
            throw DimensionMismatch("study variable length " + std::to_string(y.size()) +
                                    " does not match population size " +
                                    std::to_string(p.size()));
        StudyVariable v;
        v.total = scalar_traits<T>::from_int(0);
        v.check.reserve(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) {
            v.total += y[k];
            v.check.push_back(y[k] / p.prob(static_cast<int>(k) + 1));
        }
        v.values = std::move(y);
        return v;
    }
};

/// Horvitz-Thompson estimate of the total from a without-replacement sample.
template <class T>
T horvitz_thompson(const OrderedSample& s, const StudyVariable<T>& v) {
    T sum = scalar_traits<T>::from_int(0);
    for (int unit : s.units) {
        if (unit < 1 || unit > static_cast<int>(v.check.size()))
            throw IndexOutOfRange("sample unit " + std::to_string(unit) + " out of range");
        sum += v.check[unit - 1];
    }
    return sum;
}

/// Hansen-Hurvitz estimate of the total from a with-replacement sample.
template <class T>
T hansen_hurvitz(const MultiSample& s, const StudyVariable<T>& v) {
    if (s.counts.size() != v.check.size())
        throw CountMismatch("draw-count vector length does not match the population");
    T sum = scalar_traits<T>::from_int(0);
    for (std::size_t k = 0; k < s.counts.size(); ++k) {
        if (s.counts[k] != 0)
            sum += scalar_traits<T>::from_int(s.counts[k]) * v.check[k];
    }
    return sum;
}

/// With-replacement variance estimator evaluated on a fixed-size sample:
/// n/(n-1) * sum_{k in S} (ycheck_k - t_hat/n)^2. Nonnegative by
/// construction; under pivotal sampling its expectation dominates the true
/// variance, so it yields conservative confidence intervals.
template <class T>
T hh_variance_estimate(const OrderedSample& s, const StudyVariable<T>& v) {
    const long long n = s.size();
    if (n < 2)
        throw RequiresSampleSizeTwo("variance estimation needs sample size >= 2");
    const T that = horvitz_thompson(s, v);
    const T mean = that / scalar_traits<T>::from_int(n);
    T sum = scalar_traits<T>::from_int(0);
    for (int unit : s.units) {
        const T d = v.check[unit - 1] - mean;
        sum += d * d;
    }
    return scalar_traits<T>::from_int(n) / scalar_traits<T>::from_int(n - 1) * sum;
}

}  // namespace pivotal
