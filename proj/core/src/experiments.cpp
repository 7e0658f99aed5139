#include "pivotal/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "pivotal/designs.hpp"
#include "pivotal/estimators.hpp"

namespace pivotal {

std::string_view to_string(GridVariant v) {
    switch (v) {
        case GridVariant::plain: return "plain";
        case GridVariant::structural_strict: return "structural-strict";
        case GridVariant::structural_nonstrict: return "structural-nonstrict";
    }
    return "?";
}

GridVariant grid_variant_from_string(std::string_view name) {
    if (name == "plain") return GridVariant::plain;
    if (name == "structural-strict") return GridVariant::structural_strict;
    if (name == "structural-nonstrict") return GridVariant::structural_nonstrict;
    throw ValidationError("unknown grid variant '" + std::string(name) + "'");
}

long long GridSpec::grid_units() const {
    if (n < 1) throw ValidationError("grid target size must be >= 1");
    if (dim != 0 && dim != 2 * n - 1)
        throw ValidationError("grid dimension must be 2n-1");
    if (skip.sign() <= 0 || skip.numerator() != 1)
        throw ValidationError("grid skip must be the reciprocal of an integer, e.g. 0.05");
    return static_cast<long long>(skip.denominator());
}

std::vector<std::vector<int>> enumerate_grid(const GridSpec& spec) {
    const long long M = spec.grid_units();
    const int d = spec.clusters();
    const long long target = spec.n * M;
    std::vector<std::vector<int>> out;
    std::vector<int> m(d);

    auto prefix_ok = [&](int filled, long long cum) {
        if (spec.variant == GridVariant::plain) return true;
        // positions are 1-based; borders live between clusters 2i-1 and 2i
        if (filled == d) return true;  // last position carries no border
        if (filled % 2 == 1) {
            const long long i = (filled + 1) / 2;
            return i > spec.n - 1 || cum < i * M;
        }
        const long long i = filled / 2;
        if (i > spec.n - 1) return true;
        return spec.variant == GridVariant::structural_strict ? cum > i * M
                                                              : cum >= i * M;
    };

    auto rec = [&](auto&& self, int pos, long long cum) -> void {
        if (pos == d) {
            if (cum == target) out.push_back(m);
            return;
        }
        const long long rest = d - pos - 1;
        long long lo = target - cum - rest * (M - 1);
        long long hi = target - cum - rest;
        lo = std::max<long long>(lo, 1);
        hi = std::min<long long>(hi, M - 1);
        for (long long v = lo; v <= hi; ++v) {
            if (!prefix_ok(pos + 1, cum + v)) continue;
            m[pos] = static_cast<int>(v);
            self(self, pos + 1, cum + v);
        }
    };
    rec(rec, 0, 0);
    return out;
}

InclusionMatrix pivotal_inclusion_matrix(const RationalPopulation& p) {
    const int N = p.size();
    InclusionMatrix im;
    im.first_order.assign(N, Rational());
    im.second_order.assign(N, std::vector<Rational>(N, Rational()));
    for_each_pivotal_path(p, [&](const std::vector<int>& sel, const Rational& prob) {
        for (std::size_t i = 0; i < sel.size(); ++i) {
            im.first_order[sel[i] - 1] += prob;
            for (std::size_t j = i + 1; j < sel.size(); ++j)
                im.second_order[sel[i] - 1][sel[j] - 1] += prob;
        }
    });
    for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
            im.second_order[a][b] += im.second_order[b][a];
            im.second_order[b][a] = im.second_order[a][b];
        }
        im.second_order[a][a] = im.first_order[a];
    }
    return im;
}

namespace {

double scan_case(const std::vector<int>& numerators, long long M) {
    std::vector<Rational> probs;
    probs.reserve(numerators.size());
    for (int m : numerators) probs.emplace_back(m, M);
    RationalPopulation pop(std::move(probs));
    const InclusionMatrix im = pivotal_inclusion_matrix(pop);
    return lambda2(gabler_matrix(im));
}

}  // namespace

ScanSummary scan(const GridSpec& spec, int threads, bool keep_records) {
    const auto t0 = std::chrono::steady_clock::now();
    const long long M = spec.grid_units();
    const std::vector<std::vector<int>> grid = enumerate_grid(spec);

    ScanSummary summary;
    summary.variant = spec.variant;
    summary.grid_units = M;
    summary.count = static_cast<long long>(grid.size());
    summary.records.resize(grid.size());

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<long long>(threads, summary.count ? summary.count : 1));

    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            const long long i = next.fetch_add(64);
            if (i >= summary.count) return;
            const long long stop = std::min(i + 64, summary.count);
            for (long long c = i; c < stop; ++c) {
                summary.records[c].case_index = c;
                summary.records[c].numerators = grid[c];
                summary.records[c].lambda2 = scan_case(grid[c], M);
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    summary.min_lambda2 = std::numeric_limits<double>::quiet_NaN();
    summary.max_lambda2 = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : summary.records) {
        if (!(rec.lambda2 >= summary.min_lambda2)) summary.min_lambda2 = rec.lambda2;
        if (!(rec.lambda2 <= summary.max_lambda2)) summary.max_lambda2 = rec.lambda2;
    }
    if (!keep_records) summary.records.clear();
    summary.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    return summary;
}

void write_scan_csv(const ScanSummary& summary, std::ostream& os) {
    os << "case_index";
    const std::size_t d = summary.records.empty() ? 0 : summary.records[0].numerators.size();
    for (std::size_t j = 1; j <= d; ++j) os << ",phi_" << j;
    os << ",lambda2\n";
    char buf[32];
    for (const auto& rec : summary.records) {
        os << rec.case_index;
        for (int m : rec.numerators)
            os << ',' << Rational(m, summary.grid_units).to_decimal_string();
        std::snprintf(buf, sizeof buf, "%.12g", rec.lambda2);
        os << ',' << buf << '\n';
    }
}

McReport mc_compare(const RationalPopulation& p, const std::vector<Rational>& y,
                    long long replicates, std::uint64_t seed) {
    if (replicates < 1) throw ValidationError("need at least one replicate");
    if (static_cast<int>(y.size()) != p.size())
        throw DimensionMismatch("variable length does not match population size");

    McReport report;
    report.replicates = replicates;
    report.sample_size = p.sample_size();

    // exact references
    const DesignDistribution design = enumerate_ordered_pivotal(p);
    report.exact_var_pivotal = exact_variance(design, p, y).to_double();
    report.exact_var_multinomial = multinomial_variance(p, y).to_double();
    report.expected_vhh = report.sample_size >= 2
                              ? expected_hh_variance(design, p, y).to_double()
                              : std::numeric_limits<double>::quiet_NaN();

    std::vector<double> probs(p.size());
    for (int k = 1; k <= p.size(); ++k) probs[k - 1] = p.prob(k).to_double();
    Population dp(std::move(probs));
    std::vector<double> yd(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) yd[k] = y[k].to_double();
    const auto var = StudyVariable<double>::make(dp, yd);
    report.total = var.total;

    const RandomStream root(seed);
    // sums of (t_hat - t_y)^k, k = 1..4, accumulated about the known center
    double d_ops[5] = {0, 0, 0, 0, 0};
    double d_ms[5] = {0, 0, 0, 0, 0};
    long long covered = 0;
    const bool with_vhh = report.sample_size >= 2;
    for (long long r = 0; r < replicates; ++r) {
        RandomStream rng = root.substream(static_cast<std::uint64_t>(r));
        const OrderedSample s = sample_ordered_pivotal(dp, rng);
        const double d = horvitz_thompson(s, var) - var.total;
        for (int k = 1; k <= 4; ++k) d_ops[k] += std::pow(d, k);
        if (with_vhh) {
            const double vhh = hh_variance_estimate(s, var);
            if (std::fabs(d) <= report.z * std::sqrt(vhh)) ++covered;
        }
        const MultiSample ms = sample_multinomial(dp, rng);
        const double dm = hansen_hurvitz(ms, var) - var.total;
        for (int k = 1; k <= 4; ++k) d_ms[k] += std::pow(dm, k);
    }
    const double R = static_cast<double>(replicates);

    // variance of the empirical variance via its central fourth moment
    auto reduce = [R](const double* sums, double& variance, double& se) {
        const double m1 = sums[1] / R;
        const double m2 = sums[2] / R - m1 * m1;
        const double m4 = sums[4] / R - 4 * m1 * sums[3] / R +
                          6 * m1 * m1 * sums[2] / R - 3 * m1 * m1 * m1 * m1;
        variance = m2;
        se = std::sqrt(std::max(0.0, m4 - m2 * m2) / R);
    };
    reduce(d_ops, report.var_pivotal, report.var_pivotal_se);
    reduce(d_ms, report.var_multinomial, report.var_multinomial_se);
    report.mean_pivotal = var.total + d_ops[1] / R;
    report.mean_multinomial = var.total + d_ms[1] / R;

    if (with_vhh) {
        report.coverage = static_cast<double>(covered) / R;
        report.coverage_se = std::sqrt(report.coverage * (1 - report.coverage) / R);
    } else {
        report.coverage = std::numeric_limits<double>::quiet_NaN();
        report.coverage_se = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

void write_mc_report(const McReport& r, std::ostream& os) {
    char line[160];
    os << "replicates           " << r.replicates << "\n";
    os << "total t_y            " << r.total << "\n";
    std::snprintf(line, sizeof line, "mean t_hat           pivotal %.6f   multinomial %.6f\n",
                  r.mean_pivotal, r.mean_multinomial);
    os << line;
    std::snprintf(line, sizeof line,
                  "empirical variance   pivotal %.6f (se %.6f)   multinomial %.6f\n",
                  r.var_pivotal, r.var_pivotal_se, r.var_multinomial);
    os << line;
    std::snprintf(line, sizeof line,
                  "exact variance       pivotal %.6f   multinomial %.6f\n",
                  r.exact_var_pivotal, r.exact_var_multinomial);
    os << line;
    std::snprintf(line, sizeof line, "E[vhh]               %.6f\n", r.expected_vhh);
    os << line;
    std::snprintf(line, sizeof line, "CI coverage (z=%.2f) %.4f (se %.4f)\n", r.z,
                  r.coverage, r.coverage_se);
    os << line;
}

}  // namespace pivotal
