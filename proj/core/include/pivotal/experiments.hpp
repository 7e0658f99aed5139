#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "pivotal/exact.hpp"
#include "pivotal/random.hpp"
#include "pivotal/spectral.hpp"

namespace pivotal {

/// Constraint set applied on top of 0 < phi_i < 1 and sum phi_i = n:
///   plain               nothing more;
///   structural_*        the clustered layout with cross-border clusters at
///                       even positions: C_{2i-1} < i and C_{2i} >= i
///                       (strict: C_{2i} > i) for i = 1..n-1.
/// The strict variant is the default: it is the one whose case counts match
/// the reference studies this tool reproduces.
enum class GridVariant { plain, structural_strict, structural_nonstrict };

std::string_view to_string(GridVariant v);
GridVariant grid_variant_from_string(std::string_view name);

struct GridSpec {
    long long n = 3;                 // target sample size
    int dim = 0;                     // number of clusters; 0 means 2n-1
    Rational skip = Rational(1, 20); // grid step, must be 1/M
    GridVariant variant = GridVariant::structural_strict;

    int clusters() const { return dim > 0 ? dim : static_cast<int>(2 * n - 1); }
    /// M = 1/skip; validates the spec.
    long long grid_units() const;
};

/// All grid vectors of the spec, as integer numerators over grid_units(),
/// in lexicographic order.
std::vector<std::vector<int>> enumerate_grid(const GridSpec& spec);

struct ScanRecord {
    long long case_index;
    std::vector<int> numerators;
    double lambda2;
};

struct ScanSummary {
    long long count = 0;
    double min_lambda2 = 0.0;
    double max_lambda2 = 0.0;
    GridVariant variant = GridVariant::structural_strict;
    long long runtime_ms = 0;
    long long grid_units = 0;
    std::vector<ScanRecord> records;  // ordered by case_index
};

/// For every grid vector: exact pivotal-design inclusion matrix by
/// enumeration, then lambda2 of the efficiency matrix. Cases are
/// independent; `threads` <= 0 picks the hardware concurrency. Results are
/// identical regardless of thread count.
ScanSummary scan(const GridSpec& spec, int threads = 0, bool keep_records = true);

/// Exact inclusion matrix of ordered pivotal sampling, accumulated directly
/// over the probability tree; equals
/// inclusion_matrix(enumerate_ordered_pivotal(p)).
InclusionMatrix pivotal_inclusion_matrix(const RationalPopulation& p);

/// CSV with header case_index,phi_1,...,phi_d,lambda2.
void write_scan_csv(const ScanSummary& summary, std::ostream& os);

struct McReport {
    long long replicates = 0;
    long long sample_size = 0;
    double total = 0.0;  // t_y
    double mean_pivotal = 0.0;
    double mean_multinomial = 0.0;
    double var_pivotal = 0.0;
    double var_pivotal_se = 0.0;
    double var_multinomial = 0.0;
    double var_multinomial_se = 0.0;
    double exact_var_pivotal = 0.0;
    double exact_var_multinomial = 0.0;
    double expected_vhh = 0.0;       // exact expectation of the variance estimator
    double coverage = 0.0;           // fraction of t_hat +- 1.96 sqrt(vhh) covering t_y
    double coverage_se = 0.0;
    double z = 1.96;
};

/// Monte Carlo comparison of the two designs with exact references.
/// Replicate r draws from the substream (seed, r), so results do not depend
/// on scheduling and are reproducible.
McReport mc_compare(const RationalPopulation& p, const std::vector<Rational>& y,
                    long long replicates, std::uint64_t seed);

void write_mc_report(const McReport& r, std::ostream& os);

}  // namespace pivotal
