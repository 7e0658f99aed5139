#pragma once

#include <vector>

#include "pivotal/exact.hpp"

namespace pivotal {

/// Eigendecomposition of a small dense symmetric matrix, eigenvalues in
/// descending order with matching eigenvectors (rows of `vectors`).
struct EigenDecomposition {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// `tol`; throws NoConvergence after `max_sweeps` full sweeps. Intended for
/// the small matrices produced here (dimension a few dozen at most).
EigenDecomposition jacobi_eigen(std::vector<std::vector<double>> a, double tol = 1e-13,
                                int max_sweeps = 100);

/// Column-normalized joint-inclusion matrix B with B[i][j] = phi_ij / phi_j.
/// Rows and columns with phi_j = 0 are dropped; `retained` records the map
/// back to the input indices (0-based).
struct GablerMatrix {
    std::vector<std::vector<double>> b;
    std::vector<double> probs;   // retained first-order probabilities
    std::vector<int> retained;   // original index of each retained row

    int size() const { return static_cast<int>(probs.size()); }
};
GablerMatrix gabler_matrix(const InclusionMatrix& im);

/// Spectral summary of a fixed-size design relative to multinomial
/// sampling. For a design of size n, B phi = n phi forces the top eigenvalue
/// to n; the design beats multinomial sampling for every study variable iff
/// lambda2 <= 1, and lambda2 equals the worst-case variance ratio.
struct GablerSummary {
    GablerMatrix matrix;
    std::vector<double> eigenvalues;  // descending, of B (equivalently of M)
    double lambda2 = 0.0;
    std::vector<double> worst_y;      // indexed like the input matrix; 0 on dropped rows
    bool degenerate = false;          // lambda2 eigenspace not simple
};

/// Eigenvalues of B via the symmetric similarity M = D^{-1/2} Pi D^{-1/2}
/// (M_ij = phi_ij / sqrt(phi_i phi_j), D = diag(phi)).
EigenDecomposition lambda2_decomposition(const GablerMatrix& gm);

/// Second-largest eigenvalue only (no eigenvectors); the scan hot path.
double lambda2(const GablerMatrix& gm);

/// Cluster variable attaining the extremal ratio: maps the second
/// eigenvector of M back through the similarity, y_i = sqrt(phi_i) v2_i.
/// With `summary.degenerate` set, any basis vector of the eigenspace is
/// returned and still attains the ratio.
GablerSummary gabler_summary(const InclusionMatrix& im);

}  // namespace pivotal
