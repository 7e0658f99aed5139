#include "pivotal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pivotal {

namespace {

double off_diagonal_norm(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += a[p][q] * a[p][q];
    return std::sqrt(2.0 * s);
}

template <bool WithVectors>
int jacobi_sweeps(std::vector<std::vector<double>>& a,
                  std::vector<std::vector<double>>* v, double tol, int max_sweeps) {
    const int n = static_cast<int>(a.size());
    int sweep = 0;
    while (off_diagonal_norm(a) > tol) {
        if (++sweep > max_sweeps)
            throw NoConvergence("Jacobi eigensolver did not converge in " +
                                std::to_string(max_sweeps) + " sweeps");
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[r][p], arq = a[r][q];
                        a[r][p] = a[p][r] = arp - s * (arq + tau * arp);
                        a[r][q] = a[q][r] = arq + s * (arp - tau * arq);
                    }
                    if constexpr (WithVectors) {
                        const double vrp = (*v)[r][p], vrq = (*v)[r][q];
                        (*v)[r][p] = vrp - s * (vrq + tau * vrp);
                        (*v)[r][q] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }
    return sweep;
}

}  // namespace

EigenDecomposition jacobi_eigen(std::vector<std::vector<double>> a, double tol,
                                int max_sweeps) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;
    const int sweeps = jacobi_sweeps<true>(a, &v, tol, max_sweeps);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a[x][x] > a[y][y]; });

    EigenDecomposition out;
    out.sweeps = sweeps;
    out.values.reserve(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (int j = 0; j < n; ++j) {
        out.values.push_back(a[order[j]][order[j]]);
        for (int r = 0; r < n; ++r) out.vectors[j][r] = v[r][order[j]];
    }
    return out;
}

GablerMatrix gabler_matrix(const InclusionMatrix& im) {
    GablerMatrix gm;
    for (int j = 0; j < im.size(); ++j) {
        if (!im.first_order[j].is_zero()) {
            gm.retained.push_back(j);
            gm.probs.push_back(im.first_order[j].to_double());
        }
    }
    if (gm.retained.empty())
        throw ZeroProbabilityCluster("no positive-probability cluster to retain");
    const int m = gm.size();
    gm.b.assign(m, std::vector<double>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            gm.b[r][c] =
                im.second_order[gm.retained[r]][gm.retained[c]].to_double() / gm.probs[c];
    return gm;
}

namespace {

std::vector<std::vector<double>> symmetrized(const GablerMatrix& gm) {
    const int m = gm.size();
    std::vector<double> root(m);
    for (int j = 0; j < m; ++j) root[j] = std::sqrt(gm.probs[j]);
    std::vector<std::vector<double>> sym(m, std::vector<double>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            sym[r][c] = gm.b[r][c] * gm.probs[c] / (root[r] * root[c]);
    // remove the last-bit asymmetry left by the two divisions
    for (int r = 0; r < m; ++r)
        for (int c = r + 1; c < m; ++c)
            sym[r][c] = sym[c][r] = 0.5 * (sym[r][c] + sym[c][r]);
    return sym;
}

}  // namespace

EigenDecomposition lambda2_decomposition(const GablerMatrix& gm) {
    return jacobi_eigen(symmetrized(gm));
}

double lambda2(const GablerMatrix& gm) {
    if (gm.size() == 1) return 1.0;  // a size-one design equals multinomial sampling
    auto sym = symmetrized(gm);
    jacobi_sweeps<false>(sym, nullptr, 1e-13, 100);
    double top = -1e300, second = -1e300;
    for (int j = 0; j < gm.size(); ++j) {
        const double v = sym[j][j];
        if (v > top) {
            second = top;
            top = v;
        } else if (v > second) {
            second = v;
        }
    }
    return second;
}

GablerSummary gabler_summary(const InclusionMatrix& im) {
    GablerSummary s;
    s.matrix = gabler_matrix(im);
    EigenDecomposition eig = lambda2_decomposition(s.matrix);
    s.eigenvalues = eig.values;
    const int m = s.matrix.size();
    s.worst_y.assign(im.size(), 0.0);
    if (m < 2) {
        s.lambda2 = 1.0;
        return s;
    }
    s.lambda2 = eig.values[1];
    s.degenerate = std::fabs(eig.values[0] - eig.values[1]) < 1e-9 ||
                   (m > 2 && std::fabs(eig.values[1] - eig.values[2]) < 1e-9);
    for (int j = 0; j < m; ++j)
        s.worst_y[s.matrix.retained[j]] = std::sqrt(s.matrix.probs[j]) * eig.vectors[1][j];
    return s;
}

}  // namespace pivotal
