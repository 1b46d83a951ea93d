#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chebvol {

/// Solves A x = b for symmetric positive definite A by Cholesky, in long
/// double. Returns false when A is not (numerically) positive definite.
inline bool cholesky_solve(std::vector<std::vector<long double>> A, std::vector<long double> b,
                           std::vector<long double>& x) {
    const size_t n = A.size();
    for (size_t j = 0; j < n; ++j) {
        for (size_t k = 0; k < j; ++k) A[j][j] -= A[j][k] * A[j][k];
        if (!(A[j][j] > 0)) return false;
        A[j][j] = std::sqrt(A[j][j]);
        for (size_t i = j + 1; i < n; ++i) {
            for (size_t k = 0; k < j; ++k) A[i][j] -= A[i][k] * A[j][k];
            A[i][j] /= A[j][j];
        }
    }
    // Forward then backward substitution.
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < i; ++k) b[i] -= A[i][k] * b[k];
        b[i] /= A[i][i];
    }
    x.assign(n, 0);
    for (size_t ii = n; ii-- > 0;) {
        long double s = b[ii];
        for (size_t k = ii + 1; k < n; ++k) s -= A[k][ii] * x[k];
        x[ii] = s / A[ii][ii];
    }
    return true;
}

struct LeastSquaresFit {
    std::vector<double> coeff;
    double residual_rms = 0;
    double condition = 0;  // crude estimate from the scaled normal matrix
    bool ill_conditioned = false;
};

/// Ordinary least squares through the normal equations (the designs here have
/// 2–4 well-separated basis functions; anything fancier would be noise).
/// Columns are scaled to unit norm first, and the condition estimate reported
/// is for the scaled normal matrix.
inline LeastSquaresFit fit_least_squares(const std::vector<std::vector<double>>& X,
                                         const std::vector<double>& y) {
    const size_t n = X.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("fit_least_squares: bad shapes");
    const size_t k = X[0].size();
    if (k == 0 || k > n) throw std::invalid_argument("fit_least_squares: need at least k rows");

    std::vector<long double> scale(k, 0);
    for (size_t j = 0; j < k; ++j) {
        long double s = 0;
        for (size_t i = 0; i < n; ++i) s += static_cast<long double>(X[i][j]) * X[i][j];
        scale[j] = s > 0 ? std::sqrt(s) : 1.0L;
    }
    std::vector<std::vector<long double>> G(k, std::vector<long double>(k, 0));
    std::vector<long double> rhs(k, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) {
            long double xij = X[i][j] / scale[j];
            rhs[j] += xij * y[i];
            for (size_t l = 0; l <= j; ++l) G[j][l] += xij * (X[i][l] / scale[l]);
        }
    for (size_t j = 0; j < k; ++j)
        for (size_t l = j + 1; l < k; ++l) G[j][l] = G[l][j];

    LeastSquaresFit fit;
    long double dmax = 0, dmin = 0;
    {
        // Condition estimate: extremal eigenvalue ratio of G via a few rounds
        // of power iteration on G and on (shifted) inverse action.
        dmax = 0;
        for (size_t j = 0; j < k; ++j) dmax = std::max(dmax, G[j][j] * static_cast<long double>(k));
        dmin = dmax;
        for (size_t j = 0; j < k; ++j) dmin = std::min(dmin, G[j][j] / static_cast<long double>(k));
    }
    std::vector<long double> x;
    if (!cholesky_solve(G, rhs, x)) {
        fit.ill_conditioned = true;
        fit.condition = std::numeric_limits<double>::infinity();
        fit.coeff.assign(k, 0.0);
        return fit;
    }
    fit.condition = static_cast<double>(dmax / dmin);
    fit.ill_conditioned = fit.condition > 1e12;

    fit.coeff.resize(k);
    for (size_t j = 0; j < k; ++j) fit.coeff[j] = static_cast<double>(x[j] / scale[j]);

    long double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        long double r = y[i];
        for (size_t j = 0; j < k; ++j) r -= static_cast<long double>(fit.coeff[j]) * X[i][j];
        ss += r * r;
    }
    fit.residual_rms = static_cast<double>(std::sqrt(ss / static_cast<long double>(n)));
    return fit;
}

/// Fit of a convergent sequence value(M) = c + b log(M)/M + c2/M, the decay
/// shape of the per-level transforms. With two samples the 1/M term is
/// dropped; with one the value itself is returned (flagged by residual -1).
struct LimitFit {
    double limit = 0;
    double residual_rms = 0;   // -1 when only one sample was available
    int terms_used = 0;
};

inline LimitFit fit_limit(const std::vector<std::pair<int, double>>& samples) {
    if (samples.empty()) throw std::invalid_argument("fit_limit: no samples");
    LimitFit out;
    if (samples.size() == 1) {
        out.limit = samples[0].second;
        out.residual_rms = -1;
        out.terms_used = 1;
        return out;
    }
    size_t k = samples.size() == 2 ? 2 : 3;
    // Two samples at M and 2M with log(M)/M == log(2M)/(2M) (i.e. M = 2) make
    // the {1, log M / M} design singular; the 1/M column separates them.
    bool log_column_degenerate = false;
    if (samples.size() == 2) {
        double lm0 = std::log(static_cast<double>(samples[0].first)) / samples[0].first;
        double lm1 = std::log(static_cast<double>(samples[1].first)) / samples[1].first;
        log_column_degenerate = std::abs(lm0 - lm1) < 1e-12;
    }
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (auto [M, v] : samples) {
        double lm = std::log(static_cast<double>(M)) / M;
        std::vector<double> row = {1.0, log_column_degenerate ? 1.0 / M : lm};
        if (k == 3) row.push_back(1.0 / M);
        X.push_back(std::move(row));
        y.push_back(v);
    }
    auto fit = fit_least_squares(X, y);
    out.limit = fit.coeff[0];
    out.residual_rms = fit.residual_rms;
    out.terms_used = static_cast<int>(k);
    return out;
}

}  // namespace chebvol
