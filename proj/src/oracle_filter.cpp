#include "streamfact/oracle_filter.hpp"

#include <cmath>
#include <string>

namespace streamfact {

DenseMatrix observation_matrix(const DenseVector& x, std::size_t m, std::size_t entry_cap) {
    DenseMatrix x_row(1, x.size());
    for (std::size_t j = 0; j < x.size(); ++j) x_row(0, j) = x[j];
    return kron(x_row, DenseMatrix::identity(m), entry_cap);
}

FullFilterState full_step(const FullFilterState& state, const DenseVector& x,
                          const DenseVector& y) {
    const std::size_t m = state.m;
    const std::size_t mr = m * state.r;
    if (x.size() != state.r || y.size() != m || state.c.size() != mr ||
        state.P.rows() != mr || state.P.cols() != mr) {
        throw ContractViolation("full_step: inconsistent dimensions");
    }

    const DenseMatrix H = observation_matrix(x, m);
    const DenseMatrix PHt = matmul(state.P, transpose(H));  // mr x m

    // innovation covariance S = H P H^T + lambda I
    DenseMatrix S = matmul(H, PHt);
    for (std::size_t i = 0; i < m; ++i) S(i, i) += state.lambda;

    DenseVector innovation = matvec(H, state.c);
    for (std::size_t i = 0; i < m; ++i) innovation[i] = y[i] - innovation[i];

    const CholeskyFactor chol(S);  // SPD for lambda > 0

    FullFilterState out;
    out.m = state.m;
    out.r = state.r;
    out.lambda = state.lambda;

    const DenseVector gain_rhs = chol.solve(innovation);
    out.c = state.c;
    for (std::size_t i = 0; i < mr; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += PHt(i, k) * gain_rhs[k];
        out.c[i] += s;
    }

    // P' = P - P H^T S^{-1} (P H^T)^T, then symmetrised
    const DenseMatrix SinvPHtT = chol.solve(transpose(PHt));  // m x mr
    const DenseMatrix correction = matmul(PHt, SinvPHtT);
    out.P = DenseMatrix(mr, mr);
    for (std::size_t i = 0; i < mr; ++i) {
        for (std::size_t j = i; j < mr; ++j) {
            const double a = state.P(i, j) - correction(i, j);
            const double b = state.P(j, i) - correction(j, i);
            const double v = 0.5 * (a + b);
            out.P(i, j) = v;
            out.P(j, i) = v;
        }
    }
    return out;
}

FullFilterState from_dictionary(const DictionaryState& state) {
    FullFilterState out;
    out.m = state.dim();
    out.r = state.rank();
    out.lambda = state.lambda;
    out.c = vec(state.C);
    out.P = kron(state.V, DenseMatrix::identity(out.m));
    return out;
}

DictionaryView to_dictionary(const FullFilterState& state) {
    const std::size_t m = state.m;
    const std::size_t r = state.r;
    if (state.c.size() != m * r || state.P.rows() != m * r || state.P.cols() != m * r) {
        throw ContractViolation("to_dictionary: inconsistent dimensions");
    }

    // V from block traces: block (a,b) of P should be V(a,b) * I_m.
    DenseMatrix V(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = 0; b < r; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += state.P(a * m + i, b * m + i);
            V(a, b) = s / static_cast<double>(m);
        }
    }
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            const double sym = 0.5 * (V(a, b) + V(b, a));
            V(a, b) = sym;
            V(b, a) = sym;
        }
    }

    double residual_sq = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = 0; b < r; ++b) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    const double expected = i == j ? V(a, b) : 0.0;
                    const double d = state.P(a * m + i, b * m + j) - expected;
                    residual_sq += d * d;
                }
            }
        }
    }
    const double p_norm = frobenius_norm(state.P);
    if (std::sqrt(residual_sq) > 1e-8 * p_norm) {
        throw StructureBroken("to_dictionary: P deviates from V (x) I by relative " +
                              std::to_string(p_norm > 0.0 ? std::sqrt(residual_sq) / p_norm : 0.0));
    }

    return {unvec(state.c, m, r), std::move(V)};
}

}  // namespace streamfact
