#include "streamfact/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "streamfact/linalg.hpp"

namespace streamfact {

namespace {

void validate_config(const ModelConfig& cfg) {
    if (cfg.rank == 0) throw ContractViolation("ModelConfig: rank must be >= 1");
    if (!(cfg.lambda > 0.0)) throw ContractViolation("ModelConfig: lambda must be > 0");
    if (!(cfg.v0_scale > 0.0)) throw ContractViolation("ModelConfig: v0_scale must be > 0");
    if (!(cfg.ridge >= 0.0)) throw ContractViolation("ModelConfig: ridge must be >= 0");
    if (cfg.init_scale && !(*cfg.init_scale > 0.0)) {
        throw ContractViolation("ModelConfig: init_scale must be > 0");
    }
}

void validate_observation(const Observation& obs, std::size_t m) {
    if (obs.y.size() != m) {
        throw ContractViolation("Observation: y length does not match state dimension");
    }
    if (obs.mask) {
        if (obs.mask->size() != m) {
            throw ContractViolation("Observation: mask length does not match y");
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double v = (*obs.mask)[i];
            if (v != 0.0 && v != 1.0) {
                throw ContractViolation("Observation: mask entries must be exactly 0 or 1");
            }
        }
    }
}

// Gram matrix C^T C built exactly symmetric.
DenseMatrix gram(const DenseMatrix& C) {
    const std::size_t r = C.cols();
    DenseMatrix G(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < C.rows(); ++i) s += C(i, a) * C(i, b);
            G(a, b) = s;
            G(b, a) = s;
        }
    }
    return G;
}

DenseVector solve_normal_equations(const DenseMatrix& C, const DenseVector& rhs, double ridge) {
    DenseMatrix G = gram(C);
    if (ridge > 0.0 && G.rows() > 0) {
        const double effective = ridge * trace(G) / static_cast<double>(G.rows());
        for (std::size_t a = 0; a < G.rows(); ++a) G(a, a) += effective;
    }
    return solve_spd(G, rhs);
}

// min eigenvalue check that avoids the Jacobi sweep when a Gershgorin bound
// or a plain Cholesky already certifies positive semidefiniteness.
bool certified_psd(const DenseMatrix& A) {
    double gershgorin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (j != i) radius += std::fabs(A(i, j));
        }
        gershgorin = std::min(gershgorin, A(i, i) - radius);
    }
    if (A.rows() == 0 || gershgorin >= 0.0) return true;
    return is_positive_definite(A);
}

}  // namespace

DictionaryState init_state(const ModelConfig& cfg, std::size_t m) {
    validate_config(cfg);
    if (m == 0) throw ContractViolation("init_state: m must be >= 1");

    const double scale = cfg.init_scale
                             ? *cfg.init_scale
                             : 1.0 / std::sqrt(static_cast<double>(cfg.rank));
    std::mt19937_64 engine(cfg.init_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    DictionaryState s;
    s.C = DenseMatrix(m, cfg.rank);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < cfg.rank; ++j) s.C(i, j) = scale * gauss(engine);
    }
    s.V = DenseMatrix::scaled_identity(cfg.rank, cfg.v0_scale);
    s.lambda = cfg.lambda;
    s.step = 0;
    return s;
}

DenseVector estimate_coefficients(const DictionaryState& state, const DenseVector& y,
                                  double ridge) {
    if (y.size() != state.dim()) {
        throw ContractViolation("estimate_coefficients: y length != m");
    }
    const DenseVector rhs = matvec_transposed(state.C, y);
    return solve_normal_equations(state.C, rhs, ridge);
}

DenseVector estimate_coefficients_masked(const DictionaryState& state, const Observation& obs,
                                         double ridge) {
    if (!obs.mask) {
        throw ContractViolation("estimate_coefficients_masked: observation has no mask");
    }
    validate_observation(obs, state.dim());

    const std::size_t m = state.dim();
    const std::size_t r = state.rank();
    const DenseVector& mask = *obs.mask;

    DenseMatrix masked_C(m, r);
    DenseVector masked_y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double mi = mask[i];
        masked_y[i] = mi * obs.y[i];
        for (std::size_t j = 0; j < r; ++j) masked_C(i, j) = mi * state.C(i, j);
    }
    const DenseVector rhs = matvec_transposed(masked_C, masked_y);
    return solve_normal_equations(masked_C, rhs, ridge);
}

DenseMatrix mean_update(const DictionaryState& state, const DenseVector& x,
                        const DenseVector& residual) {
    if (x.size() != state.rank()) {
        throw ContractViolation("mean_update: x length != r");
    }
    if (residual.size() != state.dim()) {
        throw ContractViolation("mean_update: residual length != m");
    }
    const DenseVector Vx = matvec(state.V, x);
    const double denom = dot(x, Vx) + state.lambda;
    if (!(denom > 0.0)) {
        throw NumericsError("mean_update: nonpositive gain denominator, V lost PSD");
    }

    // rank-one update C + residual * (Vx/denom)^T
    DenseMatrix C = state.C;
    const std::size_t r = state.rank();
    DenseVector w(r);
    for (std::size_t j = 0; j < r; ++j) w[j] = Vx[j] / denom;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double ri = residual[i];
        if (ri == 0.0) continue;
        for (std::size_t j = 0; j < r; ++j) C(i, j) += ri * w[j];
    }
    return C;
}

DenseMatrix covariance_update(const DictionaryState& state, const DenseVector& x) {
    if (x.size() != state.rank()) {
        throw ContractViolation("covariance_update: x length != r");
    }
    const std::size_t r = state.rank();
    const DenseVector Vx = matvec(state.V, x);
    const double denom = dot(x, Vx) + state.lambda;
    if (!(denom > 0.0)) {
        throw NumericsError("covariance_update: nonpositive denominator, V lost PSD");
    }

    // V - (Vx)(Vx)^T/denom on the symmetric part, mirrored so the result is
    // symmetric to the last bit.
    DenseMatrix V(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            const double sym = 0.5 * (state.V(a, b) + state.V(b, a));
            const double v = sym - Vx[a] * Vx[b] / denom;
            V(a, b) = v;
            V(b, a) = v;
        }
    }

    if (certified_psd(V)) return V;

    // Eigenvalue floor for roundoff-level negatives; anything larger means
    // the recursion itself went wrong.
    const SymmetricEigen eig = symmetric_eigen(V);
    const double tr = trace(V);
    const double min_eig = eig.values[0];
    if (min_eig < -1e-8 * std::max(tr, 0.0) || tr < 0.0) {
        throw NumericsError("covariance_update: V indefinite beyond tolerance (min eig " +
                            std::to_string(min_eig) + ", trace " + std::to_string(tr) + ")");
    }
    if (min_eig >= 0.0) return V;

    DenseMatrix repaired(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) {
                const double lam = std::max(eig.values[k], 0.0);
                s += lam * eig.vectors(a, k) * eig.vectors(b, k);
            }
            repaired(a, b) = s;
            repaired(b, a) = s;
        }
    }
    return repaired;
}

DictionaryState predict(const DictionaryState& state, const DenseMatrix& QV) {
    const std::size_t r = state.rank();
    if (QV.rows() != r || QV.cols() != r) {
        throw ContractViolation("predict: QV must be r x r");
    }
    const double scale = std::max(1.0, frobenius_norm(QV));
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            if (std::fabs(QV(a, b) - QV(b, a)) > 1e-10 * scale) {
                throw ContractViolation("predict: QV must be symmetric");
            }
        }
    }
    if (!certified_psd(QV) && min_symmetric_eigenvalue(QV) < -1e-10 * scale) {
        throw ContractViolation("predict: QV must be positive semidefinite");
    }

    DictionaryState out = state;
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = 0; b < r; ++b) out.V(a, b) += QV(a, b);
    }
    return out;
}

StepResult step(const DictionaryState& state, const Observation& obs, const ModelConfig& cfg) {
    validate_observation(obs, state.dim());

    const DictionaryState* working = &state;
    DictionaryState predicted;
    if (cfg.process_noise) {
        predicted = predict(state, *cfg.process_noise);
        working = &predicted;
    }

    DenseVector x;
    try {
        x = obs.mask ? estimate_coefficients_masked(*working, obs, cfg.ridge)
                     : estimate_coefficients(*working, obs.y, cfg.ridge);
    } catch (const SingularSystem&) {
        // skip-column policy: report and leave the state untouched
        return {state, true, 0.0};
    }

    const std::size_t m = state.dim();
    DenseVector residual = matvec(working->C, x);
    for (std::size_t i = 0; i < m; ++i) residual[i] = obs.y[i] - residual[i];
    if (obs.mask) {
        for (std::size_t i = 0; i < m; ++i) residual[i] *= (*obs.mask)[i];
    }
    const double res_norm = norm(residual);

    StepResult out;
    out.state.C = mean_update(*working, x, residual);
    out.state.V = covariance_update(*working, x);
    out.state.lambda = state.lambda;
    out.state.step = state.step + 1;
    out.residual_norm = res_norm;
    return out;
}

double PassTrace::mean_residual() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& s : steps) {
        if (!s.skipped) {
            sum += s.residual_norm;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::pair<DictionaryState, PassTrace> run_pass(DictionaryState state, const MaskedDataset& data,
                                               const ModelConfig& cfg,
                                               std::span<const std::size_t> order) {
    const std::size_t n = data.count();
    PassTrace trace;
    trace.steps.reserve(order.size());

    for (const std::size_t idx : order) {
        if (idx >= n) {
            throw ContractViolation("run_pass: order index " + std::to_string(idx) +
                                    " out of range for " + std::to_string(n) + " columns");
        }
        Observation obs;
        obs.y = column(data.Y, idx);
        obs.source_index = idx;
        if (!column_all_ones(data.M, idx)) obs.mask = column(data.M, idx);

        StepResult result = step(state, obs, cfg);
        trace.steps.push_back({idx, result.residual_norm, result.skipped});
        if (result.skipped) {
            ++trace.skipped_count;
        } else {
            state = std::move(result.state);
        }
    }
    return {std::move(state), std::move(trace)};
}

ReconstructionResult reconstruct(const DictionaryState& state, const MaskedDataset& data,
                                 double ridge) {
    if (data.dim() != state.dim()) {
        throw ContractViolation("reconstruct: dataset dimension != state dimension");
    }
    ReconstructionResult out;
    out.Y_hat = DenseMatrix(data.dim(), data.count());

    for (std::size_t j = 0; j < data.count(); ++j) {
        DenseVector x;
        try {
            if (column_all_ones(data.M, j)) {
                x = estimate_coefficients(state, column(data.Y, j), ridge);
            } else {
                Observation obs;
                obs.y = column(data.Y, j);
                obs.mask = column(data.M, j);
                obs.source_index = j;
                x = estimate_coefficients_masked(state, obs, ridge);
            }
        } catch (const SingularSystem&) {
            out.failed_columns.push_back(j);
            continue;  // column stays zero
        }
        const DenseVector y_hat = matvec(state.C, x);
        set_column(out.Y_hat, j, y_hat);
    }
    return out;
}

}  // namespace streamfact
