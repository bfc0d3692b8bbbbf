#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamfact/data_io.hpp"
#include "streamfact/dense.hpp"

namespace streamfact {

// Posterior state of the streaming factorisation filter: the dictionary
// estimate C (m x r) and the column-space covariance factor V (r x r).
// The implicit full posterior covariance over vec(C) is V (x) I_m, which is
// what makes the per-column update cheap.
struct DictionaryState {
    DenseMatrix C;       // dictionary estimate, m x r
    DenseMatrix V;       // covariance factor, r x r, symmetric PSD
    double lambda = 1.0; // observation noise scale, > 0
    std::size_t step = 0;

    std::size_t dim() const noexcept { return C.rows(); }
    std::size_t rank() const noexcept { return C.cols(); }
};

// One data column, optionally with a binary observation mask.
struct Observation {
    DenseVector y;
    std::optional<DenseVector> mask;  // entries exactly 0 or 1
    std::size_t source_index = 0;
};

struct ModelConfig {
    std::size_t rank = 1;
    double lambda = 2.0;
    double v0_scale = 1.0;
    // Relative Gram regularisation: ridge * trace(C^T C)/r is added to the
    // Gram diagonal before solving. Zero keeps the solve exact.
    double ridge = 1e-8;
    // Optional process noise for the state-space ("forgetting") variant;
    // applied as V <- V + process_noise before each measurement update.
    std::optional<DenseMatrix> process_noise;
    std::uint64_t init_seed = 0;
    // Standard deviation of the random entries of C_0; defaults to 1/sqrt(r).
    std::optional<double> init_scale;
};

// Draws C_0 (i.i.d. Gaussian, seeded) and sets V_0 = v0_scale * I.
DictionaryState init_state(const ModelConfig& cfg, std::size_t m);

// Least-squares coefficients for one column: solves
// (C^T C + ridge_eff I) x = C^T y with ridge_eff = ridge * trace(C^T C)/r.
// With ridge = 0 and full-column-rank C this is the pseudoinverse solution.
// Raises SingularSystem when the (regularised) Gram matrix is singular.
DenseVector estimate_coefficients(const DictionaryState& state, const DenseVector& y,
                                  double ridge = 0.0);

// Masked variant: rows of C and entries of y where the mask is zero drop out
// of the normal equations. With an all-ones mask this equals
// estimate_coefficients exactly.
DenseVector estimate_coefficients_masked(const DictionaryState& state, const Observation& obs,
                                         double ridge = 0.0);

// Posterior mean update,
//   C' = C + residual (V x)^T / (x^T V x + lambda),
// where residual = y - C x (masked when applicable). O(m r + r^2).
DenseMatrix mean_update(const DictionaryState& state, const DenseVector& x,
                        const DenseVector& residual);

// Posterior covariance factor update,
//   V' = V - (V x)(V x)^T / (x^T V x + lambda),
// explicitly symmetrised. If the result slips below PSD by more than
// 1e-8 * trace a NumericsError is raised; smaller negative eigenvalues are
// floored at zero.
DenseMatrix covariance_update(const DictionaryState& state, const DenseVector& x);

// Predict step of the state-space variant: V <- V + QV, C unchanged.
// QV must be symmetric PSD.
DictionaryState predict(const DictionaryState& state, const DenseMatrix& QV);

struct StepResult {
    DictionaryState state;
    bool skipped = false;          // column skipped after SingularSystem
    double residual_norm = 0.0;    // pre-update innovation norm
};

// One filter iteration: optional predict (cfg.process_noise), coefficient
// estimate (masked when the observation carries a mask), mean update with the
// (masked) residual, covariance update. On SingularSystem from the
// coefficient solve the input state is returned unchanged with skipped set.
StepResult step(const DictionaryState& state, const Observation& obs, const ModelConfig& cfg);

struct StepRecord {
    std::size_t column = 0;
    double residual_norm = 0.0;
    bool skipped = false;
};

struct PassTrace {
    std::vector<StepRecord> steps;
    std::size_t skipped_count = 0;

    double mean_residual() const;
};

// Applies step once per index in `order` (indices into data columns).
// Per-step singularities are recorded in the trace and the loop continues.
std::pair<DictionaryState, PassTrace> run_pass(DictionaryState state, const MaskedDataset& data,
                                               const ModelConfig& cfg,
                                               std::span<const std::size_t> order);

struct ReconstructionResult {
    DenseMatrix Y_hat;                        // m x n, full C x_j per column
    std::vector<std::size_t> failed_columns;  // singular coefficient solves
};

// Reconstructs every column as C x_j with x_j estimated from the observed
// entries (masked solve when the column's mask has zeros). Failed columns
// come back as zeros and are flagged.
ReconstructionResult reconstruct(const DictionaryState& state, const MaskedDataset& data,
                                 double ridge = 0.0);

}  // namespace streamfact
