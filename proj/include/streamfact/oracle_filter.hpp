#pragma once

#include <cstddef>

#include "streamfact/dense.hpp"
#include "streamfact/factor_model.hpp"
#include "streamfact/linalg.hpp"

namespace streamfact {

// Brute-force filter over the stacked dictionary c = vec(C) with a dense
// mr x mr covariance. Deliberately naive: it exists to certify the
// matrix-variate recursions at desk scale, not to run experiments.
struct FullFilterState {
    DenseVector c;   // length m*r
    DenseMatrix P;   // mr x mr, symmetric PSD
    std::size_t m = 0;
    std::size_t r = 0;
    double lambda = 1.0;
};

// H = x^T (x) I_m, the m x (m r) observation matrix for one column.
DenseMatrix observation_matrix(const DenseVector& x, std::size_t m,
                               std::size_t entry_cap = kDefaultKronCap);

// Textbook recursive least squares measurement update with
// H = observation_matrix(x, m) and R = lambda * I_m.
FullFilterState full_step(const FullFilterState& state, const DenseVector& x,
                          const DenseVector& y);

// Lifts a matrix-variate state into the stacked representation:
// c = vec(C), P = V (x) I_m.
FullFilterState from_dictionary(const DictionaryState& state);

struct DictionaryView {
    DenseMatrix C;
    DenseMatrix V;
};

// Extracts (C, V) back out of a stacked state, verifying that P is still of
// the form V (x) I_m within 1e-8 relative Frobenius error. StructureBroken
// otherwise.
DictionaryView to_dictionary(const FullFilterState& state);

}  // namespace streamfact
