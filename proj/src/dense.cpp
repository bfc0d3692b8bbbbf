#include "streamfact/dense.hpp"

#include <cmath>

namespace streamfact {

namespace {

void require_finite(const std::vector<double>& entries, const char* what) {
    for (double v : entries) {
        if (!std::isfinite(v)) {
            throw ContractViolation(std::string(what) + ": non-finite entry");
        }
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw ContractViolation("DenseMatrix: entry count does not match rows*cols");
    }
    require_finite(entries_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw ContractViolation("DenseMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    require_finite(entries_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    return scaled_identity(n, 1.0);
}

DenseMatrix DenseMatrix::scaled_identity(std::size_t n, double value) {
    if (!std::isfinite(value)) {
        throw ContractViolation("scaled_identity: non-finite value");
    }
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = value;
    return out;
}

DenseVector::DenseVector(std::size_t len) : entries_(len, 0.0) {}

DenseVector::DenseVector(std::vector<double> entries) : entries_(std::move(entries)) {
    require_finite(entries_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> entries)
    : entries_(entries.begin(), entries.end()) {
    require_finite(entries_, "DenseVector");
}

}  // namespace streamfact
