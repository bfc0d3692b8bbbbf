#include "streamfact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace streamfact {

namespace {

void require_square(const DenseMatrix& A, const char* what) {
    if (A.rows() != A.cols()) {
        throw ContractViolation(std::string(what) + ": square matrix required");
    }
}

double max_abs_entry(const DenseMatrix& A) {
    double m = 0.0;
    for (double v : A.entries()) m = std::max(m, std::fabs(v));
    return m;
}

void require_symmetric(const DenseMatrix& A, double tol, const char* what) {
    const double scale = std::max(1.0, max_abs_entry(A));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = i + 1; j < A.cols(); ++j) {
            if (std::fabs(A(i, j) - A(j, i)) > tol * scale) {
                throw ContractViolation(std::string(what) + ": matrix not symmetric");
            }
        }
    }
}

}  // namespace

DenseVector matvec(const DenseMatrix& A, const DenseVector& x) {
    if (A.cols() != x.size()) {
        throw ContractViolation("matvec: A.cols != x.len");
    }
    DenseVector y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        const double* row = A.data() + i * A.cols();
        for (std::size_t j = 0; j < A.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

DenseVector matvec_transposed(const DenseMatrix& A, const DenseVector& x) {
    if (A.rows() != x.size()) {
        throw ContractViolation("matvec_transposed: A.rows != x.len");
    }
    DenseVector y(A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double xi = x[i];
        const double* row = A.data() + i * A.cols();
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += xi * row[j];
    }
    return y;
}

DenseMatrix outer(const DenseVector& u, const DenseVector& v) {
    DenseMatrix out(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
    }
    return out;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) {
        throw ContractViolation("matmul: inner dimensions differ");
    }
    DenseMatrix out(A.rows(), B.cols());
    const std::size_t n = B.cols();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double* out_row = out.data() + i * n;
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            if (a == 0.0) continue;
            const double* b_row = B.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) out_row[j] += a * b_row[j];
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix out(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) out(j, i) = A(i, j);
    }
    return out;
}

double dot(const DenseVector& u, const DenseVector& v) {
    if (u.size() != v.size()) {
        throw ContractViolation("dot: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(const DenseVector& v) {
    return std::sqrt(dot(v, v));
}

double frobenius_norm(const DenseMatrix& A) {
    double s = 0.0;
    for (double v : A.entries()) s += v * v;
    return std::sqrt(s);
}

double trace(const DenseMatrix& A) {
    require_square(A, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) s += A(i, i);
    return s;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& A) {
    require_square(A, "cholesky");
    const std::size_t n = A.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, A(i, i));
    const double pivot_floor = 1e-12 * max_diag;

    lower_ = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
        if (!(d > pivot_floor) || !(d > 0.0)) {
            throw SingularSystem("cholesky: nonpositive pivot at index " + std::to_string(j), j);
        }
        const double ljj = std::sqrt(d);
        lower_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / ljj;
        }
    }
}

DenseVector CholeskyFactor::solve(const DenseVector& b) const {
    const std::size_t n = lower_.rows();
    if (b.size() != n) {
        throw ContractViolation("cholesky solve: length mismatch");
    }
    DenseVector x(n);
    // forward: L z = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x[k];
        x[i] = s / lower_(i, i);
    }
    // backward: L^T x = z
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

DenseMatrix CholeskyFactor::solve(const DenseMatrix& B) const {
    const std::size_t n = lower_.rows();
    if (B.rows() != n) {
        throw ContractViolation("cholesky solve: row count mismatch");
    }
    DenseMatrix X(n, B.cols());
    DenseVector col(n);
    for (std::size_t j = 0; j < B.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = B(i, j);
        DenseVector x = solve(col);
        for (std::size_t i = 0; i < n; ++i) X(i, j) = x[i];
    }
    return X;
}

DenseVector solve_spd(const DenseMatrix& A, const DenseVector& b) {
    require_square(A, "solve_spd");
    if (A.rows() != b.size()) {
        throw ContractViolation("solve_spd: dimension mismatch");
    }
    require_symmetric(A, 1e-10, "solve_spd");

    const CholeskyFactor chol(A);
    DenseVector x = chol.solve(b);

    // One refinement pass tightens the residual on ill-conditioned systems.
    DenseVector r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        double s = b[i];
        const double* row = A.data() + i * A.cols();
        for (std::size_t j = 0; j < A.cols(); ++j) s -= row[j] * x[j];
        r[i] = s;
    }
    const DenseVector dx = chol.solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
}

bool is_positive_definite(const DenseMatrix& A) {
    if (A.rows() != A.cols()) return false;
    const std::size_t n = A.rows();
    DenseMatrix L(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }
    return true;
}

DenseMatrix kron(const DenseMatrix& A, const DenseMatrix& B, std::size_t entry_cap) {
    const long double total = static_cast<long double>(A.rows()) * B.rows() *
                              static_cast<long double>(A.cols()) * B.cols();
    if (total > static_cast<long double>(entry_cap)) {
        throw CapacityExceeded("kron: result would have " + std::to_string(static_cast<double>(total)) +
                               " entries, cap is " + std::to_string(entry_cap));
    }
    const std::size_t br = B.rows(), bc = B.cols();
    DenseMatrix out(A.rows() * br, A.cols() * bc);
    for (std::size_t ia = 0; ia < A.rows(); ++ia) {
        for (std::size_t ja = 0; ja < A.cols(); ++ja) {
            const double a = A(ia, ja);
            if (a == 0.0) continue;
            for (std::size_t ib = 0; ib < br; ++ib) {
                for (std::size_t jb = 0; jb < bc; ++jb) {
                    out(ia * br + ib, ja * bc + jb) = a * B(ib, jb);
                }
            }
        }
    }
    return out;
}

DenseVector vec(const DenseMatrix& A) {
    DenseVector v(A.size());
    std::size_t idx = 0;
    for (std::size_t j = 0; j < A.cols(); ++j) {
        for (std::size_t i = 0; i < A.rows(); ++i) v[idx++] = A(i, j);
    }
    return v;
}

DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) {
        throw ContractViolation("unvec: length does not match rows*cols");
    }
    DenseMatrix A(rows, cols);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) A(i, j) = v[idx++];
    }
    return A;
}

SymmetricEigen symmetric_eigen(const DenseMatrix& A) {
    require_square(A, "symmetric_eigen");
    const std::size_t n = A.rows();

    // Work on the symmetric part; callers keep their matrices symmetric,
    // this just removes last-ulp asymmetry.
    DenseMatrix B(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) B(i, j) = 0.5 * (A(i, j) + A(j, i));
    }
    DenseMatrix Q = DenseMatrix::identity(n);

    const double scale = std::max(frobenius_norm(B), std::numeric_limits<double>::min());
    const double off_tol = 1e-14 * scale;
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * B(p, q) * B(p, q);
        }
        if (std::sqrt(off) <= off_tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = B(p, q);
                if (apq == 0.0) continue;
                const double theta = (B(q, q) - B(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double bkp = B(k, p), bkq = B(k, q);
                    B(k, p) = c * bkp - s * bkq;
                    B(k, q) = s * bkp + c * bkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double bpk = B(p, k), bqk = B(q, k);
                    B(p, k) = c * bpk - s * bqk;
                    B(q, k) = s * bpk + c * bqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double qkp = Q(k, p), qkq = Q(k, q);
                    Q(k, p) = c * qkp - s * qkq;
                    Q(k, q) = s * qkp + c * qkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&B](std::size_t a, std::size_t b) { return B(a, a) < B(b, b); });

    SymmetricEigen out;
    out.values = DenseVector(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = B(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = Q(i, order[j]);
    }
    return out;
}

double min_symmetric_eigenvalue(const DenseMatrix& A) {
    if (A.rows() == 0) return 0.0;
    return symmetric_eigen(A).values[0];
}

}  // namespace streamfact
