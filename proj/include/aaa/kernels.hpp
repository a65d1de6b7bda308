#pragma once

// Dense linear-algebra primitives: minimal singular vector of a tall matrix
// and the finite eigenvalues of an arrowhead pencil.  Both come in a real and
// a complex flavor; the real flavor keeps eigenvalues in exact conjugate
// pairs, which the pole classification relies on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Core>
#include <Eigen/SVD>

namespace aaa {

using Complex = std::complex<double>;

struct InvalidMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct KernelFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Rotate (or flip) so the first entry of largest modulus is real and >= 0.
// Makes the SVD-based weight vector deterministic across runs.
template <class Vec>
void normalize_phase(Vec& w) {
    Eigen::Index k = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        double a = std::abs(w[i]);
        if (a > best) {
            best = a;
            k = i;
        }
    }
    if (best <= 0.0) return;
    if constexpr (std::is_same_v<typename Vec::Scalar, double>) {
        if (w[k] < 0.0) w = -w;
    } else {
        Complex ph = std::conj(w[k]) / std::abs(w[k]);
        w *= ph;
    }
}

} // namespace detail

/// Right singular vector of the smallest singular value of A, ||w|| = 1.
/// Requires rows >= cols >= 1 and finite entries.
template <class Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic>
min_singular_vector(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A) {
    if (A.rows() < A.cols() || A.cols() < 1)
        throw InvalidMatrix("min_singular_vector: need rows >= cols >= 1, got " +
                            std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
    if (!A.allFinite()) throw InvalidMatrix("min_singular_vector: non-finite entry");

    Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
        A, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw KernelFailure("min_singular_vector: SVD did not converge");
    Eigen::Vector<Scalar, Eigen::Dynamic> w = svd.matrixV().col(A.cols() - 1);
    w.normalize();
    detail::normalize_phase(w);
    return w;
}

namespace detail {

// Eigenvalues with |lambda| above this are the pencil's infinite pair as
// reported by finite-precision QZ; they are discarded.
inline constexpr double kInfiniteEigCutoff = 1e14;

inline std::vector<Complex> filter_finite(std::vector<Complex> eigs) {
    std::vector<Complex> out;
    out.reserve(eigs.size());
    for (const Complex& z : eigs)
        if (finite(z) && std::abs(z) < kInfiniteEigCutoff) out.push_back(z);
    return out;
}

} // namespace detail

/// Finite generalized eigenvalues of the (m+1)x(m+1) arrowhead pencil (B, E):
/// B has first row [0, top_row], first column [0;1;...;1] and diag on the
/// remaining diagonal; E is the identity with E(1,1) = 0.  These are the
/// roots of sum_j top_row[j] / (x - diag[j]); generically there are m-1.
inline std::vector<Complex> arrowhead_pencil_eigenvalues(std::span<const double> diag,
                                                         std::span<const double> top_row) {
    const int m = static_cast<int>(diag.size());
    if (m < 2 || top_row.size() != diag.size())
        throw InvalidMatrix("arrowhead pencil: need m >= 2 with matching top row");
    const int n = m + 1;
    std::vector<double> B(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> E(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < m; ++j) {
        B[static_cast<size_t>(0) * n + (j + 1)] = top_row[j];
        B[static_cast<size_t>(j + 1) * n + 0] = 1.0;
        B[static_cast<size_t>(j + 1) * n + (j + 1)] = diag[j];
        E[static_cast<size_t>(j + 1) * n + (j + 1)] = 1.0;
    }
    std::vector<double> ar(n), ai(n), be(n);
    int info = LAPACKE_dggev(LAPACK_ROW_MAJOR, 'N', 'N', n, B.data(), n, E.data(), n,
                             ar.data(), ai.data(), be.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw KernelFailure("dggev failed, info=" + std::to_string(info));
    std::vector<Complex> eigs;
    eigs.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (be[i] == 0.0) continue;
        eigs.emplace_back(ar[i] / be[i], ai[i] / be[i]);
    }
    return detail::filter_finite(std::move(eigs));
}

inline std::vector<Complex> arrowhead_pencil_eigenvalues(std::span<const Complex> diag,
                                                         std::span<const Complex> top_row) {
    const int m = static_cast<int>(diag.size());
    if (m < 2 || top_row.size() != diag.size())
        throw InvalidMatrix("arrowhead pencil: need m >= 2 with matching top row");
    const int n = m + 1;
    std::vector<Complex> B(static_cast<size_t>(n) * n, Complex(0.0));
    std::vector<Complex> E(static_cast<size_t>(n) * n, Complex(0.0));
    for (int j = 0; j < m; ++j) {
        B[static_cast<size_t>(0) * n + (j + 1)] = top_row[j];
        B[static_cast<size_t>(j + 1) * n + 0] = 1.0;
        B[static_cast<size_t>(j + 1) * n + (j + 1)] = diag[j];
        E[static_cast<size_t>(j + 1) * n + (j + 1)] = 1.0;
    }
    std::vector<Complex> alpha(n), beta(n);
    int info = LAPACKE_zggev(LAPACK_ROW_MAJOR, 'N', 'N', n, B.data(), n, E.data(), n,
                             alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw KernelFailure("zggev failed, info=" + std::to_string(info));
    std::vector<Complex> eigs;
    eigs.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (beta[i] == Complex(0.0)) continue;
        eigs.push_back(alpha[i] / beta[i]);
    }
    return detail::filter_finite(std::move(eigs));
}

inline std::vector<Complex> arrowhead_pencil_eigenvalues(const std::vector<double>& diag,
                                                         const std::vector<double>& top_row) {
    return arrowhead_pencil_eigenvalues(std::span<const double>(diag),
                                        std::span<const double>(top_row));
}

inline std::vector<Complex> arrowhead_pencil_eigenvalues(const std::vector<Complex>& diag,
                                                         const std::vector<Complex>& top_row) {
    return arrowhead_pencil_eigenvalues(std::span<const Complex>(diag),
                                        std::span<const Complex>(top_row));
}

} // namespace aaa
