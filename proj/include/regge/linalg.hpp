#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace regge {

// Rank with a threshold relative to the largest singular value.
inline int numeric_rank(const Eigen::MatrixXd& A, double rel_tol = 1e-9) {
    if (A.rows() == 0 || A.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double tol = rel_tol * sv(0);
    int r = 0;
    while (r < sv.size() && sv(r) > tol) ++r;
    return r;
}

// Orthonormal basis of the null space of A (columns), threshold relative
// to the largest singular value. A zero matrix has a full null space.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel_tol = 1e-9) {
    if (A.cols() == 0) return Eigen::MatrixXd(0, 0);
    if (A.rows() == 0) return Eigen::MatrixXd::Identity(A.cols(), A.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rel_tol * smax;
    int r = 0;
    while (r < sv.size() && sv(r) > tol) ++r;
    return svd.matrixV().rightCols(A.cols() - r);
}

// Component of each column of X orthogonal to the column span of B.
inline Eigen::MatrixXd project_out(const Eigen::MatrixXd& X, const Eigen::MatrixXd& B) {
    if (B.cols() == 0) return X;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(B.rows(), B.cols());
    const int r = numeric_rank(B);
    Q = Q.leftCols(r);
    return X - Q * (Q.transpose() * X);
}

// Orthonormal basis of the column span, threshold relative to the largest
// singular value.
inline Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& X, double rel_tol = 1e-9) {
    if (X.cols() == 0) return X;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rel_tol * smax;
    int r = 0;
    while (r < sv.size() && sv(r) > tol) ++r;
    return svd.matrixU().leftCols(r);
}

struct Signature {
    int negative = 0;
    int zero = 0;
    int positive = 0;

    bool operator==(const Signature&) const = default;
};

struct SymmetricSpectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;
    Signature signature;
    double zero_threshold = 0.0;
    // Separation between the zero cluster and the nonzero spectrum:
    // min |nonzero eigenvalue| / max |zero eigenvalue|. With no zero
    // eigenvalues this is min |eigenvalue| / threshold; with nothing on
    // one side it is +inf.
    double gap_ratio = 0.0;
};

// Eigendecomposition of a symmetric matrix with a zero cluster defined by
// |lambda| < zero_threshold_rel * max(1, ||M||_2).
inline SymmetricSpectrum symmetric_spectrum(const Eigen::MatrixXd& M,
                                            double zero_threshold_rel = 1e-7) {
    SymmetricSpectrum out;
    const int n = static_cast<int>(M.rows());
    if (n == 0) {
        out.zero_threshold = zero_threshold_rel;
        out.gap_ratio = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw Error("symmetric_spectrum: eigensolver failed");
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    const double norm2 = std::max(std::abs(out.eigenvalues(0)),
                                  std::abs(out.eigenvalues(n - 1)));
    out.zero_threshold = zero_threshold_rel * std::max(1.0, norm2);

    double max_zero = 0.0;
    double min_nonzero = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(out.eigenvalues(i));
        if (a < out.zero_threshold) {
            ++out.signature.zero;
            max_zero = std::max(max_zero, a);
        } else {
            min_nonzero = std::min(min_nonzero, a);
            if (out.eigenvalues(i) < 0)
                ++out.signature.negative;
            else
                ++out.signature.positive;
        }
    }
    if (out.signature.zero == 0) {
        out.gap_ratio = min_nonzero / out.zero_threshold;
    } else if (out.signature.zero == n) {
        out.gap_ratio = std::numeric_limits<double>::infinity();
    } else {
        out.gap_ratio = max_zero > 0.0 ? min_nonzero / max_zero
                                       : std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace regge
