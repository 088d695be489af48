#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "xprod/errors.hpp"

namespace xprod {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Global default relative tolerance. The underlying theory is exact; every
/// equality in this library becomes a residual check against this scale.
inline constexpr double kDefaultTol = 1e-9;

/// Which vector norm a space carries; operator norms are induced from it.
enum class VecNorm { L1, L2, Linf };

inline const char* to_string(VecNorm k) {
    switch (k) {
        case VecNorm::L1: return "l1";
        case VecNorm::L2: return "l2";
        case VecNorm::Linf: return "linf";
    }
    return "?";
}

inline std::optional<VecNorm> parse_vec_norm(const std::string& s) {
    if (s == "l1" || s == "L1") return VecNorm::L1;
    if (s == "l2" || s == "L2") return VecNorm::L2;
    if (s == "linf" || s == "Linf" || s == "LINF") return VecNorm::Linf;
    return std::nullopt;
}

/// Exact induced operator norm of a dense matrix.
///   L1   -> max absolute column sum
///   Linf -> max absolute row sum
///   L2   -> largest singular value (Jacobi rotations, deterministic)
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m, VecNorm k) {
    if (m.rows() == 0 || m.cols() == 0)
        throw DimensionError("op_norm: empty matrix");
    switch (k) {
        case VecNorm::L1:
            return m.cwiseAbs().colwise().sum().maxCoeff();
        case VecNorm::Linf:
            return m.cwiseAbs().rowwise().sum().maxCoeff();
        case VecNorm::L2: {
            Eigen::JacobiSVD<typename Derived::PlainObject> svd(m.derived());
            return svd.singularValues()(0);
        }
    }
    throw Error("op_norm: unreachable");
}

template <typename Derived>
double vec_norm(const Eigen::MatrixBase<Derived>& v, VecNorm k) {
    switch (k) {
        case VecNorm::L1: return v.cwiseAbs().sum();
        case VecNorm::L2: return v.norm();
        case VecNorm::Linf: return v.cwiseAbs().maxCoeff();
    }
    throw Error("vec_norm: unreachable");
}

/// Orthonormal basis (columns) of the numerical null space
/// { v : ||m v|| <= tol * ||m|| * ||v|| }, via singular vectors whose
/// singular value falls below tol * sigma_max.
inline Mat null_space(const Mat& m, double tol = kDefaultTol) {
    if (tol <= 0) throw PreconditionError("null_space: tol must be positive");
    if (m.rows() == 0 || m.cols() == 0)
        return Mat::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index nullity = m.cols() - sv.size();  // columns beyond min(r,c)
    for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
        if (sv(i) <= tol * smax)
            ++nullity;
        else
            break;
    }
    return svd.matrixV().rightCols(nullity);
}

inline Eigen::Index rank(const Mat& m, double tol = kDefaultTol) {
    return m.cols() - null_space(m, tol).cols();
}

struct LeastSquares {
    Vec x;
    double residual;  // ||m x - b||_2
};

/// Minimum-norm least squares solution of m x = b.
inline LeastSquares solve_least_squares(const Mat& m, const Vec& b) {
    if (m.rows() != b.size())
        throw DimensionError("solve_least_squares: rhs length " +
                             std::to_string(b.size()) + " != rows " +
                             std::to_string(m.rows()));
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec x = svd.solve(b);
    return LeastSquares{x, (m * x - b).norm()};
}

/// Reduced row echelon form with partial pivoting.
/// Rows span the same space afterwards; `pivots` lists the pivot columns in
/// processing order, and the pivot submatrix is the identity.
struct RowReduction {
    Mat rref;                          // r x n, r = number of pivots
    std::vector<Eigen::Index> pivots;  // length r
};

inline RowReduction row_reduce(Mat m, double tol = kDefaultTol) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    const double scale = rows * cols > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    std::vector<Eigen::Index> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index best = r;
        double best_abs = std::abs(m(r, c));
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            if (std::abs(m(i, c)) > best_abs) {
                best_abs = std::abs(m(i, c));
                best = i;
            }
        }
        if (best_abs <= tol * std::max(scale, 1e-300)) continue;
        m.row(r).swap(m.row(best));
        m.row(r) /= m(r, c);
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i != r && m(i, c) != Complex(0, 0)) m.row(i) -= m(i, c) * m.row(r);
        }
        pivots.push_back(c);
        ++r;
    }
    RowReduction out;
    out.rref = m.topRows(r);
    out.pivots = std::move(pivots);
    return out;
}

/// Orthonormal basis of the column space (columns with singular value above
/// tol * sigma_max).
inline Mat column_space(const Mat& m, double tol = kDefaultTol) {
    if (m.rows() == 0 || m.cols() == 0) return Mat(m.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > tol * smax) ++r;
    return svd.matrixU().leftCols(r);
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Relative difference between two same-shape matrices.
inline double rel_residual(const Mat& a, const Mat& b) {
    double scale = 1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline double rel_residual(const Vec& a, const Vec& b) {
    double scale = 1.0;
    if (a.size() > 0) scale += std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace xprod
