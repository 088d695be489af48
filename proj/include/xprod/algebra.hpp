#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xprod/linalg.hpp"

namespace xprod {

/// A finite-dimensional normed algebra, realized by a linearly independent
/// matrix basis inside an ambient matrix space. The norm is the induced
/// operator norm of the represented matrix, so submultiplicativity is
/// inherited from the ambient algebra rather than certified after the fact.
///
/// Elements are coordinate vectors in the basis; products go through the
/// structure constants extracted at build time.
struct NormedAlgebra {
    int ambient_dim = 0;          // m: basis matrices are m x m
    std::vector<Mat> basis;       // k linearly independent matrices
    VecNorm norm_kind = VecNorm::L2;
    std::vector<Mat> mult;        // mult[i] is k x k; column j = coords of basis_i * basis_j
    bool involutive = false;      // span closed under conjugate transpose
    Mat star_coords;              // k x k; star(a) = star_coords * conj(a)
    double tol = kDefaultTol;

    int dim() const { return static_cast<int>(basis.size()); }

    Mat represent(const Vec& a) const {
        Mat out = Mat::Zero(ambient_dim, ambient_dim);
        for (int i = 0; i < dim(); ++i) out += a(i) * basis[i];
        return out;
    }

    Vec mul(const Vec& a, const Vec& b) const {
        Vec out = Vec::Zero(dim());
        for (int i = 0; i < dim(); ++i)
            if (a(i) != Complex(0, 0)) out += a(i) * (mult[i] * b);
        return out;
    }

    double norm(const Vec& a) const { return op_norm(represent(a), norm_kind); }

    Vec star(const Vec& a) const {
        if (!involutive)
            throw UnsupportedError("algebra: star on a non-involutive algebra");
        return star_coords * a.conjugate();
    }

    Vec unit_coord(int i) const { return Vec::Unit(dim(), i); }
};

namespace detail {

inline Vec vec_of(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

}  // namespace detail

/// Builds an algebra from basis matrices: extracts structure constants by
/// least squares per product, validates linear independence and
/// multiplicative closure, and detects whether the span is closed under
/// conjugate transposition.
inline NormedAlgebra build_algebra(std::vector<Mat> basis, VecNorm norm_kind,
                                   double tol = kDefaultTol) {
    if (tol <= 0) throw PreconditionError("build_algebra: tol must be positive");
    if (basis.empty()) throw ValidationError("algebra: empty basis");
    const int m = static_cast<int>(basis[0].rows());
    const int k = static_cast<int>(basis.size());
    for (const Mat& b : basis)
        if (b.rows() != m || b.cols() != m)
            throw DimensionError("algebra: basis matrices must all be " +
                                 std::to_string(m) + "x" + std::to_string(m));

    Mat flat(static_cast<Eigen::Index>(m) * m, k);
    for (int i = 0; i < k; ++i) flat.col(i) = detail::vec_of(basis[i]);
    if (rank(flat, tol) != k)
        throw ValidationError("algebra: basis is linearly dependent");

    NormedAlgebra A;
    A.ambient_dim = m;
    A.basis = std::move(basis);
    A.norm_kind = norm_kind;
    A.tol = tol;

    // Structure constants; worst closure violation is reported with its pair.
    A.mult.assign(k, Mat::Zero(k, k));
    double worst = 0;
    int worst_i = 0, worst_j = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            Mat prod = A.basis[i] * A.basis[j];
            LeastSquares ls = solve_least_squares(flat, detail::vec_of(prod));
            double rel = ls.residual / (1.0 + prod.norm());
            if (rel > worst) {
                worst = rel;
                worst_i = i;
                worst_j = j;
            }
            A.mult[i].col(j) = ls.x;
        }
    }
    if (worst > tol)
        throw ValidationError("algebra: not multiplicatively closed; worst pair (" +
                              std::to_string(worst_i) + "," + std::to_string(worst_j) +
                              ") has relative residual " + std::to_string(worst));

    // Involutive closure: basis_i^H in span(basis) for all i, and the induced
    // conjugate-linear coordinate map squares to the identity.
    Mat st(k, k);
    bool closed = true;
    for (int i = 0; i < k && closed; ++i) {
        Mat adj = A.basis[i].adjoint();
        LeastSquares ls = solve_least_squares(flat, detail::vec_of(adj));
        if (ls.residual / (1.0 + adj.norm()) > tol)
            closed = false;
        else
            st.col(i) = ls.x;
    }
    if (closed && (st * st.conjugate() - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > tol)
        closed = false;
    A.involutive = closed;
    if (closed) A.star_coords = st;
    return A;
}

namespace detail {

// Stacks the equations u * b_i = b_i (left) or b_i * u = b_i (right) over all
// basis elements and solves for u by least squares.
inline std::optional<Vec> solve_identity(const NormedAlgebra& A, bool left) {
    const int k = A.dim();
    Mat system(static_cast<Eigen::Index>(k) * k, k);
    Vec rhs(static_cast<Eigen::Index>(k) * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            // coords of b_j * b_i (left) resp. b_i * b_j (right)
            system.block(static_cast<Eigen::Index>(i) * k, j, k, 1) =
                left ? A.mult[j].col(i) : A.mult[i].col(j);
        }
        rhs.segment(static_cast<Eigen::Index>(i) * k, k) = Vec::Unit(k, i);
    }
    LeastSquares ls = solve_least_squares(system, rhs);
    if (ls.residual > A.tol * (1.0 + rhs.norm())) return std::nullopt;
    return ls.x;
}

}  // namespace detail

/// Left identity u (u a = a for all a), if one exists. ||u|| is the available
/// stand-in upper bound for the approximate-left-identity constant of A.
inline std::optional<Vec> find_left_identity(const NormedAlgebra& A) {
    return detail::solve_identity(A, true);
}

inline std::optional<Vec> find_right_identity(const NormedAlgebra& A) {
    return detail::solve_identity(A, false);
}

/// The scalar field as a 1-dimensional unital algebra.
inline NormedAlgebra field_algebra(VecNorm norm_kind = VecNorm::L2,
                                   double tol = kDefaultTol) {
    return build_algebra({Mat::Identity(1, 1)}, norm_kind, tol);
}

/// Full matrix algebra: all m^2 matrix units of the m x m matrices.
inline NormedAlgebra matrix_full_algebra(int m, VecNorm norm_kind = VecNorm::L2,
                                         double tol = kDefaultTol) {
    if (m < 1) throw ValidationError("matrix_full: size must be >= 1");
    std::vector<Mat> basis;
    basis.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Mat e = Mat::Zero(m, m);
            e(i, j) = 1;
            basis.push_back(e);
        }
    return build_algebra(std::move(basis), norm_kind, tol);
}

/// The span of {E_11, ..., E_1m} inside the m x m matrices: has the left
/// identity E_11 but, for m >= 2, no right identity.
inline NormedAlgebra upper_left_algebra(int m, VecNorm norm_kind = VecNorm::L2,
                                        double tol = kDefaultTol) {
    if (m < 1) throw ValidationError("upper_left: size must be >= 1");
    std::vector<Mat> basis;
    basis.reserve(m);
    for (int j = 0; j < m; ++j) {
        Mat e = Mat::Zero(m, m);
        e(0, j) = 1;
        basis.push_back(e);
    }
    return build_algebra(std::move(basis), norm_kind, tol);
}

}  // namespace xprod
