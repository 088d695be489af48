#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xprod/algebra.hpp"
#include "xprod/group.hpp"
#include "xprod/linalg.hpp"

namespace xprod {

/// A dynamical system (A, G, alpha): a finite group acting on a
/// finite-dimensional normed algebra by automorphisms. The action is stored
/// as one k x k coordinate matrix per group element.
struct DynamicalSystem {
    FiniteGroup group;
    NormedAlgebra algebra;
    std::vector<Mat> action;  // action[s]: k x k on algebra coordinates
    bool involutive = false;  // algebra involutive and all alpha_s star-compatible
    double tol = kDefaultTol;

    Vec act(int s, const Vec& a) const { return action[static_cast<size_t>(s)] * a; }
};

/// Validates (group, algebra, action) as a dynamical system: alpha_e = id,
/// alpha a group homomorphism into the multiplicative automorphisms.
inline DynamicalSystem build_system(FiniteGroup group, NormedAlgebra algebra,
                                    std::vector<Mat> action, double tol = kDefaultTol) {
    const int n = group.n;
    const int k = algebra.dim();
    if (static_cast<int>(action.size()) != n)
        throw ValidationError("system: expected " + std::to_string(n) +
                              " action matrices, got " + std::to_string(action.size()));
    for (int s = 0; s < n; ++s)
        if (action[s].rows() != k || action[s].cols() != k)
            throw DimensionError("system: action matrix for group element " +
                                 std::to_string(s) + " is not " + std::to_string(k) +
                                 "x" + std::to_string(k));

    if ((action[group.identity] - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("system: action at the identity is not the identity map");

    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            if (rel_residual(Mat(action[r] * action[s]), action[group.mul(r, s)]) > tol)
                throw ValidationError("system: action is not a homomorphism at (r,s) = (" +
                                      std::to_string(r) + "," + std::to_string(s) + ")");

    for (int s = 0; s < n; ++s) {
        if (rank(action[s], tol) != k)
            throw ValidationError("system: action of group element " + std::to_string(s) +
                                  " is not invertible");
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                Vec lhs = action[s] * algebra.mult[i].col(j);
                Vec rhs = algebra.mul(action[s].col(i), action[s].col(j));
                if (rel_residual(lhs, rhs) > tol)
                    throw ValidationError(
                        "system: action of group element " + std::to_string(s) +
                        " is not multiplicative on basis pair (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
            }
    }

    DynamicalSystem sys;
    sys.group = std::move(group);
    sys.algebra = std::move(algebra);
    sys.action = std::move(action);
    sys.tol = tol;

    sys.involutive = sys.algebra.involutive;
    if (sys.involutive) {
        const Mat& st = sys.algebra.star_coords;
        for (int s = 0; s < n && sys.involutive; ++s)
            if ((sys.action[s] * st - st * sys.action[s].conjugate()).cwiseAbs().maxCoeff() >
                tol)
                sys.involutive = false;
    }
    return sys;
}

/// A covariant representation (pi, U) on a d-dimensional normed space:
/// pi an algebra representation, U an invertible group representation,
/// linked by pi(alpha_s(a)) = U_s pi(a) U_s^{-1}.
struct CovariantRep {
    int dim = 0;  // d >= 1
    VecNorm norm_kind = VecNorm::L2;
    std::vector<Mat> pi;  // per algebra basis element, d x d
    std::vector<Mat> u;   // per group element, d x d
    bool involutive = false;

    Mat pi_of(const Vec& a) const {
        Mat out = Mat::Zero(dim, dim);
        for (size_t i = 0; i < pi.size(); ++i) out += a(static_cast<Eigen::Index>(i)) * pi[i];
        return out;
    }
};

struct RepValidationReport {
    double pi_hom_residual = 0;
    double u_hom_residual = 0;
    double covariance_residual = 0;
    double involution_residual = 0;  // only meaningful for involutive systems
    std::vector<double> u_norms;     // ||U_r|| in the representation's norm
    bool nondegenerate = false;
    bool involutive = false;

    bool valid(double tol) const {
        return pi_hom_residual <= tol && u_hom_residual <= tol &&
               covariance_residual <= tol;
    }
};

/// True iff span(pi(A) X) = X, decided by the rank of the horizontal stack
/// [pi(b_1) | ... | pi(b_k)].
inline bool nondegenerate(const CovariantRep& rep) {
    const int d = rep.dim;
    const int k = static_cast<int>(rep.pi.size());
    Mat stack(d, static_cast<Eigen::Index>(k) * d);
    for (int i = 0; i < k; ++i) stack.middleCols(static_cast<Eigen::Index>(i) * d, d) = rep.pi[i];
    return rank(stack) == d;
}

inline RepValidationReport validate_covariant_rep(const DynamicalSystem& sys,
                                                  const CovariantRep& rep) {
    const int k = sys.algebra.dim();
    const int n = sys.group.n;
    const int d = rep.dim;
    if (d < 1) throw DimensionError("covariant rep: space dimension must be >= 1");
    if (static_cast<int>(rep.pi.size()) != k)
        throw DimensionError("covariant rep: expected " + std::to_string(k) +
                             " pi matrices, got " + std::to_string(rep.pi.size()));
    if (static_cast<int>(rep.u.size()) != n)
        throw DimensionError("covariant rep: expected " + std::to_string(n) +
                             " U matrices, got " + std::to_string(rep.u.size()));
    for (const Mat& p : rep.pi)
        if (p.rows() != d || p.cols() != d)
            throw DimensionError("covariant rep: pi matrix is not " + std::to_string(d) +
                                 "x" + std::to_string(d));
    for (const Mat& m : rep.u)
        if (m.rows() != d || m.cols() != d)
            throw DimensionError("covariant rep: U matrix is not " + std::to_string(d) +
                                 "x" + std::to_string(d));

    RepValidationReport rep_report;

    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Mat lhs = rep.pi[i] * rep.pi[j];
            Mat rhs = rep.pi_of(sys.algebra.mult[i].col(j));
            rep_report.pi_hom_residual =
                std::max(rep_report.pi_hom_residual, rel_residual(lhs, rhs));
        }

    rep_report.u_hom_residual =
        rel_residual(rep.u[sys.group.identity], Mat::Identity(d, d));
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            rep_report.u_hom_residual = std::max(
                rep_report.u_hom_residual,
                rel_residual(Mat(rep.u[r] * rep.u[s]), rep.u[sys.group.mul(r, s)]));

    for (int s = 0; s < n; ++s) {
        const Mat& us = rep.u[s];
        const Mat& us_inv = rep.u[sys.group.inv(s)];
        for (int i = 0; i < k; ++i) {
            Mat lhs = rep.pi_of(sys.act(s, sys.algebra.unit_coord(i)));
            Mat rhs = us * rep.pi[i] * us_inv;
            rep_report.covariance_residual =
                std::max(rep_report.covariance_residual, rel_residual(lhs, rhs));
        }
    }

    rep_report.u_norms.resize(n);
    for (int r = 0; r < n; ++r) rep_report.u_norms[r] = op_norm(rep.u[r], rep.norm_kind);

    rep_report.nondegenerate = nondegenerate(rep);

    if (sys.involutive && rep.norm_kind == VecNorm::L2) {
        double res = 0;
        for (int i = 0; i < k; ++i)
            res = std::max(res, rel_residual(rep.pi_of(sys.algebra.star(
                                                 sys.algebra.unit_coord(i))),
                                             Mat(rep.pi[i].adjoint())));
        for (int r = 0; r < n; ++r)
            res = std::max(res, rel_residual(Mat(rep.u[r].adjoint() * rep.u[r]),
                                             Mat(Mat::Identity(d, d))));
        rep_report.involution_residual = res;
        rep_report.involutive = res <= sys.tol;
    }
    return rep_report;
}

/// Validates and returns a covariant representation; throws on axiom failure.
inline CovariantRep make_covariant_rep(const DynamicalSystem& sys, VecNorm norm_kind,
                                       std::vector<Mat> pi, std::vector<Mat> u,
                                       double tol = kDefaultTol) {
    CovariantRep rep;
    rep.dim = pi.empty() ? 0 : static_cast<int>(pi[0].rows());
    rep.norm_kind = norm_kind;
    rep.pi = std::move(pi);
    rep.u = std::move(u);
    RepValidationReport r = validate_covariant_rep(sys, rep);
    if (r.pi_hom_residual > tol)
        throw ValidationError("covariant rep: pi is not a homomorphism (residual " +
                              std::to_string(r.pi_hom_residual) + ")");
    if (r.u_hom_residual > tol)
        throw ValidationError("covariant rep: U is not a group homomorphism (residual " +
                              std::to_string(r.u_hom_residual) + ")");
    if (r.covariance_residual > tol)
        throw ValidationError("covariant rep: covariance fails (residual " +
                              std::to_string(r.covariance_residual) + ")");
    rep.involutive = r.involutive;
    return rep;
}

/// Orthonormal basis of pi(A) X, the largest subspace on which the restricted
/// pair is non-degenerate. Requires a left identity in A.
inline Mat essential_subspace(const DynamicalSystem& sys, const CovariantRep& rep) {
    if (!find_left_identity(sys.algebra))
        throw PreconditionError("essential_subspace: algebra has no left identity");
    const int d = rep.dim;
    const int k = sys.algebra.dim();
    Mat stack(d, static_cast<Eigen::Index>(k) * d);
    for (int i = 0; i < k; ++i) stack.middleCols(static_cast<Eigen::Index>(i) * d, d) = rep.pi[i];
    Mat basis = column_space(stack, sys.tol);

    // pi(A) X is automatically U-invariant; re-derive as a consistency check.
    for (int r = 0; r < sys.group.n; ++r) {
        Mat moved = rep.u[r] * basis;
        Mat outside = moved - basis * (basis.adjoint() * moved);
        double scale = 1.0 + (moved.size() > 0 ? moved.cwiseAbs().maxCoeff() : 0.0);
        if (basis.cols() > 0 && outside.cwiseAbs().maxCoeff() / scale > 100 * sys.tol)
            throw NumericalError("essential_subspace: computed subspace not U-invariant");
    }
    // The restriction of pi to pi(A) X is non-degenerate.
    if (basis.cols() > 0) {
        const Eigen::Index m = basis.cols();
        Mat stack_restricted(m, static_cast<Eigen::Index>(k) * m);
        for (int i = 0; i < k; ++i)
            stack_restricted.middleCols(static_cast<Eigen::Index>(i) * m, m) =
                basis.adjoint() * rep.pi[i] * basis;
        if (rank(stack_restricted, sys.tol) != m)
            throw NumericalError("essential_subspace: restricted pair is degenerate");
    }
    return basis;
}

/// A finite uniformly bounded class R of covariant representations of one
/// system, with its derived tables nu(r) = max ||U_r|| and
/// beta(a) = max ||pi(a)||.
struct RepClass {
    std::vector<CovariantRep> reps;
    std::vector<double> nu;  // per group element
    bool involutive = false;

    double beta(const Vec& a) const {
        double m = 0;
        for (const CovariantRep& rep : reps) m = std::max(m, op_norm(rep.pi_of(a), rep.norm_kind));
        return m;
    }
};

inline RepClass make_rep_class(const DynamicalSystem& sys, std::vector<CovariantRep> reps,
                               double tol = kDefaultTol) {
    if (reps.empty()) throw ValidationError("rep class: must be nonempty");
    RepClass rc;
    rc.involutive = sys.involutive;
    for (size_t i = 0; i < reps.size(); ++i) {
        RepValidationReport r = validate_covariant_rep(sys, reps[i]);
        if (!r.valid(tol))
            throw ValidationError("rep class: member " + std::to_string(i) +
                                  " fails covariant-representation axioms");
        reps[i].involutive = r.involutive;
        rc.involutive = rc.involutive && r.involutive;
    }
    rc.reps = std::move(reps);
    rc.nu.assign(sys.group.n, 0.0);
    for (int r = 0; r < sys.group.n; ++r)
        for (const CovariantRep& rep : rc.reps)
            rc.nu[r] = std::max(rc.nu[r], op_norm(rep.u[r], rep.norm_kind));
    return rc;
}

}  // namespace xprod
