#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xprod/dynsys.hpp"
#include "xprod/rng.hpp"

namespace xprod {

/// An element of C_c(G,A): row s holds the coordinates of f(s) in A's basis.
/// For finite G this is every function G -> A.
struct CcFun {
    Mat values;  // |G| x k

    Eigen::Index group_order() const { return values.rows(); }
    Eigen::Index alg_dim() const { return values.cols(); }
};

inline CcFun cc_zero(const DynamicalSystem& sys) {
    return CcFun{Mat::Zero(sys.group.n, sys.algebra.dim())};
}

/// The point mass delta_s (x) a.
inline CcFun cc_delta(const DynamicalSystem& sys, int s, const Vec& a) {
    CcFun f = cc_zero(sys);
    f.values.row(s) = a.transpose();
    return f;
}

inline Vec cc_flatten(const CcFun& f) {
    const Eigen::Index n = f.values.rows(), k = f.values.cols();
    Vec v(n * k);
    for (Eigen::Index s = 0; s < n; ++s) v.segment(s * k, k) = f.values.row(s).transpose();
    return v;
}

inline CcFun cc_unflatten(const DynamicalSystem& sys, const Vec& v) {
    const Eigen::Index n = sys.group.n, k = sys.algebra.dim();
    CcFun f{Mat(n, k)};
    for (Eigen::Index s = 0; s < n; ++s) f.values.row(s) = v.segment(s * k, k).transpose();
    return f;
}

/// Twisted convolution: (f*g)(s) = sum_r f(r) alpha_r(g(r^{-1} s)).
inline CcFun convolve(const DynamicalSystem& sys, const CcFun& f, const CcFun& g) {
    const int n = sys.group.n;
    const int k = sys.algebra.dim();
    if (f.values.rows() != n || g.values.rows() != n || f.values.cols() != k ||
        g.values.cols() != k)
        throw DimensionError("convolve: shapes do not match the system");
    CcFun out = cc_zero(sys);
    for (int r = 0; r < n; ++r) {
        Vec fr = f.values.row(r).transpose();
        if (fr.isZero(0.0)) continue;
        for (int s = 0; s < n; ++s) {
            Vec gs = g.values.row(sys.group.mul(sys.group.inv(r), s)).transpose();
            out.values.row(s) += sys.algebra.mul(fr, sys.act(r, gs)).transpose();
        }
    }
    return out;
}

/// Involution: f^*(s) = alpha_s(f(s^{-1})^*); the modular factor is 1.
inline CcFun involute(const DynamicalSystem& sys, const CcFun& f) {
    if (!sys.involutive)
        throw UnsupportedError("involute: system is not involutive");
    CcFun out = cc_zero(sys);
    for (int s = 0; s < sys.group.n; ++s) {
        Vec v = f.values.row(sys.group.inv(s)).transpose();
        out.values.row(s) = sys.act(s, sys.algebra.star(v)).transpose();
    }
    return out;
}

/// Integrated form: pi x U (f) = sum_s pi(f(s)) U_s.
inline Mat integrated_form(const CovariantRep& rep, const CcFun& f) {
    Mat out = Mat::Zero(rep.dim, rep.dim);
    for (int s = 0; s < static_cast<int>(f.values.rows()); ++s) {
        Vec fs = f.values.row(s).transpose();
        if (fs.isZero(0.0)) continue;
        out += rep.pi_of(fs) * rep.u[s];
    }
    return out;
}

/// sigma^R(f) = max over the class of the operator norm of the integrated form.
inline double seminorm(const RepClass& rc, const CcFun& f) {
    double m = 0;
    for (const CovariantRep& rep : rc.reps)
        m = std::max(m, op_norm(integrated_form(rep, f), rep.norm_kind));
    return m;
}

// Pointwise module actions of A and G on C_c(G,A).

/// [i_A(a) f](s) = a f(s)
inline CcFun cc_iA(const DynamicalSystem& sys, const Vec& a, const CcFun& f) {
    CcFun out = cc_zero(sys);
    for (int s = 0; s < sys.group.n; ++s)
        out.values.row(s) = sys.algebra.mul(a, f.values.row(s).transpose()).transpose();
    return out;
}

/// [i_G(r) f](s) = alpha_r(f(r^{-1} s))
inline CcFun cc_iG(const DynamicalSystem& sys, int r, const CcFun& f) {
    CcFun out = cc_zero(sys);
    for (int s = 0; s < sys.group.n; ++s) {
        Vec v = f.values.row(sys.group.mul(sys.group.inv(r), s)).transpose();
        out.values.row(s) = sys.act(r, v).transpose();
    }
    return out;
}

/// [j_A(a) f](s) = f(s) alpha_s(a)
inline CcFun cc_jA(const DynamicalSystem& sys, const Vec& a, const CcFun& f) {
    CcFun out = cc_zero(sys);
    for (int s = 0; s < sys.group.n; ++s)
        out.values.row(s) =
            sys.algebra.mul(f.values.row(s).transpose(), sys.act(s, a)).transpose();
    return out;
}

/// [j_G(r) f](s) = f(s r^{-1}); the modular factor is 1.
inline CcFun cc_jG(const DynamicalSystem& sys, int r, const CcFun& f) {
    CcFun out = cc_zero(sys);
    for (int s = 0; s < sys.group.n; ++s)
        out.values.row(s) = f.values.row(sys.group.mul(s, sys.group.inv(r)));
    return out;
}

/// The crossed product (A x G)^R: the quotient of C_c(G,A) by the joint
/// kernel of the integrated forms over R, carrying the sigma^R norm. Quotient
/// coordinates live on the non-pivot columns of the row-reduced kernel; the
/// section embeds them back with zeros on the pivot columns.
struct CrossedProduct {
    DynamicalSystem system;
    RepClass reps;
    Mat kernel_basis;    // (n k) x kappa, orthonormal columns
    Mat q_matrix;        // q x (n k)
    Mat section_matrix;  // (n k) x q
    std::optional<Vec> left_identity;  // quotient coordinates of q(delta_e (x) u)
    bool involutive = false;           // system and class both involutive
    Mat star_matrix;                   // q x q; star(x) = star_matrix conj(x)
    double tol = kDefaultTol;

    Eigen::Index dim() const { return q_matrix.rows(); }
    Eigen::Index kernel_dim() const { return kernel_basis.cols(); }
    Eigen::Index full_dim() const { return q_matrix.cols(); }

    Vec q_map(const CcFun& f) const { return q_matrix * cc_flatten(f); }
    CcFun section(const Vec& x) const { return cc_unflatten(system, section_matrix * x); }

    Vec mul(const Vec& x, const Vec& y) const {
        return q_matrix * cc_flatten(convolve(system, section(x), section(y)));
    }

    double norm(const Vec& x) const { return seminorm(reps, section(x)); }

    Vec star(const Vec& x) const {
        if (!involutive)
            throw UnsupportedError("crossed product: star on non-involutive data");
        return star_matrix * x.conjugate();
    }

    Vec unit(Eigen::Index j) const { return Vec::Unit(dim(), j); }
};

/// Images of the quotient basis under the induced representation (pi x U)^R
/// of an R-continuous pair; for members of R this is always defined.
inline std::vector<Mat> induced_images(const CrossedProduct& cp, const CovariantRep& rep) {
    std::vector<Mat> images;
    images.reserve(cp.dim());
    for (Eigen::Index j = 0; j < cp.dim(); ++j)
        images.push_back(integrated_form(rep, cp.section(cp.unit(j))));
    return images;
}

inline CrossedProduct build_crossed_product(DynamicalSystem sys, RepClass rc,
                                            double tol = kDefaultTol) {
    if (tol <= 0) throw PreconditionError("build_crossed_product: tol must be positive");
    const int n = sys.group.n;
    const int k = sys.algebra.dim();
    const Eigen::Index nk = static_cast<Eigen::Index>(n) * k;

    // Stacked linear map f -> (pi x U(f))_{(pi,U) in R}; its null space is
    // ker(sigma^R) exactly, since sigma^R(f) = 0 iff all integrated forms vanish.
    Eigen::Index total_rows = 0;
    for (const CovariantRep& rep : rc.reps)
        total_rows += static_cast<Eigen::Index>(rep.dim) * rep.dim;
    Mat stacked(total_rows, nk);
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < k; ++i) {
            Eigen::Index row = 0;
            for (const CovariantRep& rep : rc.reps) {
                Mat img = rep.pi[i] * rep.u[s];
                stacked.col(static_cast<Eigen::Index>(s) * k + i)
                    .segment(row, img.size()) = Eigen::Map<const Vec>(img.data(), img.size());
                row += img.size();
            }
        }

    CrossedProduct cp;
    cp.kernel_basis = null_space(stacked, tol);
    const Eigen::Index kappa = cp.kernel_basis.cols();
    const Eigen::Index q = nk - kappa;

    RowReduction rr = row_reduce(cp.kernel_basis.transpose(), tol);
    if (static_cast<Eigen::Index>(rr.pivots.size()) != kappa)
        throw NumericalError("build_crossed_product: kernel basis is rank deficient");
    std::vector<bool> is_pivot(nk, false);
    for (Eigen::Index p : rr.pivots) is_pivot[static_cast<size_t>(p)] = true;

    cp.q_matrix = Mat::Zero(q, nk);
    cp.section_matrix = Mat::Zero(nk, q);
    Eigen::Index a = 0;
    for (Eigen::Index c = 0; c < nk; ++c) {
        if (is_pivot[static_cast<size_t>(c)]) continue;
        cp.q_matrix(a, c) = 1;
        for (Eigen::Index t = 0; t < kappa; ++t)
            cp.q_matrix(a, rr.pivots[static_cast<size_t>(t)]) -= rr.rref(t, c);
        cp.section_matrix(c, a) = 1;
        ++a;
    }

    cp.system = std::move(sys);
    cp.reps = std::move(rc);
    cp.tol = tol;

    // The kernel must be a two-sided ideal; a failure here signals numerical
    // breakdown, not bad input.
    const double stack_scale =
        1.0 + (stacked.size() > 0 ? stacked.cwiseAbs().maxCoeff() : 0.0);
    Rng rng(0xc0ffee);
    for (Eigen::Index v = 0; v < kappa; ++v) {
        CcFun kv = cc_unflatten(cp.system, cp.kernel_basis.col(v));
        for (const CovariantRep& rep : cp.reps.reps) {
            double r = op_norm(integrated_form(rep, kv), rep.norm_kind);
            if (r > 1000 * tol * stack_scale)
                throw NumericalError("build_crossed_product: kernel vector has nonzero "
                                     "integrated form (residual " + std::to_string(r) + ")");
        }
        for (int trial = 0; trial < 3; ++trial) {
            CcFun f{rng.cgauss_mat(n, k)};
            double lr = (cp.q_matrix * cc_flatten(convolve(cp.system, f, kv))).norm();
            double rl = (cp.q_matrix * cc_flatten(convolve(cp.system, kv, f))).norm();
            if (lr > 1000 * tol || rl > 1000 * tol)
                throw NumericalError("build_crossed_product: kernel is not stable under "
                                     "convolution (ideal check failed)");
        }
    }

    if (std::optional<Vec> u = find_left_identity(cp.system.algebra)) {
        Vec one = cp.q_map(cc_delta(cp.system, cp.system.group.identity, *u));
        for (Eigen::Index j = 0; j < q; ++j) {
            if (rel_residual(cp.mul(one, cp.unit(j)), Vec(cp.unit(j))) > 1000 * tol)
                throw NumericalError(
                    "build_crossed_product: q(delta_e (x) u) fails to act as a left "
                    "identity on quotient basis vector " + std::to_string(j));
        }
        cp.left_identity = std::move(one);
    }

    cp.involutive = cp.system.involutive && cp.reps.involutive;
    if (cp.involutive) {
        cp.star_matrix = Mat(q, q);
        for (Eigen::Index j = 0; j < q; ++j)
            cp.star_matrix.col(j) =
                cp.q_matrix * cc_flatten(involute(cp.system, cp.section(cp.unit(j))));
    }
    return cp;
}

/// What the finite-dimensional approximate-identity theory boils down to:
/// q(delta_e (x) u) is a genuine left identity with
/// sigma^R(delta_e (x) u) = max_{(pi,U)} ||pi(u)||, an exhibited upper bound
/// for the approximate-identity constant of the crossed product.
struct ApproxIdentityReport {
    Vec algebra_left_identity;
    double algebra_identity_norm = 0;  // ||u||_A, upper bound for M_l^A
    double sigma_delta_u = 0;          // sigma^R(delta_e (x) u)
    double max_pi_u = 0;               // max over R of ||pi(u)||
    double match_residual = 0;         // |sigma - max pi| / (1 + max pi)
    double left_action_residual = 0;   // max_j ||1_l * e_j - e_j||
    double n_r = 1.0;                  // N^R; always 1 for discrete G
    bool right_identity_exists = false;
    double sigma_delta_u_right = 0;    // sigma of the right variant, if any
};

inline ApproxIdentityReport approximate_identity_report(const CrossedProduct& cp) {
    std::optional<Vec> u = find_left_identity(cp.system.algebra);
    if (!u)
        throw PreconditionError(
            "approximate_identity_report: algebra has no left identity");
    ApproxIdentityReport rep;
    rep.algebra_left_identity = *u;
    rep.algebra_identity_norm = cp.system.algebra.norm(*u);
    CcFun delta_u = cc_delta(cp.system, cp.system.group.identity, *u);
    rep.sigma_delta_u = seminorm(cp.reps, delta_u);
    for (const CovariantRep& r : cp.reps.reps)
        rep.max_pi_u = std::max(rep.max_pi_u, op_norm(r.pi_of(*u), r.norm_kind));
    rep.match_residual =
        std::abs(rep.sigma_delta_u - rep.max_pi_u) / (1.0 + rep.max_pi_u);
    Vec one = cp.q_map(delta_u);
    for (Eigen::Index j = 0; j < cp.dim(); ++j)
        rep.left_action_residual = std::max(
            rep.left_action_residual, rel_residual(cp.mul(one, cp.unit(j)), Vec(cp.unit(j))));
    if (std::optional<Vec> ur = find_right_identity(cp.system.algebra)) {
        rep.right_identity_exists = true;
        rep.sigma_delta_u_right =
            seminorm(cp.reps, cc_delta(cp.system, cp.system.group.identity, *ur));
    }
    return rep;
}

}  // namespace xprod
