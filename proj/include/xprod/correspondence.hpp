#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xprod/centralizers.hpp"
#include "xprod/random_system.hpp"

namespace xprod {

/// R-continuity failure; carries a kernel witness with nonzero integrated form.
class RContinuityError : public PreconditionError {
public:
    RContinuityError(const std::string& msg, Vec witness, double residual)
        : PreconditionError(msg), witness(std::move(witness)), residual(residual) {}
    Vec witness;      // flattened C_c(G,A) element in ker(sigma^R)
    double residual;  // norm of its integrated form under the offending pair
};

struct RContinuityResult {
    bool continuous = true;
    double max_residual = 0;
    Vec witness;  // empty when continuous
};

/// In finite dimensions a covariant pair is R-continuous iff its integrated
/// form kills ker(sigma^R); on failure the result carries the worst kernel
/// vector as a witness.
inline RContinuityResult is_R_continuous(const CrossedProduct& cp, const CovariantRep& rep) {
    if (static_cast<int>(rep.pi.size()) != cp.system.algebra.dim() ||
        static_cast<int>(rep.u.size()) != cp.system.group.n)
        throw DimensionError("is_R_continuous: representation does not match the system");
    double scale = 1.0;
    for (size_t i = 0; i < rep.pi.size(); ++i)
        for (int s = 0; s < cp.system.group.n; ++s)
            scale = std::max(scale, op_norm(Mat(rep.pi[i] * rep.u[s]), rep.norm_kind));
    RContinuityResult out;
    for (Eigen::Index v = 0; v < cp.kernel_dim(); ++v) {
        CcFun f = cc_unflatten(cp.system, cp.kernel_basis.col(v));
        double r = op_norm(integrated_form(rep, f), rep.norm_kind) / scale;
        if (r > out.max_residual) {
            out.max_residual = r;
            if (r > cp.tol) out.witness = cp.kernel_basis.col(v);
        }
    }
    out.continuous = out.max_residual <= cp.tol;
    return out;
}

/// I^R: an R-continuous covariant pair to the induced representation of the
/// crossed product, (pi x U)^R (q(f)) = pi x U (f). Multiplicativity and
/// preservation of (non-)degeneracy are verified.
inline CPRep I_map(const CrossedProduct& cp, const CovariantRep& rep) {
    RContinuityResult rc = is_R_continuous(cp, rep);
    if (!rc.continuous)
        throw RContinuityError("I_map: representation is not R-continuous (residual " +
                                   std::to_string(rc.max_residual) + ")",
                               rc.witness, rc.max_residual);
    CPRep t = make_cp_rep(cp, rep.norm_kind, induced_images(cp, rep), 1000 * cp.tol);
    if (nondegenerate(t) != nondegenerate(rep))
        throw NumericalError("I_map: non-degeneracy was not preserved");
    return t;
}

/// S^R: a non-degenerate bounded representation T of the crossed product to
/// the covariant pair (T-bar o i_A, T-bar o i_G). With a genuine left
/// identity u the limit formulas collapse to
///   pi(a) = T(q(delta_e (x) a u)),  U_r = T(q(delta_r (x) alpha_r(u))).
inline CovariantRep S_map(const CrossedProduct& cp, const CPRep& t) {
    if (!nondegenerate(t))
        throw PreconditionError("S_map: representation is degenerate");
    std::optional<Vec> u = find_left_identity(cp.system.algebra);
    if (!u) throw PreconditionError("S_map: algebra has no left identity");
    const int k = cp.system.algebra.dim();
    const int n = cp.system.group.n;
    std::vector<Mat> pi(k), um(n);
    for (int i = 0; i < k; ++i) {
        Vec au = cp.system.algebra.mul(cp.system.algebra.unit_coord(i), *u);
        pi[i] = t.apply(cp.q_map(cc_delta(cp.system, cp.system.group.identity, au)));
    }
    for (int r = 0; r < n; ++r)
        um[r] = t.apply(cp.q_map(cc_delta(cp.system, r, cp.system.act(r, *u))));
    CovariantRep out = make_covariant_rep(cp.system, t.norm_kind, std::move(pi),
                                          std::move(um), 1000 * cp.tol);
    if (!nondegenerate(out))
        throw NumericalError("S_map: output representation is degenerate");
    return out;
}

struct RoundtripReport {
    double s_after_i_residual = 0;  // max entry of S(I(rep)) - rep over inputs
    double i_after_s_residual = 0;  // max entry of I(S(T)) - T over inputs
    double norm_consistency_residual = 0;
    std::vector<std::string> rejected;  // inputs failing the preconditions
    bool pass(double tol) const {
        return rejected.empty() && s_after_i_residual <= tol &&
               i_after_s_residual <= tol;
    }
};

namespace detail {

inline double max_entry_diff(const std::vector<Mat>& a, const std::vector<Mat>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace detail

/// Runs both compositions of the correspondence on the given inputs.
inline RoundtripReport roundtrip_check(const CrossedProduct& cp,
                                       const std::vector<CovariantRep>& reps,
                                       const std::vector<CPRep>& ts,
                                       int samples = 20, uint64_t seed = 11) {
    RoundtripReport out;
    Rng rng(seed);
    for (size_t i = 0; i < reps.size(); ++i) {
        if (!nondegenerate(reps[i])) {
            out.rejected.push_back("covariant rep " + std::to_string(i) + ": degenerate");
            continue;
        }
        RContinuityResult rc = is_R_continuous(cp, reps[i]);
        if (!rc.continuous) {
            out.rejected.push_back("covariant rep " + std::to_string(i) +
                                   ": not R-continuous");
            continue;
        }
        CPRep t = I_map(cp, reps[i]);
        CovariantRep back = S_map(cp, t);
        out.s_after_i_residual =
            std::max(out.s_after_i_residual, detail::max_entry_diff(back.pi, reps[i].pi));
        out.s_after_i_residual =
            std::max(out.s_after_i_residual, detail::max_entry_diff(back.u, reps[i].u));
        for (int sm = 0; sm < samples; ++sm) {
            CcFun f{rng.cgauss_mat(cp.system.group.n, cp.system.algebra.dim())};
            double through_cc = op_norm(integrated_form(reps[i], f), reps[i].norm_kind);
            double through_cp = op_norm(t.apply(cp.q_map(f)), t.norm_kind);
            out.norm_consistency_residual =
                std::max(out.norm_consistency_residual,
                         std::abs(through_cc - through_cp) / (1.0 + through_cc));
        }
    }
    for (size_t i = 0; i < ts.size(); ++i) {
        if (!nondegenerate(ts[i])) {
            out.rejected.push_back("cp rep " + std::to_string(i) + ": degenerate");
            continue;
        }
        CovariantRep rep = S_map(cp, ts[i]);
        CPRep back = I_map(cp, rep);
        out.i_after_s_residual =
            std::max(out.i_after_s_residual, detail::max_entry_diff(back.images, ts[i].images));
    }
    return out;
}

struct TransferReport {
    double subspace_cov_residual = 0;  // invariance under (pi, U)
    double subspace_cp_residual = 0;   // invariance under the induced rep
    bool subspace_invariant_cov = false;
    bool subspace_invariant_cp = false;
    bool subspace_verdicts_agree = false;
    double intertwine_cov_residual = 0;
    double intertwine_cp_residual = 0;
    bool intertwines_cov = false;
    bool intertwines_cp = false;
    bool intertwine_verdicts_agree = false;
};

/// Checks that invariant subspaces and intertwiners transfer across the
/// correspondence: Y is (pi,U)-invariant iff it is invariant for the induced
/// representation, and Phi intertwines two pairs iff it intertwines their
/// induced representations.
inline TransferReport transfer_checks(const CrossedProduct& cp, const CovariantRep& rep,
                                      const Mat& subspace, const CovariantRep& rep2,
                                      const Mat& phi) {
    if (subspace.rows() != rep.dim)
        throw DimensionError("transfer_checks: subspace rows do not match rep dimension");
    if (phi.cols() != rep.dim || phi.rows() != rep2.dim)
        throw DimensionError("transfer_checks: intertwiner shape mismatch");
    TransferReport out;
    const double threshold = 1000 * cp.tol;

    Mat y = column_space(subspace, cp.tol);  // orthonormal basis of the subspace
    auto leak = [&](const Mat& op) {
        Mat moved = op * y;
        Mat outside = moved - y * (y.adjoint() * moved);
        double scale = 1.0 + (moved.size() > 0 ? moved.cwiseAbs().maxCoeff() : 0.0);
        return outside.size() > 0 ? outside.cwiseAbs().maxCoeff() / scale : 0.0;
    };
    for (const Mat& p : rep.pi)
        out.subspace_cov_residual = std::max(out.subspace_cov_residual, leak(p));
    for (const Mat& m : rep.u)
        out.subspace_cov_residual = std::max(out.subspace_cov_residual, leak(m));
    CPRep t = I_map(cp, rep);
    for (const Mat& img : t.images)
        out.subspace_cp_residual = std::max(out.subspace_cp_residual, leak(img));
    out.subspace_invariant_cov = out.subspace_cov_residual <= threshold;
    out.subspace_invariant_cp = out.subspace_cp_residual <= threshold;
    out.subspace_verdicts_agree = out.subspace_invariant_cov == out.subspace_invariant_cp;

    CPRep t2 = I_map(cp, rep2);
    for (size_t i = 0; i < rep.pi.size(); ++i)
        out.intertwine_cov_residual =
            std::max(out.intertwine_cov_residual,
                     rel_residual(Mat(phi * rep.pi[i]), Mat(rep2.pi[i] * phi)));
    for (size_t r = 0; r < rep.u.size(); ++r)
        out.intertwine_cov_residual =
            std::max(out.intertwine_cov_residual,
                     rel_residual(Mat(phi * rep.u[r]), Mat(rep2.u[r] * phi)));
    for (Eigen::Index j = 0; j < cp.dim(); ++j)
        out.intertwine_cp_residual =
            std::max(out.intertwine_cp_residual,
                     rel_residual(Mat(phi * t.images[j]), Mat(t2.images[j] * phi)));
    out.intertwines_cov = out.intertwine_cov_residual <= threshold;
    out.intertwines_cp = out.intertwine_cp_residual <= threshold;
    out.intertwine_verdicts_agree = out.intertwines_cov == out.intertwines_cp;
    return out;
}

/// A strongly continuous group representation, given by its matrices and the
/// norm its space carries.
struct GroupRepSpec {
    VecNorm norm_kind = VecNorm::L2;
    std::vector<Mat> u;
};

/// The trivial-algebra crossed product: A is the scalar field acting
/// trivially, so C_c(G,A) = C_c(G) with ordinary convolution and the result
/// deserves to be called the group Banach algebra of the class.
inline CrossedProduct group_banach_algebra(const FiniteGroup& g,
                                           const std::vector<GroupRepSpec>& ureps,
                                           bool require_involutive = false,
                                           double tol = kDefaultTol) {
    if (ureps.empty()) throw ValidationError("group_banach_algebra: empty class");
    NormedAlgebra a = field_algebra(VecNorm::L2, tol);
    std::vector<Mat> action(g.n, Mat::Identity(1, 1));
    DynamicalSystem sys = build_system(g, a, action, tol);
    std::vector<CovariantRep> members;
    for (const GroupRepSpec& spec : ureps) {
        if (spec.u.empty()) throw ValidationError("group_banach_algebra: empty rep");
        const int d = static_cast<int>(spec.u[0].rows());
        // The only non-degenerate representation of the field is the canonical one.
        std::vector<Mat> pi = {Mat::Identity(d, d)};
        members.push_back(make_covariant_rep(sys, spec.norm_kind, pi, spec.u, tol));
    }
    RepClass rc = make_rep_class(sys, std::move(members), tol);
    if (require_involutive && !rc.involutive)
        throw ValidationError("group_banach_algebra: class is not involutive");
    return build_crossed_product(std::move(sys), std::move(rc), tol);
}

struct AlgRepSpec {
    VecNorm norm_kind = VecNorm::L2;
    std::vector<Mat> pi;
};

/// The trivial-group crossed product: the quotient of A by the joint kernel
/// of the class, with the supremum-of-representations norm. No approximate
/// identity machinery is involved.
inline CrossedProduct enveloping_algebra(const NormedAlgebra& a,
                                         const std::vector<AlgRepSpec>& reps,
                                         double tol = kDefaultTol) {
    if (reps.empty()) throw ValidationError("enveloping_algebra: empty class");
    FiniteGroup triv = cyclic_group(1);
    std::vector<Mat> action = {Mat::Identity(a.dim(), a.dim())};
    DynamicalSystem sys = build_system(triv, a, action, tol);
    std::vector<CovariantRep> members;
    for (const AlgRepSpec& spec : reps) {
        if (spec.pi.empty() || static_cast<int>(spec.pi.size()) != a.dim())
            throw ValidationError("enveloping_algebra: rep has wrong arity");
        const int d = static_cast<int>(spec.pi[0].rows());
        std::vector<Mat> u = {Mat::Identity(d, d)};
        members.push_back(make_covariant_rep(sys, spec.norm_kind, spec.pi, u, tol));
    }
    RepClass rc = make_rep_class(sys, std::move(members), tol);
    return build_crossed_product(std::move(sys), std::move(rc), tol);
}

struct ContractiveReport {
    std::vector<std::string> hypothesis_violations;
    double worst_pi_ratio = 0;      // max ||pi(a)|| / ||a|| over samples and members
    double worst_u_excess = 0;      // max ||U_r|| - nu(r) over members
    double worst_t_ratio = 0;       // max ||T(x)|| / ||x||_R over samples
    double worst_s_pi_ratio = 0;    // same ratios for the reconstructed pairs
    double worst_s_u_excess = 0;
    bool pass = false;
};

/// Hypotheses and conclusion of the contractive/isometric correspondence:
/// if every member of R has contractive pi and ||U_r|| <= nu(r) with
/// nu(e) = 1 and ||u|| <= 1, then S^R maps non-degenerate contractive
/// representations back into that class. Violated hypotheses are reported,
/// never ignored.
inline ContractiveReport contractive_correspondence_check(
    const CrossedProduct& cp, const std::vector<double>& nu,
    const std::vector<CPRep>& ts, int samples = 50, uint64_t seed = 23) {
    const double tol = cp.tol;
    const double slack = 1e-7;
    ContractiveReport out;
    if (static_cast<int>(nu.size()) != cp.system.group.n)
        throw DimensionError("contractive check: nu table has wrong length");
    if (std::abs(nu[static_cast<size_t>(cp.system.group.identity)] - 1.0) > tol)
        out.hypothesis_violations.push_back("nu(e) != 1");

    std::optional<Vec> u = find_left_identity(cp.system.algebra);
    if (!u) {
        out.hypothesis_violations.push_back("algebra has no left identity");
    } else if (cp.system.algebra.norm(*u) > 1.0 + slack) {
        out.hypothesis_violations.push_back("left identity has norm > 1");
    }

    Rng rng(seed);
    std::vector<Vec> alg_samples;
    for (int i = 0; i < cp.system.algebra.dim(); ++i)
        alg_samples.push_back(cp.system.algebra.unit_coord(i));
    for (int s = 0; s < samples; ++s) alg_samples.push_back(rng.cgauss_vec(cp.system.algebra.dim()));

    for (size_t m = 0; m < cp.reps.reps.size(); ++m) {
        const CovariantRep& rep = cp.reps.reps[m];
        for (const Vec& a : alg_samples) {
            double na = cp.system.algebra.norm(a);
            if (na < 1e-12) continue;
            double ratio = op_norm(rep.pi_of(a), rep.norm_kind) / na;
            out.worst_pi_ratio = std::max(out.worst_pi_ratio, ratio);
            if (ratio > 1.0 + slack)
                out.hypothesis_violations.push_back(
                    "member " + std::to_string(m) + ": pi not contractive on a sample");
        }
        for (int r = 0; r < cp.system.group.n; ++r) {
            double excess = op_norm(rep.u[r], rep.norm_kind) - nu[static_cast<size_t>(r)];
            out.worst_u_excess = std::max(out.worst_u_excess, excess);
            if (excess > slack)
                out.hypothesis_violations.push_back("member " + std::to_string(m) +
                                                    ": ||U_r|| exceeds nu at r = " +
                                                    std::to_string(r));
        }
    }

    bool conclusion = out.hypothesis_violations.empty();
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        const CPRep& t = ts[ti];
        if (!nondegenerate(t)) {
            out.hypothesis_violations.push_back("T " + std::to_string(ti) + " degenerate");
            conclusion = false;
            continue;
        }
        for (int s = 0; s < samples; ++s) {
            Vec x = rng.cgauss_vec(cp.dim());
            double nx = cp.norm(x);
            if (nx < 1e-12) continue;
            double ratio = op_norm(t.apply(x), t.norm_kind) / nx;
            out.worst_t_ratio = std::max(out.worst_t_ratio, ratio);
            if (ratio > 1.0 + slack) {
                out.hypothesis_violations.push_back("T " + std::to_string(ti) +
                                                    " not contractive on a sample");
                conclusion = false;
                break;
            }
        }
        if (!u) continue;
        CovariantRep back = S_map(cp, t);
        for (const Vec& a : alg_samples) {
            double na = cp.system.algebra.norm(a);
            if (na < 1e-12) continue;
            double ratio = op_norm(back.pi_of(a), back.norm_kind) / na;
            out.worst_s_pi_ratio = std::max(out.worst_s_pi_ratio, ratio);
            if (ratio > 1.0 + slack) conclusion = false;
        }
        for (int r = 0; r < cp.system.group.n; ++r) {
            double excess =
                op_norm(back.u[r], back.norm_kind) - nu[static_cast<size_t>(r)];
            out.worst_s_u_excess = std::max(out.worst_s_u_excess, excess);
            if (excess > slack) conclusion = false;
        }
    }
    out.pass = conclusion;
    return out;
}

struct L1Report {
    int samples = 0;
    double c_factor = 0;            // (max sampled ||pi(a)||/||a||) * (max nu)
    bool upper_bound_holds = true;  // sigma(f) <= c_factor * ||f||_1 on samples
    double worst_upper_gap = 0;
    double empirical_c1 = 0;        // best C with ||f||_1 <= C sigma(f) on samples
    bool c1_bounded = true;         // false when the kernel is nonzero
    Eigen::Index kernel_dim = 0;
};

/// Finite-sample comparison between the L1 norm ||f||_1 = sum_s ||f(s)|| and
/// sigma^R. The direction sigma <= C ||f||_1 always holds; the reverse
/// direction is only estimated, and a nonzero kernel makes it impossible.
inline L1Report l1_compare(const CrossedProduct& cp, int samples = 200, uint64_t seed = 5) {
    L1Report out;
    out.samples = samples;
    out.kernel_dim = cp.kernel_dim();
    const int n = cp.system.group.n;
    const int k = cp.system.algebra.dim();

    double nu_max = 0;
    for (double v : cp.reps.nu) nu_max = std::max(nu_max, v);

    Rng rng(seed);
    std::vector<CcFun> fs;
    for (int s = 0; s < samples; ++s) fs.push_back(CcFun{rng.cgauss_mat(n, k)});

    double beta_ratio = 0;
    for (int i = 0; i < k; ++i) {
        Vec a = cp.system.algebra.unit_coord(i);
        beta_ratio = std::max(beta_ratio, cp.reps.beta(a) / cp.system.algebra.norm(a));
    }
    for (const CcFun& f : fs)
        for (int s = 0; s < n; ++s) {
            Vec a = f.values.row(s).transpose();
            double na = cp.system.algebra.norm(a);
            if (na > 1e-12) beta_ratio = std::max(beta_ratio, cp.reps.beta(a) / na);
        }
    out.c_factor = beta_ratio * nu_max;

    for (const CcFun& f : fs) {
        double l1 = 0;
        for (int s = 0; s < n; ++s) l1 += cp.system.algebra.norm(f.values.row(s).transpose());
        double sg = seminorm(cp.reps, f);
        double gap = sg - out.c_factor * l1;
        out.worst_upper_gap = std::max(out.worst_upper_gap, gap);
        if (gap > 1e-9 * (1.0 + sg)) out.upper_bound_holds = false;
        if (sg > 1e-12 * (1.0 + l1)) out.empirical_c1 = std::max(out.empirical_c1, l1 / sg);
    }

    if (out.kernel_dim > 0) {
        // Any kernel direction has positive L1 norm and sigma ~ 0.
        out.c1_bounded = false;
    }
    return out;
}

}  // namespace xprod
