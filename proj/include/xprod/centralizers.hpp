#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xprod/crossed.hpp"

namespace xprod {

enum class CentralizerKind { Left, Right, Double };

/// A basis of a centralizer algebra of the crossed product, as operators on
/// quotient coordinates. Left centralizers satisfy L(x*y) = L(x)*y, right
/// centralizers R(x*y) = x*R(y), and double centralizers are compatible
/// pairs with x*L(y) = R(x)*y.
struct CentralizerSpace {
    CentralizerKind kind = CentralizerKind::Left;
    std::vector<Mat> basis;                         // left/right: q x q operators
    std::vector<std::pair<Mat, Mat>> double_basis;  // double: (L, R) pairs
    double tol = kDefaultTol;

    int dim() const {
        return kind == CentralizerKind::Double ? static_cast<int>(double_basis.size())
                                               : static_cast<int>(basis.size());
    }
};

/// Left multiplication by x on quotient coordinates.
inline Mat lambda_map(const CrossedProduct& cp, const Vec& x) {
    const Eigen::Index q = cp.dim();
    Mat out(q, q);
    for (Eigen::Index j = 0; j < q; ++j) out.col(j) = cp.mul(x, cp.unit(j));
    return out;
}

/// Right multiplication by x on quotient coordinates.
inline Mat rho_map(const CrossedProduct& cp, const Vec& x) {
    const Eigen::Index q = cp.dim();
    Mat out(q, q);
    for (Eigen::Index j = 0; j < q; ++j) out.col(j) = cp.mul(cp.unit(j), x);
    return out;
}

/// The double centralizer (lambda(x), rho(x)).
inline std::pair<Mat, Mat> delta_map(const CrossedProduct& cp, const Vec& x) {
    return {lambda_map(cp, x), rho_map(cp, x)};
}

namespace detail {

inline std::vector<Mat> multiplication_matrices(const CrossedProduct& cp, bool right) {
    std::vector<Mat> out;
    out.reserve(cp.dim());
    for (Eigen::Index j = 0; j < cp.dim(); ++j)
        out.push_back(right ? rho_map(cp, cp.unit(j)) : lambda_map(cp, cp.unit(j)));
    return out;
}

/// Gram matrix of the commutator constraints [X, C_j] = 0, assembled from
/// Kronecker pieces; its null space is the commutant of {C_j}.
inline Mat commutant_gram(const std::vector<Mat>& cs) {
    if (cs.empty()) return Mat(0, 0);
    const Eigen::Index q = cs[0].rows();
    Mat h = Mat::Zero(q * q, q * q);
    const Mat id = Mat::Identity(q, q);
    for (const Mat& c : cs) {
        Mat cc = c.conjugate();
        Mat ct = c.transpose();
        h += kron(cc * ct, id);
        h -= kron(cc, c);
        h -= kron(ct, c.adjoint());
        h += kron(id, c.adjoint() * c);
    }
    return h;
}

/// Orthonormal null-space basis of a Hermitian PSD constraint Gram matrix.
inline std::vector<Vec> hermitian_null_space(const Mat& h, double rel_threshold) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const auto& ev = es.eigenvalues();
    const double lmax = ev.size() > 0 ? std::max(ev(ev.size() - 1), 0.0) : 0.0;
    std::vector<Vec> out;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= rel_threshold * std::max(lmax, 1e-300))
            out.push_back(es.eigenvectors().col(i));
    return out;
}

inline Mat unvec(const Vec& v, Eigen::Index q) {
    return Eigen::Map<const Mat>(v.data(), q, q);
}

}  // namespace detail

/// Computes a basis of the requested centralizer space as the null space of
/// the defining linear constraints over all quotient basis pairs. Every
/// candidate is re-verified against the defining identity.
inline CentralizerSpace centralizer_space(const CrossedProduct& cp, CentralizerKind kind) {
    const Eigen::Index q = cp.dim();
    if (q < 1) throw PreconditionError("centralizer_space: quotient dimension is zero");
    CentralizerSpace out;
    out.kind = kind;
    out.tol = cp.tol;
    const double threshold = 1e-8;  // relative eigenvalue cut on the constraint Gram

    std::vector<Mat> lambdas = detail::multiplication_matrices(cp, false);
    std::vector<Mat> rhos = detail::multiplication_matrices(cp, true);

    if (kind == CentralizerKind::Left || kind == CentralizerKind::Right) {
        // L(x*y) = L(x)*y  <=>  L commutes with every rho(y); dually for R.
        const std::vector<Mat>& cs = (kind == CentralizerKind::Left) ? rhos : lambdas;
        for (const Vec& v :
             detail::hermitian_null_space(detail::commutant_gram(cs), threshold)) {
            Mat m = detail::unvec(v, q);
            double r = 0;
            for (const Mat& c : cs) r = std::max(r, rel_residual(Mat(m * c), Mat(c * m)));
            if (r > 100 * cp.tol)
                throw NumericalError("centralizer_space: candidate fails the defining "
                                     "constraint (residual " + std::to_string(r) + ")");
            out.basis.push_back(std::move(m));
        }
        return out;
    }

    // Double centralizers: unknowns (vec L, vec R); constraints are the two
    // commutant systems plus the coupling lambda_i L e_j = rho_j R e_i.
    const Eigen::Index q2 = q * q;
    Mat h = Mat::Zero(2 * q2, 2 * q2);
    h.topLeftCorner(q2, q2) = detail::commutant_gram(rhos);
    h.bottomRightCorner(q2, q2) = detail::commutant_gram(lambdas);
    Mat sum_l = Mat::Zero(q, q), sum_r = Mat::Zero(q, q);
    for (Eigen::Index j = 0; j < q; ++j) {
        sum_l += lambdas[j].adjoint() * lambdas[j];
        sum_r += rhos[j].adjoint() * rhos[j];
    }
    h.topLeftCorner(q2, q2) += kron(Mat::Identity(q, q), sum_l);
    h.bottomRightCorner(q2, q2) += kron(Mat::Identity(q, q), sum_r);
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j) {
            Mat coupling = lambdas[i].adjoint() * rhos[j];
            h.block(j * q, q2 + i * q, q, q) -= coupling;
            h.block(q2 + i * q, j * q, q, q) -= coupling.adjoint();
        }

    for (const Vec& v : detail::hermitian_null_space(h, threshold)) {
        Mat l = detail::unvec(v.head(q2), q);
        Mat r = detail::unvec(v.tail(q2), q);
        double resid = 0;
        for (Eigen::Index i = 0; i < q; ++i)
            for (Eigen::Index j = 0; j < q; ++j)
                resid = std::max(resid, rel_residual(Vec(lambdas[i] * l.col(j)),
                                                     Vec(rhos[j] * r.col(i))));
        if (resid > 100 * cp.tol)
            throw NumericalError("centralizer_space: double-centralizer candidate fails "
                                 "the coupling constraint (residual " +
                                 std::to_string(resid) + ")");
        out.double_basis.emplace_back(std::move(l), std::move(r));
    }
    return out;
}

namespace detail {

template <typename PointwiseOp>
Mat quotient_operator(const CrossedProduct& cp, PointwiseOp&& op) {
    const Eigen::Index q = cp.dim();
    Mat out(q, q);
    for (Eigen::Index j = 0; j < q; ++j)
        out.col(j) = cp.q_matrix * cc_flatten(op(cp.section(cp.unit(j))));
    return out;
}

}  // namespace detail

/// The canonical images of A and G in the centralizer algebras of the
/// crossed product, as operators on quotient coordinates.
inline Mat iA_op(const CrossedProduct& cp, const Vec& a) {
    return detail::quotient_operator(
        cp, [&](const CcFun& f) { return cc_iA(cp.system, a, f); });
}

inline Mat iG_op(const CrossedProduct& cp, int r) {
    return detail::quotient_operator(
        cp, [&](const CcFun& f) { return cc_iG(cp.system, r, f); });
}

inline Mat jA_op(const CrossedProduct& cp, const Vec& a) {
    return detail::quotient_operator(
        cp, [&](const CcFun& f) { return cc_jA(cp.system, a, f); });
}

inline Mat jG_op(const CrossedProduct& cp, int r) {
    return detail::quotient_operator(
        cp, [&](const CcFun& f) { return cc_jG(cp.system, r, f); });
}

/// Structural report on the i/j operator families: memberships in the
/// left/right centralizer algebras, (anti-)homomorphism laws, covariance and
/// anti-covariance, the double-centralizer couplings, and (when the data is
/// involutive) the adjoint identities for the involution (L,R)* = (R*, L*).
struct CovarianceChecksReport {
    double i_membership_residual = 0;
    double j_membership_residual = 0;
    double i_hom_residual = 0;
    double j_antihom_residual = 0;
    double i_covariance_residual = 0;
    double j_anticovariance_residual = 0;
    double double_centralizer_residual = 0;
    double involutive_residual = 0;
    bool involutive_checked = false;

    double worst() const {
        double w = std::max({i_membership_residual, j_membership_residual,
                             i_hom_residual, j_antihom_residual, i_covariance_residual,
                             j_anticovariance_residual, double_centralizer_residual});
        return involutive_checked ? std::max(w, involutive_residual) : w;
    }
};

inline CovarianceChecksReport covariance_checks(const CrossedProduct& cp) {
    CovarianceChecksReport rep;
    const int k = cp.system.algebra.dim();
    const int n = cp.system.group.n;
    const Eigen::Index q = cp.dim();
    if (q == 0) return rep;

    std::vector<Mat> lambdas = detail::multiplication_matrices(cp, false);
    std::vector<Mat> rhos = detail::multiplication_matrices(cp, true);
    std::vector<Mat> ia(k), ja(k);
    std::vector<Mat> ig(n), jg(n);
    for (int i = 0; i < k; ++i) {
        ia[i] = iA_op(cp, cp.system.algebra.unit_coord(i));
        ja[i] = jA_op(cp, cp.system.algebra.unit_coord(i));
    }
    for (int r = 0; r < n; ++r) {
        ig[r] = iG_op(cp, r);
        jg[r] = jG_op(cp, r);
    }

    auto commutant_residual = [&](const Mat& m, const std::vector<Mat>& cs) {
        double w = 0;
        for (const Mat& c : cs) w = std::max(w, rel_residual(Mat(m * c), Mat(c * m)));
        return w;
    };
    for (int i = 0; i < k; ++i) {
        rep.i_membership_residual =
            std::max(rep.i_membership_residual, commutant_residual(ia[i], rhos));
        rep.j_membership_residual =
            std::max(rep.j_membership_residual, commutant_residual(ja[i], lambdas));
    }
    for (int r = 0; r < n; ++r) {
        rep.i_membership_residual =
            std::max(rep.i_membership_residual, commutant_residual(ig[r], rhos));
        rep.j_membership_residual =
            std::max(rep.j_membership_residual, commutant_residual(jg[r], lambdas));
    }

    auto ia_of = [&](const Vec& a) {
        Mat m = Mat::Zero(q, q);
        for (int i = 0; i < k; ++i) m += a(i) * ia[i];
        return m;
    };
    auto ja_of = [&](const Vec& a) {
        Mat m = Mat::Zero(q, q);
        for (int i = 0; i < k; ++i) m += a(i) * ja[i];
        return m;
    };

    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const Vec prod = cp.system.algebra.mult[i].col(j);
            rep.i_hom_residual =
                std::max(rep.i_hom_residual, rel_residual(Mat(ia[i] * ia[j]), ia_of(prod)));
            rep.j_antihom_residual = std::max(
                rep.j_antihom_residual, rel_residual(Mat(ja[j] * ja[i]), ja_of(prod)));
        }
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            rep.i_hom_residual = std::max(
                rep.i_hom_residual, rel_residual(Mat(ig[r] * ig[s]), ig[cp.system.group.mul(r, s)]));
            rep.j_antihom_residual = std::max(
                rep.j_antihom_residual,
                rel_residual(Mat(jg[s] * jg[r]), jg[cp.system.group.mul(r, s)]));
        }

    for (int r = 0; r < n; ++r) {
        const int rinv = cp.system.group.inv(r);
        for (int i = 0; i < k; ++i) {
            const Vec moved = cp.system.act(r, cp.system.algebra.unit_coord(i));
            rep.i_covariance_residual =
                std::max(rep.i_covariance_residual,
                         rel_residual(Mat(ig[r] * ia[i] * ig[rinv]), ia_of(moved)));
            rep.j_anticovariance_residual =
                std::max(rep.j_anticovariance_residual,
                         rel_residual(Mat(jg[rinv] * ja[i] * jg[r]), ja_of(moved)));
        }
    }

    for (int i = 0; i < k; ++i) {
        for (Eigen::Index x = 0; x < q; ++x)
            for (Eigen::Index y = 0; y < q; ++y)
                rep.double_centralizer_residual = std::max(
                    rep.double_centralizer_residual,
                    rel_residual(Vec(lambdas[x] * (ia[i] * cp.unit(y))),
                                 Vec(rhos[y] * (ja[i] * cp.unit(x)))));
    }
    for (int r = 0; r < n; ++r) {
        for (Eigen::Index x = 0; x < q; ++x)
            for (Eigen::Index y = 0; y < q; ++y)
                rep.double_centralizer_residual = std::max(
                    rep.double_centralizer_residual,
                    rel_residual(Vec(lambdas[x] * (ig[r] * cp.unit(y))),
                                 Vec(rhos[y] * (jg[r] * cp.unit(x)))));
    }

    if (cp.involutive) {
        rep.involutive_checked = true;
        // Operator adjoint with respect to the quotient involution:
        // (M)*(x) = (M(x*))*, a linear map.
        auto op_star = [&](const Mat& m) {
            return Mat(cp.star_matrix * m.conjugate() * cp.star_matrix.conjugate());
        };
        for (int i = 0; i < k; ++i) {
            const Vec astar = cp.system.algebra.star(cp.system.algebra.unit_coord(i));
            rep.involutive_residual = std::max(
                rep.involutive_residual, rel_residual(op_star(ja[i]), ia_of(astar)));
            rep.involutive_residual = std::max(
                rep.involutive_residual, rel_residual(op_star(ia[i]), ja_of(astar)));
        }
        for (int r = 0; r < n; ++r) {
            const int rinv = cp.system.group.inv(r);
            rep.involutive_residual =
                std::max(rep.involutive_residual, rel_residual(op_star(jg[r]), ig[rinv]));
            rep.involutive_residual =
                std::max(rep.involutive_residual, rel_residual(op_star(ig[r]), jg[rinv]));
        }
    }
    return rep;
}

/// A bounded representation of the crossed product: images of the quotient
/// basis vectors on a d-dimensional normed space.
struct CPRep {
    int dim = 0;
    VecNorm norm_kind = VecNorm::L2;
    std::vector<Mat> images;  // one d x d matrix per quotient basis vector

    Mat apply(const Vec& x) const {
        Mat out = Mat::Zero(dim, dim);
        for (size_t j = 0; j < images.size(); ++j)
            out += x(static_cast<Eigen::Index>(j)) * images[j];
        return out;
    }
};

inline bool nondegenerate(const CPRep& t) {
    if (t.images.empty()) return false;
    const int d = t.dim;
    Mat stack(d, static_cast<Eigen::Index>(t.images.size()) * d);
    for (size_t j = 0; j < t.images.size(); ++j)
        stack.middleCols(static_cast<Eigen::Index>(j) * d, d) = t.images[j];
    return rank(stack) == d;
}

/// Validates multiplicativity on quotient basis pairs and wraps the images.
inline CPRep make_cp_rep(const CrossedProduct& cp, VecNorm norm_kind,
                         std::vector<Mat> images, double tol = kDefaultTol) {
    if (static_cast<Eigen::Index>(images.size()) != cp.dim())
        throw DimensionError("cp rep: expected " + std::to_string(cp.dim()) +
                             " images, got " + std::to_string(images.size()));
    CPRep t;
    t.dim = images.empty() ? 0 : static_cast<int>(images[0].rows());
    t.norm_kind = norm_kind;
    t.images = std::move(images);
    double resid = 0;
    for (Eigen::Index i = 0; i < cp.dim(); ++i)
        for (Eigen::Index j = 0; j < cp.dim(); ++j)
            resid = std::max(resid, rel_residual(Mat(t.images[i] * t.images[j]),
                                                 t.apply(cp.mul(cp.unit(i), cp.unit(j)))));
    if (resid > tol)
        throw ValidationError("cp rep: images are not multiplicative (residual " +
                              std::to_string(resid) + ")");
    return t;
}

/// The representation of the crossed product induced by a member of R (or any
/// pair whose integrated form kills the kernel).
inline CPRep induced_cp_rep(const CrossedProduct& cp, const CovariantRep& rep) {
    CPRep t;
    t.dim = rep.dim;
    t.norm_kind = rep.norm_kind;
    t.images = induced_images(cp, rep);
    return t;
}

/// Extension of a non-degenerate representation T to a left centralizer L:
/// with a genuine left identity the net formula collapses to
/// T-bar(L) = T(L(1_l)).
inline Mat extend_centralizer(const CrossedProduct& cp, const CPRep& t, const Mat& l) {
    if (!cp.left_identity)
        throw PreconditionError("extend_centralizer: crossed product has no left identity");
    if (!nondegenerate(t))
        throw PreconditionError("extend_centralizer: representation is degenerate");
    return t.apply(l * (*cp.left_identity));
}

struct ExtensionReport {
    double unital_residual = 0;   // T-bar(id) vs id
    double mult_residual = 0;     // T-bar(L1 L2) vs T-bar(L1) T-bar(L2)
    double compat_residual = 0;   // T-bar(L) T(x) vs T(L(x)) on random x
    double lambda_residual = 0;   // T-bar(lambda(x)) vs T(x) on random x
};

/// Verifies the defining properties of the extension against a basis of the
/// left centralizer algebra.
inline ExtensionReport verify_extension(const CrossedProduct& cp, const CPRep& t,
                                        const std::vector<Mat>& ml_basis,
                                        int samples = 20, uint64_t seed = 7) {
    ExtensionReport out;
    const Eigen::Index q = cp.dim();
    out.unital_residual = rel_residual(extend_centralizer(cp, t, Mat::Identity(q, q)),
                                       Mat(Mat::Identity(t.dim, t.dim)));
    for (size_t a = 0; a < ml_basis.size(); ++a)
        for (size_t b = 0; b < ml_basis.size(); ++b) {
            Mat lhs = extend_centralizer(cp, t, Mat(ml_basis[a] * ml_basis[b]));
            Mat rhs = extend_centralizer(cp, t, ml_basis[a]) *
                      extend_centralizer(cp, t, ml_basis[b]);
            out.mult_residual = std::max(out.mult_residual, rel_residual(lhs, rhs));
        }
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vec x = rng.cgauss_vec(q);
        for (const Mat& l : ml_basis) {
            Mat lhs = extend_centralizer(cp, t, l) * t.apply(x);
            Mat rhs = t.apply(l * x);
            out.compat_residual = std::max(out.compat_residual, rel_residual(lhs, rhs));
        }
        out.lambda_residual = std::max(
            out.lambda_residual,
            rel_residual(extend_centralizer(cp, t, lambda_map(cp, x)), t.apply(x)));
    }
    return out;
}

/// Whether the joint map L -> (T-bar(L)) over the induced representations of
/// the members of R has full rank on the left centralizer algebra.
inline bool separation_check(const CrossedProduct& cp) {
    if (!cp.left_identity)
        throw PreconditionError("separation_check: crossed product has no left identity");
    std::vector<CPRep> ts;
    for (const CovariantRep& rep : cp.reps.reps) {
        if (!nondegenerate(rep))
            throw PreconditionError("separation_check: class contains a degenerate member");
        ts.push_back(induced_cp_rep(cp, rep));
    }
    CentralizerSpace ml = centralizer_space(cp, CentralizerKind::Left);
    if (ml.dim() == 0) return true;
    Eigen::Index total = 0;
    for (const CPRep& t : ts) total += static_cast<Eigen::Index>(t.dim) * t.dim;
    Mat stacked(static_cast<Eigen::Index>(ml.dim()), total);
    for (int i = 0; i < ml.dim(); ++i) {
        Eigen::Index off = 0;
        for (const CPRep& t : ts) {
            Mat img = extend_centralizer(cp, t, ml.basis[static_cast<size_t>(i)]);
            stacked.row(i).segment(off, img.size()) =
                Eigen::Map<const Vec>(img.data(), img.size()).transpose();
            off += img.size();
        }
    }
    return rank(stacked.transpose()) == ml.dim();
}

}  // namespace xprod
