#pragma once

// Shared builders and independent oracles for the test suites.

#include <vector>

#include "xprod/correspondence.hpp"
#include "xprod/crossed.hpp"
#include "xprod/random_system.hpp"

namespace testutil {

using namespace xprod;

inline DynamicalSystem field_system(const FiniteGroup& g) {
    NormedAlgebra f = field_algebra();
    return build_system(g, f, std::vector<Mat>(g.n, Mat::Identity(1, 1)));
}

inline CovariantRep character_rep(const DynamicalSystem& sys,
                                  const std::vector<Complex>& chi) {
    std::vector<Mat> u;
    for (Complex c : chi) {
        Mat m(1, 1);
        m(0, 0) = c;
        u.push_back(m);
    }
    return make_covariant_rep(sys, VecNorm::L2, {Mat::Identity(1, 1)}, u);
}

inline std::vector<Complex> cyclic_character(int n, int t) {
    std::vector<Complex> chi(n);
    for (int s = 0; s < n; ++s)
        chi[s] = std::polar(1.0, 2.0 * 3.14159265358979323846 * t * s / n);
    chi[0] = 1.0;
    return chi;
}

/// (field, Z/n, trivial) with all n characters.
inline std::pair<DynamicalSystem, RepClass> cyclic_group_algebra(int n) {
    DynamicalSystem sys = field_system(cyclic_group(n));
    std::vector<CovariantRep> members;
    for (int t = 0; t < n; ++t) members.push_back(character_rep(sys, cyclic_character(n, t)));
    RepClass rc = make_rep_class(sys, members);
    return {std::move(sys), std::move(rc)};
}

/// Independent DFT oracle: hat f(t) = sum_s f(s) omega^{ts}, direct double loop.
inline std::vector<Complex> dft_oracle(const std::vector<Complex>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<Complex> hat(n);
    for (int t = 0; t < n; ++t) {
        Complex acc = 0;
        for (int s = 0; s < n; ++s)
            acc += f[s] * std::polar(1.0, 2.0 * 3.14159265358979323846 * t * s / n);
        hat[t] = acc;
    }
    return hat;
}

/// span{E11, E12} under Z/2 with the sign action E12 -> -E12, together with
/// its two canonical 1-dimensional non-degenerate covariant representations.
/// The algebra has a left identity but no right identity.
inline std::pair<DynamicalSystem, RepClass> upper_left_z2() {
    NormedAlgebra a = upper_left_algebra(2);
    Mat alpha = Mat::Identity(2, 2);
    alpha(1, 1) = -1;
    DynamicalSystem sys =
        build_system(cyclic_group(2), a, {Mat::Identity(2, 2), alpha});
    Mat one = Mat::Identity(1, 1), zero = Mat::Zero(1, 1), minus = -Mat::Identity(1, 1);
    CovariantRep plus = make_covariant_rep(sys, VecNorm::L2, {one, zero}, {one, one});
    CovariantRep sign = make_covariant_rep(sys, VecNorm::L2, {one, zero}, {one, minus});
    RepClass rc = make_rep_class(sys, {plus, sign});
    return {std::move(sys), std::move(rc)};
}

/// Z/2 on the full 2x2 matrices by swap conjugation, with the defining
/// representation (pi literal, U the swap) and a character twist of it.
inline std::pair<DynamicalSystem, RepClass> swap_conjugation_system() {
    Mat alpha = Mat::Zero(4, 4);
    alpha(3, 0) = alpha(2, 1) = alpha(1, 2) = alpha(0, 3) = 1;
    DynamicalSystem sys = build_system(cyclic_group(2), matrix_full_algebra(2),
                                       {Mat::Identity(4, 4), alpha});
    std::vector<Mat> pi;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Mat e = Mat::Zero(2, 2);
            e(i, j) = 1;
            pi.push_back(e);
        }
    Mat swap = Mat::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1;
    CovariantRep base = make_covariant_rep(sys, VecNorm::L2, pi,
                                           {Mat::Identity(2, 2), swap});
    CovariantRep twisted = make_covariant_rep(sys, VecNorm::L2, pi,
                                              {Mat::Identity(2, 2), Mat(-swap)});
    RepClass rc = make_rep_class(sys, {base, twisted});
    return {std::move(sys), std::move(rc)};
}

/// The three irreducible representations of S3 (trivial, sign, standard),
/// derived here independently from permutation matrices.
inline std::vector<GroupRepSpec> s3_irreps() {
    FiniteGroup s3 = symmetric_group(3);
    std::vector<GroupRepSpec> out(3);
    for (int i = 0; i < 3; ++i) out[i].norm_kind = VecNorm::L2;
    Eigen::Matrix<double, 3, 2> b;
    const double s2 = std::sqrt(0.5), s6 = 1.0 / std::sqrt(6.0);
    b << s2, s6, -s2, s6, 0.0, -2.0 * s6;
    for (int idx = 0; idx < 6; ++idx) {
        std::vector<int> p = symmetric_group_permutation(3, idx);
        int inv = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[i] > p[j]) ++inv;
        Mat triv(1, 1), sgn(1, 1);
        triv(0, 0) = 1;
        sgn(0, 0) = (inv % 2 == 0) ? 1.0 : -1.0;
        out[0].u.push_back(triv);
        out[1].u.push_back(sgn);
        if (idx == 0) {
            out[2].u.push_back(Mat::Identity(2, 2));
        } else {
            Eigen::Matrix3d perm = Eigen::Matrix3d::Zero();
            for (int i = 0; i < 3; ++i) perm(p[i], i) = 1.0;
            Eigen::Matrix2d d = b.transpose() * perm * b;
            out[2].u.push_back(d.cast<Complex>());
        }
    }
    return out;
}

inline CcFun random_ccfun(Rng& rng, const DynamicalSystem& sys) {
    return CcFun{rng.cgauss_mat(sys.group.n, sys.algebra.dim())};
}

/// Block-diagonal direct sum of two covariant representations.
inline CovariantRep direct_sum_rep(const DynamicalSystem& sys, const CovariantRep& a,
                                   const CovariantRep& b) {
    const int d = a.dim + b.dim;
    auto embed = [&](const Mat& top, const Mat& bottom) {
        Mat m = Mat::Zero(d, d);
        m.topLeftCorner(a.dim, a.dim) = top;
        m.bottomRightCorner(b.dim, b.dim) = bottom;
        return m;
    };
    std::vector<Mat> pi, u;
    for (size_t i = 0; i < a.pi.size(); ++i) pi.push_back(embed(a.pi[i], b.pi[i]));
    for (size_t s = 0; s < a.u.size(); ++s) u.push_back(embed(a.u[s], b.u[s]));
    return make_covariant_rep(sys, a.norm_kind, pi, u);
}

}  // namespace testutil
