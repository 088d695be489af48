#pragma once

#include <optional>
#include <vector>

#include "xprod/dynsys.hpp"
#include "xprod/rng.hpp"

namespace xprod {

/// Size caps for the system generator.
struct GenCaps {
    int max_group_order = 6;
    int max_alg_dim = 4;
    int max_reps = 3;
    std::optional<bool> involutive{};  // unset: decided by the seed
};

struct GeneratedSystem {
    DynamicalSystem system;
    RepClass reps;
};

namespace detail {

enum class GenGroupKind { Cyclic, Klein, Sym3 };

struct GenGroup {
    GenGroupKind kind;
    FiniteGroup group;
};

inline int s3_parity(int index) {
    std::vector<int> p = symmetric_group_permutation(3, index);
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2;
}

/// All 1-dimensional representations of the generated group.
inline std::vector<std::vector<Complex>> characters(const GenGroup& gg) {
    const int n = gg.group.n;
    std::vector<std::vector<Complex>> chars;
    switch (gg.kind) {
        case GenGroupKind::Cyclic: {
            for (int t = 0; t < n; ++t) {
                std::vector<Complex> chi(n);
                for (int s = 0; s < n; ++s)
                    chi[s] = std::polar(1.0, 2.0 * 3.14159265358979323846 * t * s / n);
                chars.push_back(std::move(chi));
            }
            break;
        }
        case GenGroupKind::Klein: {
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) {
                    std::vector<Complex> chi(4);
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            chi[a * 2 + b] = ((p * a + q * b) % 2 == 0) ? 1.0 : -1.0;
                    chars.push_back(std::move(chi));
                }
            break;
        }
        case GenGroupKind::Sym3: {
            std::vector<Complex> triv(6, 1.0), sign(6);
            for (int s = 0; s < 6; ++s) sign[s] = s3_parity(s) == 0 ? 1.0 : -1.0;
            chars.push_back(std::move(triv));
            chars.push_back(std::move(sign));
            break;
        }
    }
    return chars;
}

/// The 2-dimensional orthogonal irreducible representation of S_3: the
/// permutation representation restricted to the plane orthogonal to (1,1,1).
inline std::vector<Mat> s3_standard_irrep() {
    Eigen::Matrix<double, 3, 2> b;
    const double s2 = std::sqrt(0.5), s6 = 1.0 / std::sqrt(6.0);
    b << s2, s6, -s2, s6, 0.0, -2.0 * s6;
    std::vector<Mat> out;
    out.push_back(Mat::Identity(2, 2));  // index 0 is the identity permutation
    for (int idx = 1; idx < 6; ++idx) {
        std::vector<int> p = symmetric_group_permutation(3, idx);
        Eigen::Matrix3d perm = Eigen::Matrix3d::Zero();
        for (int i = 0; i < 3; ++i) perm(p[i], i) = 1.0;
        Eigen::Matrix2d d = b.transpose() * perm * b;
        out.push_back(d.cast<Complex>());
    }
    return out;
}

/// A 2-dimensional unitary representation of the generated group: either a
/// diagonal sum of two characters or (for S_3) the standard irrep.
inline std::vector<Mat> two_dim_unitary(const GenGroup& gg, Rng& rng) {
    if (gg.kind == GenGroupKind::Sym3 && rng.coin()) return s3_standard_irrep();
    auto chars = characters(gg);
    int a = rng.pick(static_cast<int>(chars.size()));
    int b = rng.pick(static_cast<int>(chars.size()));
    std::vector<Mat> out;
    for (int s = 0; s < gg.group.n; ++s) {
        Mat d = Mat::Zero(2, 2);
        d(0, 0) = chars[a][s];
        d(1, 1) = chars[b][s];
        out.push_back(d);
    }
    return out;
}

/// Shift amount in Z/m for a homomorphism G -> Z/m, if one exists with the
/// block-permutation use in mind.
inline std::optional<int> quotient_shift(const GenGroup& gg, int m, int s) {
    switch (gg.kind) {
        case GenGroupKind::Cyclic:
            if (gg.group.n % m == 0) return s % m;
            return std::nullopt;
        case GenGroupKind::Klein:
            if (m == 2) return s / 2;
            if (m == 4) return 2 * (s / 2);
            return std::nullopt;
        case GenGroupKind::Sym3:
            if (m == 2) return s3_parity(s);
            if (m == 4) return 2 * s3_parity(s);
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

/// Reproducible pseudo-random valid system with a uniformly bounded class of
/// non-degenerate covariant representations. A is a direct sum of full matrix
/// blocks (hence unital), alpha permutes equal blocks or acts by inner
/// automorphisms, and each member of R is the defining representation twisted
/// by characters, tensor factors and (in the non-involutive case) a change of
/// basis. Everything is re-validated before being returned.
inline GeneratedSystem random_system(uint64_t seed, const GenCaps& caps = GenCaps{}) {
    if (caps.max_group_order < 1 || caps.max_alg_dim < 1 || caps.max_reps < 1)
        throw PreconditionError("random_system: caps must be positive");
    Rng rng(seed);

    // Group.
    std::vector<detail::GenGroup> group_options;
    for (int n = 1; n <= std::min(6, caps.max_group_order); ++n)
        group_options.push_back({detail::GenGroupKind::Cyclic, cyclic_group(n)});
    if (caps.max_group_order >= 4)
        group_options.push_back(
            {detail::GenGroupKind::Klein, direct_product(cyclic_group(2), cyclic_group(2))});
    if (caps.max_group_order >= 6)
        group_options.push_back({detail::GenGroupKind::Sym3, symmetric_group(3)});
    detail::GenGroup gg = group_options[rng.pick(static_cast<int>(group_options.size()))];
    const int n = gg.group.n;

    // Algebra: direct sum of full matrix blocks, sum of squares <= cap.
    std::vector<std::vector<int>> block_options = {{1}};
    if (caps.max_alg_dim >= 2) block_options.push_back({1, 1});
    if (caps.max_alg_dim >= 3) block_options.push_back({1, 1, 1});
    if (caps.max_alg_dim >= 4) {
        block_options.push_back({2});
        block_options.push_back({1, 1, 1, 1});
    }
    std::vector<int> blocks = block_options[rng.pick(static_cast<int>(block_options.size()))];
    const int ambient = [&] {
        int t = 0;
        for (int b : blocks) t += b;
        return t;
    }();

    const bool involutive = caps.involutive ? *caps.involutive : rng.coin();
    VecNorm alg_norm = involutive
                           ? VecNorm::L2
                           : std::array<VecNorm, 3>{VecNorm::L1, VecNorm::L2,
                                                    VecNorm::Linf}[rng.pick(3)];

    std::vector<Mat> basis;
    {
        int off = 0;
        for (int b : blocks) {
            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) {
                    Mat e = Mat::Zero(ambient, ambient);
                    e(off + i, off + j) = 1;
                    basis.push_back(e);
                }
            off += b;
        }
    }
    NormedAlgebra algebra = build_algebra(basis, alg_norm);
    const int k = algebra.dim();

    // Action: conjugation by a unitary homomorphism V: G -> U(ambient) that
    // normalizes A (trivial, block permutation, or inner).
    std::vector<Mat> implementing(n, Mat::Identity(ambient, ambient));
    enum { kTrivial, kPerm, kInner };
    std::vector<int> modes = {kTrivial};
    bool all_ones = true;
    for (int b : blocks)
        if (b != 1) all_ones = false;
    if (all_ones && ambient >= 2 && detail::quotient_shift(gg, ambient, 0)) modes.push_back(kPerm);
    if (!all_ones) modes.push_back(kInner);
    int mode = modes[rng.pick(static_cast<int>(modes.size()))];
    if (mode == kPerm) {
        for (int s = 0; s < n; ++s) {
            int shift = *detail::quotient_shift(gg, ambient, s);
            Mat p = Mat::Zero(ambient, ambient);
            for (int i = 0; i < ambient; ++i) p((i + shift) % ambient, i) = 1;
            implementing[s] = p;
        }
    } else if (mode == kInner) {
        std::vector<std::vector<Mat>> block_reps;
        for (int b : blocks) {
            if (b == 1) {
                block_reps.push_back(std::vector<Mat>(n, Mat::Identity(1, 1)));
            } else {
                block_reps.push_back(detail::two_dim_unitary(gg, rng));
            }
        }
        for (int s = 0; s < n; ++s) {
            Mat v = Mat::Zero(ambient, ambient);
            int off = 0;
            for (size_t bi = 0; bi < blocks.size(); ++bi) {
                int b = blocks[bi];
                v.block(off, off, b, b) = block_reps[bi][s];
                off += b;
            }
            implementing[s] = v;
        }
    }

    Mat flat(static_cast<Eigen::Index>(ambient) * ambient, k);
    for (int i = 0; i < k; ++i) flat.col(i) = detail::vec_of(algebra.basis[i]);
    std::vector<Mat> action(n);
    for (int s = 0; s < n; ++s) {
        Mat a(k, k);
        for (int i = 0; i < k; ++i) {
            Mat moved = implementing[s] * algebra.basis[i] * implementing[s].adjoint();
            a.col(i) = solve_least_squares(flat, detail::vec_of(moved)).x;
        }
        action[s] = a;
    }
    DynamicalSystem sys = build_system(gg.group, algebra, action);

    // Representation class.
    auto chars = detail::characters(gg);
    int rep_count = 1 + rng.pick(caps.max_reps);
    std::vector<CovariantRep> members;
    for (int t = 0; t < rep_count; ++t) {
        int d2 = (rng.pick(3) == 0) ? 2 : 1;
        std::vector<Mat> tensor(n, Mat::Identity(d2, d2));
        if (d2 == 2) tensor = detail::two_dim_unitary(gg, rng);
        const std::vector<Complex>& chi = chars[rng.pick(static_cast<int>(chars.size()))];

        const int d = ambient * d2;
        std::vector<Mat> pi(k), u(n);
        for (int i = 0; i < k; ++i)
            pi[i] = kron(algebra.basis[i], Mat::Identity(d2, d2));
        for (int s = 0; s < n; ++s) u[s] = chi[s] * kron(implementing[s], tensor[s]);
        u[gg.group.identity] = Mat::Identity(d, d);

        VecNorm nk = VecNorm::L2;
        if (!involutive) {
            nk = std::array<VecNorm, 3>{VecNorm::L1, VecNorm::L2, VecNorm::Linf}[rng.pick(3)];
            if (rng.coin()) {
                // Similarity twist: unipotent + mild diagonal, well conditioned.
                Mat p = Mat::Identity(d, d);
                for (int i = 0; i < d; ++i)
                    for (int j = i + 1; j < d; ++j) p(i, j) = 0.25 * rng.cgauss();
                for (int i = 0; i < d; ++i)
                    p.row(i) *= std::exp(0.3 * (rng.unit() - 0.5));
                Mat pinv = p.inverse();
                for (int i = 0; i < k; ++i) pi[i] = p * pi[i] * pinv;
                for (int s = 0; s < n; ++s) u[s] = p * u[s] * pinv;
                u[gg.group.identity] = Mat::Identity(d, d);
            }
        }
        members.push_back(make_covariant_rep(sys, nk, std::move(pi), std::move(u)));
    }

    GeneratedSystem out{std::move(sys), RepClass{}};
    out.reps = make_rep_class(out.system, std::move(members));
    return out;
}

}  // namespace xprod
