#include "xprod/dynsys.hpp"

#include <gtest/gtest.h>

#include "xprod/random_system.hpp"
#include "xprod/rng.hpp"

using namespace xprod;

namespace {

Mat unit_mat(int m, int i, int j) {
    Mat e = Mat::Zero(m, m);
    e(i, j) = 1;
    return e;
}

// Z/2 acting on the full 2x2 matrices by conjugation with the swap matrix.
// On the basis [E00, E01, E10, E11] this is the reversal permutation.
DynamicalSystem swap_system() {
    Mat alpha = Mat::Zero(4, 4);
    alpha(3, 0) = alpha(2, 1) = alpha(1, 2) = alpha(0, 3) = 1;
    return build_system(cyclic_group(2), matrix_full_algebra(2),
                        {Mat::Identity(4, 4), alpha});
}

bool exactly_equal(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

TEST(System, TrivialActionValidates) {
    for (int n : {1, 3, 4}) {
        NormedAlgebra a = matrix_full_algebra(2);
        std::vector<Mat> action(n, Mat::Identity(a.dim(), a.dim()));
        DynamicalSystem sys = build_system(cyclic_group(n), a, action);
        EXPECT_TRUE(sys.involutive);
    }
}

TEST(System, SwapConjugationIsInvolutive) {
    DynamicalSystem sys = swap_system();
    EXPECT_TRUE(sys.involutive);
    // act(g, E00) = E11
    Vec moved = sys.act(1, sys.algebra.unit_coord(0));
    EXPECT_NEAR(rel_residual(moved, sys.algebra.unit_coord(3)), 0.0, 1e-12);
}

TEST(System, TransposeActionIsRejectedAsNotMultiplicative) {
    // Transpose swaps E01 and E10; it is linear and involutive but
    // anti-multiplicative, so the automorphism check must fire.
    Mat alpha = Mat::Zero(4, 4);
    alpha(0, 0) = alpha(3, 3) = 1;
    alpha(2, 1) = alpha(1, 2) = 1;
    try {
        build_system(cyclic_group(2), matrix_full_algebra(2),
                     {Mat::Identity(4, 4), alpha});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("multiplicative"), std::string::npos)
            << e.what();
    }
}

TEST(System, ActionRoundTrips) {
    DynamicalSystem sys = swap_system();
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        Vec a = rng.cgauss_vec(sys.algebra.dim());
        EXPECT_LE(rel_residual(sys.act(sys.group.identity, a), a), 1e-12);
        for (int r = 0; r < sys.group.n; ++r)
            EXPECT_LE(rel_residual(sys.act(r, sys.act(sys.group.inv(r), a)), a), 1e-10);
    }
}

TEST(CovariantRep, InnerActionExampleHasZeroResiduals) {
    DynamicalSystem sys = swap_system();
    Mat swap = Mat::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1;
    std::vector<Mat> pi = {unit_mat(2, 0, 0), unit_mat(2, 0, 1), unit_mat(2, 1, 0),
                           unit_mat(2, 1, 1)};
    CovariantRep rep = make_covariant_rep(sys, VecNorm::L2, pi,
                                          {Mat::Identity(2, 2), swap});
    RepValidationReport report = validate_covariant_rep(sys, rep);
    EXPECT_LE(report.covariance_residual, 1e-14);
    EXPECT_LE(report.pi_hom_residual, 1e-14);
    EXPECT_LE(report.u_hom_residual, 1e-14);
    EXPECT_TRUE(report.nondegenerate);
    EXPECT_TRUE(report.involutive);
    EXPECT_EQ(report.u_norms[0], 1.0);
}

TEST(CovariantRep, BrokenUIsReportedNotThrown) {
    DynamicalSystem sys = swap_system();
    std::vector<Mat> pi = {unit_mat(2, 0, 0), unit_mat(2, 0, 1), unit_mat(2, 1, 0),
                           unit_mat(2, 1, 1)};
    CovariantRep rep;
    rep.dim = 2;
    rep.norm_kind = VecNorm::L2;
    rep.pi = pi;
    rep.u = {Mat::Identity(2, 2), Mat::Identity(2, 2)};  // ignores the swap
    RepValidationReport report = validate_covariant_rep(sys, rep);
    EXPECT_GT(report.covariance_residual, 0.1);
    EXPECT_THROW(make_covariant_rep(sys, VecNorm::L2, rep.pi, rep.u), ValidationError);
}

TEST(CovariantRep, NondegeneracyByStackedRank) {
    DynamicalSystem sys = swap_system();
    std::vector<Mat> pi = {unit_mat(2, 0, 0), unit_mat(2, 0, 1), unit_mat(2, 1, 0),
                           unit_mat(2, 1, 1)};
    Mat swap = Mat::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1;
    CovariantRep unital = make_covariant_rep(sys, VecNorm::L2, pi,
                                             {Mat::Identity(2, 2), swap});
    EXPECT_TRUE(nondegenerate(unital));

    CovariantRep zero;
    zero.dim = 2;
    zero.pi.assign(4, Mat::Zero(2, 2));
    zero.u = {Mat::Identity(2, 2), Mat::Identity(2, 2)};
    EXPECT_FALSE(nondegenerate(zero));
}

TEST(CovariantRep, LiteralUpperLeftRepIsDegenerate) {
    // pi maps span{E11, E12} to the literal matrices on C^2: the essential
    // subspace is the line C e1.
    NormedAlgebra a = upper_left_algebra(2);
    DynamicalSystem sys = build_system(cyclic_group(1), a, {Mat::Identity(2, 2)});
    CovariantRep rep = make_covariant_rep(sys, VecNorm::L2,
                                          {unit_mat(2, 0, 0), unit_mat(2, 0, 1)},
                                          {Mat::Identity(2, 2)});
    EXPECT_FALSE(nondegenerate(rep));
    Mat basis = essential_subspace(sys, rep);
    ASSERT_EQ(basis.cols(), 1);
    EXPECT_NEAR(std::abs(basis(0, 0)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(basis(1, 0)), 0.0, 1e-12);
}

TEST(CovariantRep, EssentialSubspaceOfZeroRepIsZero) {
    NormedAlgebra a = upper_left_algebra(2);
    DynamicalSystem sys = build_system(cyclic_group(1), a, {Mat::Identity(2, 2)});
    CovariantRep rep;
    rep.dim = 3;
    rep.pi.assign(2, Mat::Zero(3, 3));
    rep.u = {Mat::Identity(3, 3)};
    EXPECT_EQ(essential_subspace(sys, rep).cols(), 0);
}

TEST(CovariantRep, EssentialSubspaceRequiresLeftIdentity) {
    Mat e12 = unit_mat(2, 0, 1);
    NormedAlgebra square_zero = build_algebra({e12}, VecNorm::L2);
    DynamicalSystem sys =
        build_system(cyclic_group(1), square_zero, {Mat::Identity(1, 1)});
    CovariantRep rep;
    rep.dim = 2;
    rep.pi = {e12};
    rep.u = {Mat::Identity(2, 2)};
    EXPECT_THROW(essential_subspace(sys, rep), PreconditionError);
}

TEST(Generator, DeterministicInSeed) {
    GeneratedSystem a = random_system(0), b = random_system(0);
    EXPECT_EQ(a.system.group.cayley, b.system.group.cayley);
    ASSERT_EQ(a.system.action.size(), b.system.action.size());
    for (size_t s = 0; s < a.system.action.size(); ++s)
        EXPECT_TRUE(exactly_equal(a.system.action[s], b.system.action[s]));
    ASSERT_EQ(a.reps.reps.size(), b.reps.reps.size());
    for (size_t i = 0; i < a.reps.reps.size(); ++i) {
        for (size_t j = 0; j < a.reps.reps[i].pi.size(); ++j)
            EXPECT_TRUE(exactly_equal(a.reps.reps[i].pi[j], b.reps.reps[i].pi[j]));
        for (size_t s = 0; s < a.reps.reps[i].u.size(); ++s)
            EXPECT_TRUE(exactly_equal(a.reps.reps[i].u[s], b.reps.reps[i].u[s]));
    }
}

TEST(Generator, ProducesValidNondegenerateClasses) {
    for (uint64_t seed = 0; seed < 25; ++seed) {
        GeneratedSystem gs = random_system(seed);
        // Re-validate from scratch through the public constructors.
        DynamicalSystem rebuilt =
            build_system(gs.system.group, gs.system.algebra, gs.system.action);
        EXPECT_EQ(rebuilt.involutive, gs.system.involutive);
        EXPECT_EQ(gs.reps.nu[static_cast<size_t>(gs.system.group.identity)], 1.0);
        for (const CovariantRep& rep : gs.reps.reps) {
            RepValidationReport r = validate_covariant_rep(gs.system, rep);
            EXPECT_LE(r.covariance_residual, 1e-10);
            EXPECT_LE(r.pi_hom_residual, 1e-10);
            EXPECT_LE(r.u_hom_residual, 1e-10);
            EXPECT_TRUE(r.nondegenerate);
            Mat ess = essential_subspace(gs.system, rep);
            EXPECT_EQ(ess.cols(), rep.dim);  // nondegenerate <=> essential = full
        }
    }
}

TEST(Generator, ForcedInvolutiveMode) {
    GenCaps inv_caps;
    inv_caps.involutive = true;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GeneratedSystem gs = random_system(seed, inv_caps);
        EXPECT_TRUE(gs.system.involutive);
        EXPECT_TRUE(gs.reps.involutive);
        for (const CovariantRep& rep : gs.reps.reps) EXPECT_TRUE(rep.involutive);
        // C*-subcase: pi is contractive, sampled on basis products
        const NormedAlgebra& a = gs.system.algebra;
        for (const CovariantRep& rep : gs.reps.reps)
            for (int i = 0; i < a.dim(); ++i)
                for (int j = 0; j < a.dim(); ++j) {
                    Vec prod = a.mult[i].col(j);
                    double na = a.norm(prod);
                    if (na < 1e-12) continue;
                    EXPECT_LE(op_norm(rep.pi_of(prod), rep.norm_kind), na * (1 + 1e-9));
                }
    }
}

TEST(Generator, RespectsCaps) {
    GenCaps caps;
    caps.max_group_order = 4;
    caps.max_alg_dim = 2;
    caps.max_reps = 2;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GeneratedSystem gs = random_system(seed, caps);
        EXPECT_LE(gs.system.group.n, 4);
        EXPECT_LE(gs.system.algebra.dim(), 2);
        EXPECT_LE(gs.reps.reps.size(), 2u);
    }
}
