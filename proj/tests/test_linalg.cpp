#include "xprod/linalg.hpp"

#include <gtest/gtest.h>

#include "xprod/rng.hpp"

using namespace xprod;

namespace {

// Independent oracle for the spectral norm: power iteration on m^H m with a
// Rayleigh quotient readout. Deliberately avoids the SVD path under test.
double l2_norm_oracle(const Mat& m) {
    Mat g = m.adjoint() * m;
    Vec v = Vec::Ones(g.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += Complex(0.01 * (i + 1), 0.003 * i);
    v /= v.norm();
    for (int it = 0; it < 500; ++it) {
        Vec w = g * v;
        double n = w.norm();
        if (n < 1e-300) return 0.0;
        v = w / n;
    }
    double rayleigh = (v.adjoint() * g * v).real()(0);
    return std::sqrt(std::max(rayleigh, 0.0));
}

Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Mat m(rows.size(), rows.begin()->size());
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST(OpNorm, IdentityIsExactlyOneForAllKinds) {
    Mat id = Mat::Identity(3, 3);
    EXPECT_EQ(op_norm(id, VecNorm::L1), 1.0);
    EXPECT_EQ(op_norm(id, VecNorm::L2), 1.0);
    EXPECT_EQ(op_norm(id, VecNorm::Linf), 1.0);
}

TEST(OpNorm, ColumnAndRowSums) {
    Mat m = from_rows({{1, 2}, {3, 4}});
    EXPECT_DOUBLE_EQ(op_norm(m, VecNorm::L1), 6.0);   // max column sum
    EXPECT_DOUBLE_EQ(op_norm(m, VecNorm::Linf), 7.0);  // max row sum
}

TEST(OpNorm, SpectralNormAgreesWithPowerIterationOracle) {
    Mat m = from_rows({{1, 2}, {3, 4}});
    EXPECT_NEAR(op_norm(m, VecNorm::L2), l2_norm_oracle(m), 1e-9);

    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 1 + rng.pick(8), c = 1 + rng.pick(8);
        Mat a = rng.cgauss_mat(r, c);
        double got = op_norm(a, VecNorm::L2);
        EXPECT_NEAR(got, l2_norm_oracle(a), 1e-9 * (1 + got));
    }
}

TEST(OpNorm, SubmultiplicativeOnRandomPairs) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + rng.pick(6);
        Mat a = rng.cgauss_mat(n, n), b = rng.cgauss_mat(n, n);
        for (VecNorm k : {VecNorm::L1, VecNorm::L2, VecNorm::Linf})
            EXPECT_LE(op_norm(Mat(a * b), k), op_norm(a, k) * op_norm(b, k) + 1e-9);
    }
}

TEST(OpNorm, EmptyMatrixIsRejected) {
    Mat empty(0, 0);
    EXPECT_THROW(op_norm(empty, VecNorm::L2), DimensionError);
}

TEST(NullSpace, ZeroMatrixGivesFullBasis) {
    Mat z = Mat::Zero(2, 2);
    Mat ns = null_space(z, 1e-9);
    EXPECT_EQ(ns.cols(), 2);
    EXPECT_TRUE((ns.adjoint() * ns - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST(NullSpace, IdentityGivesEmptyBasis) {
    EXPECT_EQ(null_space(Mat(Mat::Identity(3, 3)), 1e-9).cols(), 0);
}

TEST(NullSpace, RowVectorKernel) {
    Mat m = from_rows({{1, 1}});
    Mat ns = null_space(m, 1e-9);
    ASSERT_EQ(ns.cols(), 1);
    // proportional to (1, -1), and m v = 0 on the nose
    EXPECT_NEAR(std::abs(ns(0, 0) + ns(1, 0)), 0.0, 1e-12);
    EXPECT_NEAR((m * ns).norm(), 0.0, 1e-12);
}

TEST(NullSpace, VectorsAreNearKernelOfRandomRankDeficientMatrices) {
    Rng rng(99);
    const double tol = 1e-9;
    for (int trial = 0; trial < 25; ++trial) {
        int r = 2 + rng.pick(6), c = 2 + rng.pick(6), t = 1 + rng.pick(std::min(r, c));
        Mat m = rng.cgauss_mat(r, t) * rng.cgauss_mat(t, c);
        Mat ns = null_space(m, tol);
        double m2 = op_norm(m, VecNorm::L2);
        for (Eigen::Index j = 0; j < ns.cols(); ++j)
            EXPECT_LE((m * ns.col(j)).norm(), 10 * tol * m2);
        EXPECT_EQ(rank(m, tol) + ns.cols(), c);
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(Mat(Mat::Identity(4, 4))), 4);
    EXPECT_EQ(rank(Mat(Mat::Zero(3, 2))), 0);
    Rng rng(3);
    Vec u = rng.cgauss_vec(5), v = rng.cgauss_vec(4);
    Mat outer = u * v.transpose();
    EXPECT_EQ(rank(outer), 1);
}

TEST(LeastSquares, IdentityReturnsRhs) {
    Rng rng(1);
    Vec b = rng.cgauss_vec(4);
    LeastSquares ls = solve_least_squares(Mat(Mat::Identity(4, 4)), b);
    EXPECT_NEAR((ls.x - b).norm(), 0.0, 1e-12);
    EXPECT_NEAR(ls.residual, 0.0, 1e-12);
}

TEST(LeastSquares, InconsistentSystemHasPositiveResidual) {
    Mat m = from_rows({{1}, {1}});
    Vec b(2);
    b << Complex(0), Complex(1);
    LeastSquares ls = solve_least_squares(m, b);
    EXPECT_NEAR(ls.residual, std::sqrt(0.5), 1e-12);
}

TEST(LeastSquares, OverdeterminedConsistentSystemIsSolvedExactly) {
    Rng rng(17);
    Mat m = rng.cgauss_mat(7, 3);
    Vec x0 = rng.cgauss_vec(3);
    LeastSquares ls = solve_least_squares(m, Vec(m * x0));
    EXPECT_LE(ls.residual, 1e-10);
    EXPECT_NEAR((ls.x - x0).norm(), 0.0, 1e-9);
}

TEST(RowReduce, PivotsAndSpan) {
    Mat m = from_rows({{2, 4}, {1, 2}});
    RowReduction rr = row_reduce(m, 1e-12);
    ASSERT_EQ(rr.pivots.size(), 1u);
    EXPECT_EQ(rr.pivots[0], 0);
    EXPECT_NEAR(std::abs(rr.rref(0, 0) - Complex(1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(rr.rref(0, 1) - Complex(2)), 0.0, 1e-12);
}

TEST(RowReduce, PivotColumnsFormIdentity) {
    Rng rng(5);
    Mat m = rng.cgauss_mat(3, 7);
    RowReduction rr = row_reduce(m, 1e-12);
    ASSERT_EQ(rr.pivots.size(), 3u);
    for (size_t i = 0; i < rr.pivots.size(); ++i)
        for (size_t j = 0; j < rr.pivots.size(); ++j)
            EXPECT_NEAR(std::abs(rr.rref(i, rr.pivots[j]) - (i == j ? 1.0 : 0.0)), 0.0,
                        1e-10);
}
