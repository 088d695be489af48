#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "xprod/linalg.hpp"

namespace xprod {

/// Deterministic random source. Draws go through fixed bit-level recipes
/// rather than std distributions, so a seed pins the output across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : g_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    uint64_t bits() { return g_(); }

    int pick(int n) { return static_cast<int>(bits() % static_cast<uint64_t>(n)); }

    bool coin() { return (bits() & 1) != 0; }

    double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double gauss() {
        double u1 = unit(), u2 = unit();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Complex cgauss() { return Complex(gauss(), gauss()) * 0.7071067811865476; }

    Mat cgauss_mat(Eigen::Index r, Eigen::Index c) {
        Mat m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cgauss();
        return m;
    }

    Vec cgauss_vec(Eigen::Index n) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cgauss();
        return v;
    }

private:
    std::mt19937_64 g_;
};

}  // namespace xprod
