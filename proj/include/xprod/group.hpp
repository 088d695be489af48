#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xprod/errors.hpp"

namespace xprod {

/// Largest group order accepted; keeps every downstream construction
/// (dimension |G| * dim A) at desk scale.
inline constexpr int kMaxGroupOrder = 256;

/// A finite group as a validated multiplication table. Haar measure is the
/// counting measure (weight 1 per element) and the modular function is
/// identically 1, so integrals over G are plain sums.
struct FiniteGroup {
    int n = 0;                   // order
    std::vector<int> cayley;     // n*n row-major: cayley[a*n+b] = a*b
    int identity = 0;
    std::vector<int> inverse;    // inverse[a]

    int mul(int a, int b) const { return cayley[static_cast<size_t>(a) * n + b]; }
    int inv(int a) const { return inverse[static_cast<size_t>(a)]; }
    double haar(int) const { return 1.0; }     // counting measure
    double modular(int) const { return 1.0; }  // finite => unimodular

    bool operator==(const FiniteGroup& o) const {
        return n == o.n && cayley == o.cayley;
    }
};

/// Validates an n x n table over indices 0..n-1 as a group. Rejects
/// non-groups with an error naming the offending cell.
inline FiniteGroup validate_group(const std::vector<std::vector<int>>& table,
                                  std::optional<int> identity_hint = std::nullopt) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw ValidationError("group: empty table");
    if (n > kMaxGroupOrder)
        throw ValidationError("group: order " + std::to_string(n) + " exceeds cap " +
                              std::to_string(kMaxGroupOrder));
    FiniteGroup g;
    g.n = n;
    g.cayley.resize(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(table[a].size()) != n)
            throw ValidationError("group: row " + std::to_string(a) + " has length " +
                                  std::to_string(table[a].size()) + ", expected " +
                                  std::to_string(n));
        for (int b = 0; b < n; ++b) {
            int v = table[a][b];
            if (v < 0 || v >= n)
                throw ValidationError("group: cell (" + std::to_string(a) + "," +
                                      std::to_string(b) + ") = " + std::to_string(v) +
                                      " out of range");
            g.cayley[static_cast<size_t>(a) * n + b] = v;
        }
    }

    // A left identity suffices here: together with inverses and associativity
    // it is automatically two-sided, and that is re-checked at the end.
    auto is_identity = [&](int e) {
        for (int a = 0; a < n; ++a)
            if (g.mul(e, a) != a) return false;
        return true;
    };
    int e = -1;
    if (identity_hint) {
        if (*identity_hint < 0 || *identity_hint >= n || !is_identity(*identity_hint))
            throw ValidationError("group: hinted identity " +
                                  std::to_string(*identity_hint) + " is not an identity");
        e = *identity_hint;
    } else {
        for (int c = 0; c < n && e < 0; ++c)
            if (is_identity(c)) e = c;
        if (e < 0) throw ValidationError("group: no identity element");
    }
    g.identity = e;

    g.inverse.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (g.mul(a, b) == e && g.mul(b, a) == e) {
                g.inverse[a] = b;
                break;
            }
        }
        if (g.inverse[a] < 0)
            throw ValidationError("group: element " + std::to_string(a) +
                                  " has no inverse");
    }

    auto check_assoc = [&](int a, int b, int c) {
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw ValidationError(
                "group: associativity fails at (" + std::to_string(a) + "," +
                std::to_string(b) + "," + std::to_string(c) + "): (ab)c = " +
                std::to_string(g.mul(g.mul(a, b), c)) + " but a(bc) = " +
                std::to_string(g.mul(a, g.mul(b, c))));
    };
    if (n <= 64) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) check_assoc(a, b, c);
    } else {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
        for (int t = 0; t < 100000; ++t)
            check_assoc(static_cast<int>(rng() % n), static_cast<int>(rng() % n),
                        static_cast<int>(rng() % n));
    }
    for (int a = 0; a < n; ++a)
        if (g.mul(a, e) != a)
            throw ValidationError("group: element " + std::to_string(e) +
                                  " is not a right identity at " + std::to_string(a));
    return g;
}

inline FiniteGroup cyclic_group(int n) {
    if (n < 1) throw ValidationError("cyclic_group: order must be >= 1");
    if (n > kMaxGroupOrder)
        throw ValidationError("cyclic_group: order " + std::to_string(n) +
                              " exceeds cap " + std::to_string(kMaxGroupOrder));
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    return validate_group(table, 0);
}

/// Symmetric group on k letters, k <= 4. Elements are the permutations of
/// {0..k-1} in lexicographic order, so the identity has index 0; the product
/// p*q acts as "apply q, then p".
inline FiniteGroup symmetric_group(int k) {
    if (k < 1) throw ValidationError("symmetric_group: k must be >= 1");
    if (k > 4) throw ValidationError("symmetric_group: k = " + std::to_string(k) +
                                     " not supported (k <= 4)");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const int n = static_cast<int>(perms.size());
    auto index_of = [&](const std::vector<int>& q) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) -
                                perms.begin());
    };
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    std::vector<int> comp(k);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (int i = 0; i < k; ++i) comp[i] = perms[a][perms[b][i]];
            table[a][b] = index_of(comp);
        }
    return validate_group(table, 0);
}

/// Permutation of {0..k-1} for an element of symmetric_group(k), matching the
/// indexing used there.
inline std::vector<int> symmetric_group_permutation(int k, int index) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    for (int i = 0; i < index; ++i) std::next_permutation(p.begin(), p.end());
    return p;
}

inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    long long order = static_cast<long long>(g.n) * h.n;
    if (order > kMaxGroupOrder)
        throw ValidationError("direct_product: order " + std::to_string(order) +
                              " exceeds cap " + std::to_string(kMaxGroupOrder));
    const int n = static_cast<int>(order);
    // (a,b) -> a*h.n + b
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a1 = 0; a1 < g.n; ++a1)
        for (int b1 = 0; b1 < h.n; ++b1)
            for (int a2 = 0; a2 < g.n; ++a2)
                for (int b2 = 0; b2 < h.n; ++b2)
                    table[a1 * h.n + b1][a2 * h.n + b2] =
                        g.mul(a1, a2) * h.n + h.mul(b1, b2);
    return validate_group(table, g.identity * h.n + h.identity);
}

}  // namespace xprod
