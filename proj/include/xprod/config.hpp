#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xprod/dynsys.hpp"

namespace xprod {

using Json = nlohmann::ordered_json;

/// Raw, parse-level description of a system; realize() turns it into
/// validated domain objects. Builders are kept verbatim so that
/// parse(serialize(cfg)) == cfg.
struct GroupSpec {
    std::optional<std::string> builder;               // cyclic:n | symmetric:k | product:a*b
    std::optional<std::vector<std::vector<int>>> table;
    bool operator==(const GroupSpec&) const = default;
};

struct AlgebraSpec {
    std::optional<std::string> builder;  // field | matrix_full:m | upper_left:m
    std::vector<Mat> basis;              // used when no builder
    VecNorm norm = VecNorm::L2;

    bool operator==(const AlgebraSpec& o) const {
        if (builder != o.builder || norm != o.norm || basis.size() != o.basis.size())
            return false;
        for (size_t i = 0; i < basis.size(); ++i)
            if (basis[i].rows() != o.basis[i].rows() ||
                basis[i].cols() != o.basis[i].cols() || basis[i] != o.basis[i])
                return false;
        return true;
    }
};

struct ActionSpec {
    bool trivial = true;
    std::vector<Mat> matrices;  // one per group element when not trivial

    bool operator==(const ActionSpec& o) const {
        if (trivial != o.trivial || matrices.size() != o.matrices.size()) return false;
        for (size_t i = 0; i < matrices.size(); ++i)
            if (matrices[i] != o.matrices[i]) return false;
        return true;
    }
};

struct RepSpec {
    std::string name;
    VecNorm norm = VecNorm::L2;
    std::vector<Mat> pi;
    std::vector<Mat> u;

    bool operator==(const RepSpec& o) const {
        if (name != o.name || norm != o.norm || pi.size() != o.pi.size() ||
            u.size() != o.u.size())
            return false;
        for (size_t i = 0; i < pi.size(); ++i)
            if (pi[i] != o.pi[i]) return false;
        for (size_t i = 0; i < u.size(); ++i)
            if (u[i] != o.u[i]) return false;
        return true;
    }
};

struct SystemConfig {
    GroupSpec group;
    AlgebraSpec algebra;
    ActionSpec action;
    std::vector<RepSpec> representations;
    double tolerance = kDefaultTol;
    uint64_t seed = 0;
    int samples = 100;

    bool operator==(const SystemConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
    throw ParseError("config: " + path + ": " + what);
}

inline void require_keys(const Json& j, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) parse_fail(path, "unknown key '" + it.key() + "'");
    }
}

inline Complex parse_scalar(const Json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    parse_fail(path, "expected a real number or [re, im]");
}

inline Mat parse_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array of rows");
    const size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        parse_fail(path + "[0]", "expected a nonempty row");
    const size_t cols = j[0].size();
    Mat m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        std::string rp = path + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != cols)
            parse_fail(rp, "row length mismatch (expected " + std::to_string(cols) + ")");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_scalar(row[c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

inline std::vector<Mat> parse_matrix_list(const Json& j, const std::string& path) {
    if (!j.is_array()) parse_fail(path, "expected an array of matrices");
    std::vector<Mat> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_matrix(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline VecNorm parse_norm(const Json& j, const std::string& path) {
    if (!j.is_string()) parse_fail(path, "expected 'l1', 'l2' or 'linf'");
    if (auto k = parse_vec_norm(j.get<std::string>())) return *k;
    parse_fail(path, "unknown norm '" + j.get<std::string>() + "'");
}

inline Json scalar_json(const Complex& c) {
    if (c.imag() == 0.0) return Json(c.real());
    return Json::array({c.real(), c.imag()});
}

inline Json matrix_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline SystemConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) detail::parse_fail("$", "top level must be an object");
    detail::require_keys(root, "$",
                         {"group", "algebra", "action", "representations", "tolerance",
                          "seed", "samples"});
    SystemConfig cfg;

    if (!root.contains("group")) detail::parse_fail("$", "missing 'group'");
    {
        const Json& g = root["group"];
        if (g.is_string()) {
            cfg.group.builder = g.get<std::string>();
        } else if (g.is_object()) {
            detail::require_keys(g, "group", {"builder", "table"});
            if (g.contains("builder") == g.contains("table"))
                detail::parse_fail("group", "need exactly one of 'builder' or 'table'");
            if (g.contains("builder")) {
                if (!g["builder"].is_string())
                    detail::parse_fail("group.builder", "expected a string");
                cfg.group.builder = g["builder"].get<std::string>();
            } else {
                const Json& t = g["table"];
                if (!t.is_array()) detail::parse_fail("group.table", "expected an array");
                std::vector<std::vector<int>> table;
                for (size_t r = 0; r < t.size(); ++r) {
                    if (!t[r].is_array())
                        detail::parse_fail("group.table[" + std::to_string(r) + "]",
                                           "expected a row");
                    std::vector<int> row;
                    for (const Json& v : t[r]) {
                        if (!v.is_number_integer())
                            detail::parse_fail("group.table[" + std::to_string(r) + "]",
                                               "entries must be integers");
                        row.push_back(v.get<int>());
                    }
                    table.push_back(std::move(row));
                }
                cfg.group.table = std::move(table);
            }
        } else {
            detail::parse_fail("group", "expected a builder string or an object");
        }
    }

    if (!root.contains("algebra")) detail::parse_fail("$", "missing 'algebra'");
    {
        const Json& a = root["algebra"];
        if (a.is_string()) {
            cfg.algebra.builder = a.get<std::string>();
        } else if (a.is_object()) {
            detail::require_keys(a, "algebra", {"builder", "basis", "norm"});
            if (a.contains("builder") == a.contains("basis"))
                detail::parse_fail("algebra", "need exactly one of 'builder' or 'basis'");
            if (a.contains("builder")) {
                if (!a["builder"].is_string())
                    detail::parse_fail("algebra.builder", "expected a string");
                cfg.algebra.builder = a["builder"].get<std::string>();
            } else {
                cfg.algebra.basis = detail::parse_matrix_list(a["basis"], "algebra.basis");
            }
            if (a.contains("norm")) cfg.algebra.norm = detail::parse_norm(a["norm"], "algebra.norm");
        } else {
            detail::parse_fail("algebra", "expected a builder string or an object");
        }
    }

    if (root.contains("action")) {
        const Json& act = root["action"];
        if (act.is_string()) {
            if (act.get<std::string>() != "trivial")
                detail::parse_fail("action", "only the string 'trivial' is recognized");
            cfg.action.trivial = true;
        } else if (act.is_array()) {
            cfg.action.trivial = false;
            cfg.action.matrices = detail::parse_matrix_list(act, "action");
        } else {
            detail::parse_fail("action", "expected 'trivial' or an array of matrices");
        }
    }

    if (!root.contains("representations"))
        detail::parse_fail("$", "missing 'representations'");
    {
        const Json& reps = root["representations"];
        if (!reps.is_array() || reps.empty())
            detail::parse_fail("representations", "expected a nonempty array");
        for (size_t i = 0; i < reps.size(); ++i) {
            std::string path = "representations[" + std::to_string(i) + "]";
            const Json& r = reps[i];
            if (!r.is_object()) detail::parse_fail(path, "expected an object");
            detail::require_keys(r, path, {"name", "norm", "pi", "u"});
            RepSpec spec;
            if (r.contains("name")) {
                if (!r["name"].is_string()) detail::parse_fail(path + ".name", "expected a string");
                spec.name = r["name"].get<std::string>();
            }
            if (r.contains("norm")) spec.norm = detail::parse_norm(r["norm"], path + ".norm");
            if (!r.contains("pi")) detail::parse_fail(path, "missing 'pi'");
            if (!r.contains("u")) detail::parse_fail(path, "missing 'u'");
            spec.pi = detail::parse_matrix_list(r["pi"], path + ".pi");
            spec.u = detail::parse_matrix_list(r["u"], path + ".u");
            cfg.representations.push_back(std::move(spec));
        }
    }

    if (root.contains("tolerance")) {
        if (!root["tolerance"].is_number() || root["tolerance"].get<double>() <= 0)
            detail::parse_fail("tolerance", "expected a positive number");
        cfg.tolerance = root["tolerance"].get<double>();
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned())
            detail::parse_fail("seed", "expected a nonnegative integer");
        cfg.seed = root["seed"].get<uint64_t>();
    }
    if (root.contains("samples")) {
        if (!root["samples"].is_number_integer() || root["samples"].get<int>() < 1)
            detail::parse_fail("samples", "expected a positive integer");
        cfg.samples = root["samples"].get<int>();
    }
    return cfg;
}

inline std::string serialize_config(const SystemConfig& cfg) {
    Json root;
    if (cfg.group.builder) {
        root["group"] = Json{{"builder", *cfg.group.builder}};
    } else {
        root["group"] = Json{{"table", *cfg.group.table}};
    }
    Json alg;
    if (cfg.algebra.builder) {
        alg["builder"] = *cfg.algebra.builder;
    } else {
        Json basis = Json::array();
        for (const Mat& b : cfg.algebra.basis) basis.push_back(detail::matrix_json(b));
        alg["basis"] = std::move(basis);
    }
    alg["norm"] = to_string(cfg.algebra.norm);
    root["algebra"] = std::move(alg);
    if (cfg.action.trivial) {
        root["action"] = "trivial";
    } else {
        Json mats = Json::array();
        for (const Mat& m : cfg.action.matrices) mats.push_back(detail::matrix_json(m));
        root["action"] = std::move(mats);
    }
    Json reps = Json::array();
    for (const RepSpec& r : cfg.representations) {
        Json jr;
        jr["name"] = r.name;
        jr["norm"] = to_string(r.norm);
        Json pis = Json::array(), us = Json::array();
        for (const Mat& m : r.pi) pis.push_back(detail::matrix_json(m));
        for (const Mat& m : r.u) us.push_back(detail::matrix_json(m));
        jr["pi"] = std::move(pis);
        jr["u"] = std::move(us);
        reps.push_back(std::move(jr));
    }
    root["representations"] = std::move(reps);
    root["tolerance"] = cfg.tolerance;
    root["seed"] = cfg.seed;
    root["samples"] = cfg.samples;
    return root.dump(2) + "\n";
}

namespace detail {

inline FiniteGroup realize_group_builder(const std::string& spec) {
    if (spec.rfind("cyclic:", 0) == 0) return cyclic_group(std::stoi(spec.substr(7)));
    if (spec.rfind("symmetric:", 0) == 0) return symmetric_group(std::stoi(spec.substr(10)));
    if (spec.rfind("product:", 0) == 0) {
        std::string rest = spec.substr(8);
        size_t star = rest.find('*');
        if (star == std::string::npos)
            throw ValidationError("group builder: product needs two factors: " + spec);
        return direct_product(realize_group_builder(rest.substr(0, star)),
                              realize_group_builder(rest.substr(star + 1)));
    }
    throw ValidationError("group builder: unknown spec '" + spec + "'");
}

inline NormedAlgebra realize_algebra(const AlgebraSpec& spec, double tol) {
    if (spec.builder) {
        const std::string& b = *spec.builder;
        if (b == "field") return field_algebra(spec.norm, tol);
        if (b.rfind("matrix_full:", 0) == 0)
            return matrix_full_algebra(std::stoi(b.substr(12)), spec.norm, tol);
        if (b.rfind("upper_left:", 0) == 0)
            return upper_left_algebra(std::stoi(b.substr(11)), spec.norm, tol);
        throw ValidationError("algebra builder: unknown spec '" + b + "'");
    }
    return build_algebra(spec.basis, spec.norm, tol);
}

}  // namespace detail

struct RealizedSystem {
    DynamicalSystem system;
    RepClass reps;
};

/// Turns a parsed config into validated domain objects. Throws
/// ValidationError (with the offending element named) on any axiom failure.
inline RealizedSystem realize(const SystemConfig& cfg) {
    FiniteGroup group = cfg.group.builder ? detail::realize_group_builder(*cfg.group.builder)
                                          : validate_group(*cfg.group.table);
    NormedAlgebra algebra = detail::realize_algebra(cfg.algebra, cfg.tolerance);
    std::vector<Mat> action;
    if (cfg.action.trivial) {
        action.assign(group.n, Mat::Identity(algebra.dim(), algebra.dim()));
    } else {
        if (static_cast<int>(cfg.action.matrices.size()) != group.n)
            throw ValidationError(
                "action: matrix missing for group element " +
                std::to_string(std::min<size_t>(cfg.action.matrices.size(),
                                                static_cast<size_t>(group.n))) +
                " (got " + std::to_string(cfg.action.matrices.size()) + " of " +
                std::to_string(group.n) + ")");
        action = cfg.action.matrices;
    }
    DynamicalSystem sys = build_system(std::move(group), std::move(algebra),
                                       std::move(action), cfg.tolerance);
    std::vector<CovariantRep> members;
    for (size_t i = 0; i < cfg.representations.size(); ++i) {
        const RepSpec& r = cfg.representations[i];
        try {
            members.push_back(make_covariant_rep(sys, r.norm, r.pi, r.u, cfg.tolerance));
        } catch (const Error& e) {
            throw ValidationError("representation " + std::to_string(i) +
                                  (r.name.empty() ? "" : " ('" + r.name + "')") + ": " +
                                  e.what());
        }
    }
    RepClass rc = make_rep_class(sys, std::move(members), cfg.tolerance);
    return RealizedSystem{std::move(sys), std::move(rc)};
}

}  // namespace xprod
