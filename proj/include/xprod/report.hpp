#pragma once

#include <ctime>
#include <sstream>
#include <string>
#include <vector>

#include "xprod/centralizers.hpp"
#include "xprod/config.hpp"
#include "xprod/correspondence.hpp"

namespace xprod {

struct CliOptions {
    std::optional<double> tol;
    std::optional<uint64_t> seed;
    std::optional<int> samples;
    bool no_timestamp = false;
};

struct CommandResult {
    Json doc;
    bool pass = true;
};

namespace detail {

inline SystemConfig apply_overrides(SystemConfig cfg, const CliOptions& opt) {
    if (opt.tol) cfg.tolerance = *opt.tol;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.samples) cfg.samples = *opt.samples;
    return cfg;
}

inline Json doc_header(const char* command, const SystemConfig& cfg,
                       const CliOptions& opt) {
    Json doc;
    doc["command"] = command;
    if (!opt.no_timestamp) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc["timestamp"] = buf;
    }
    doc["tolerance"] = cfg.tolerance;
    doc["seed"] = cfg.seed;
    doc["samples"] = cfg.samples;
    return doc;
}

inline Json vec_json(const Vec& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_json(v(i)));
    return out;
}

inline Json system_summary(const RealizedSystem& rs) {
    Json sys;
    sys["group_order"] = rs.system.group.n;
    sys["group_identity"] = rs.system.group.identity;
    sys["algebra_dim"] = rs.system.algebra.dim();
    sys["ambient_dim"] = rs.system.algebra.ambient_dim;
    sys["algebra_norm"] = to_string(rs.system.algebra.norm_kind);
    sys["system_involutive"] = rs.system.involutive;
    sys["class_involutive"] = rs.reps.involutive;
    sys["class_size"] = rs.reps.reps.size();
    sys["nu"] = rs.reps.nu;
    return sys;
}

}  // namespace detail

/// Axiom report: group, algebra, action and per-representation residuals.
inline CommandResult cmd_validate(const SystemConfig& raw, const CliOptions& opt) {
    SystemConfig cfg = detail::apply_overrides(raw, opt);
    RealizedSystem rs = realize(cfg);
    CommandResult out;
    out.doc = detail::doc_header("validate", cfg, opt);
    out.doc["system"] = detail::system_summary(rs);

    Json alg;
    std::optional<Vec> lu = find_left_identity(rs.system.algebra);
    std::optional<Vec> ru = find_right_identity(rs.system.algebra);
    alg["left_identity_exists"] = lu.has_value();
    if (lu) alg["left_identity_norm"] = rs.system.algebra.norm(*lu);
    alg["right_identity_exists"] = ru.has_value();
    if (ru) alg["right_identity_norm"] = rs.system.algebra.norm(*ru);
    alg["involutive"] = rs.system.algebra.involutive;
    out.doc["algebra"] = std::move(alg);

    Json reps = Json::array();
    bool all_ok = true;
    for (size_t i = 0; i < rs.reps.reps.size(); ++i) {
        const CovariantRep& rep = rs.reps.reps[i];
        RepValidationReport v = validate_covariant_rep(rs.system, rep);
        Json jr;
        jr["name"] = cfg.representations.size() > i ? cfg.representations[i].name : "";
        jr["dim"] = rep.dim;
        jr["norm"] = to_string(rep.norm_kind);
        jr["pi_hom_residual"] = v.pi_hom_residual;
        jr["u_hom_residual"] = v.u_hom_residual;
        jr["covariance_residual"] = v.covariance_residual;
        jr["involution_residual"] = v.involution_residual;
        jr["nondegenerate"] = v.nondegenerate;
        jr["involutive"] = v.involutive;
        jr["u_norms"] = v.u_norms;
        all_ok = all_ok && v.valid(cfg.tolerance);
        reps.push_back(std::move(jr));
    }
    out.doc["representations"] = std::move(reps);
    out.doc["pass"] = all_ok;
    out.pass = all_ok;
    return out;
}

/// Crossed-product summary: dimensions, kernel, left identity, basis norms.
inline CommandResult cmd_build(const SystemConfig& raw, const CliOptions& opt) {
    SystemConfig cfg = detail::apply_overrides(raw, opt);
    RealizedSystem rs = realize(cfg);
    CrossedProduct cp = build_crossed_product(rs.system, rs.reps, cfg.tolerance);
    CommandResult out;
    out.doc = detail::doc_header("build", cfg, opt);
    out.doc["system"] = detail::system_summary(rs);

    Json b;
    b["full_dim"] = cp.full_dim();
    b["kernel_dim"] = cp.kernel_dim();
    b["quotient_dim"] = cp.dim();
    b["involutive"] = cp.involutive;
    b["left_identity_exists"] = cp.left_identity.has_value();
    if (cp.left_identity) {
        ApproxIdentityReport air = approximate_identity_report(cp);
        Json ai;
        ai["coords"] = detail::vec_json(*cp.left_identity);
        ai["algebra_identity_norm"] = air.algebra_identity_norm;
        ai["sigma_delta_u"] = air.sigma_delta_u;
        ai["max_pi_u"] = air.max_pi_u;
        ai["match_residual"] = air.match_residual;
        ai["left_action_residual"] = air.left_action_residual;
        ai["n_r"] = air.n_r;
        ai["right_identity_exists"] = air.right_identity_exists;
        if (air.right_identity_exists) ai["sigma_delta_u_right"] = air.sigma_delta_u_right;
        b["approximate_identity"] = std::move(ai);
    }
    std::vector<double> basis_norms;
    for (Eigen::Index j = 0; j < cp.dim(); ++j) basis_norms.push_back(cp.norm(cp.unit(j)));
    b["basis_norms"] = basis_norms;
    out.doc["crossed_product"] = std::move(b);
    out.doc["pass"] = true;
    out.pass = true;
    return out;
}

/// Correspondence report: R-continuity of the members, both round trips,
/// norm consistency and the separation property.
inline CommandResult cmd_correspond(const SystemConfig& raw, const CliOptions& opt) {
    SystemConfig cfg = detail::apply_overrides(raw, opt);
    RealizedSystem rs = realize(cfg);
    CrossedProduct cp = build_crossed_product(rs.system, rs.reps, cfg.tolerance);
    CommandResult out;
    out.doc = detail::doc_header("correspond", cfg, opt);
    out.doc["system"] = detail::system_summary(rs);
    out.doc["quotient_dim"] = cp.dim();

    bool pass = true;
    Json cont = Json::array();
    for (size_t i = 0; i < rs.reps.reps.size(); ++i) {
        RContinuityResult r = is_R_continuous(cp, rs.reps.reps[i]);
        Json jr;
        jr["index"] = i;
        jr["continuous"] = r.continuous;
        jr["max_residual"] = r.max_residual;
        cont.push_back(std::move(jr));
        pass = pass && r.continuous;
    }
    out.doc["r_continuity"] = std::move(cont);

    std::vector<CovariantRep> nondeg_members;
    std::vector<CPRep> ts;
    for (const CovariantRep& rep : rs.reps.reps)
        if (nondegenerate(rep)) {
            nondeg_members.push_back(rep);
            ts.push_back(I_map(cp, rep));
        }
    if (cp.left_identity && cp.dim() > 0) {
        std::vector<Mat> lambda_images;
        for (Eigen::Index j = 0; j < cp.dim(); ++j)
            lambda_images.push_back(lambda_map(cp, cp.unit(j)));
        ts.push_back(make_cp_rep(cp, VecNorm::L2, lambda_images, 1000 * cfg.tolerance));
    }
    Json rt;
    if (cp.left_identity) {
        RoundtripReport r =
            roundtrip_check(cp, nondeg_members, ts, cfg.samples, cfg.seed + 1);
        rt["checked"] = true;
        rt["s_after_i_residual"] = r.s_after_i_residual;
        rt["i_after_s_residual"] = r.i_after_s_residual;
        rt["norm_consistency_residual"] = r.norm_consistency_residual;
        rt["rejected"] = r.rejected;
        bool ok = r.pass(1e-8);
        rt["pass"] = ok;
        pass = pass && ok;
    } else {
        rt["checked"] = false;
        rt["skip_reason"] = "algebra has no left identity";
    }
    out.doc["roundtrip"] = std::move(rt);

    Json sep;
    try {
        bool ok = separation_check(cp);
        sep["checked"] = true;
        sep["full_rank"] = ok;
        pass = pass && ok;
    } catch (const PreconditionError& e) {
        sep["checked"] = false;
        sep["skip_reason"] = e.what();
    }
    out.doc["separation"] = std::move(sep);

    out.doc["pass"] = pass;
    out.pass = pass;
    return out;
}

/// C*-identity and involutive-transfer checks; fails on non-involutive data.
inline CommandResult cmd_cstar(const SystemConfig& raw, const CliOptions& opt) {
    SystemConfig cfg = detail::apply_overrides(raw, opt);
    RealizedSystem rs = realize(cfg);
    CrossedProduct cp = build_crossed_product(rs.system, rs.reps, cfg.tolerance);
    CommandResult out;
    out.doc = detail::doc_header("cstar", cfg, opt);
    out.doc["system"] = detail::system_summary(rs);
    out.doc["involutive"] = cp.involutive;
    if (!cp.involutive) {
        out.doc["pass"] = false;
        out.doc["reason"] = "system or representation class is not involutive";
        out.pass = false;
        return out;
    }

    bool pass = true;
    Rng rng(cfg.seed + 2);
    double worst = 0;
    for (int t = 0; t < cfg.samples; ++t) {
        CcFun f{rng.cgauss_mat(rs.system.group.n, rs.system.algebra.dim())};
        double s = seminorm(rs.reps, f);
        double lhs = seminorm(rs.reps, convolve(rs.system, involute(rs.system, f), f));
        worst = std::max(worst, std::abs(lhs - s * s) / (1.0 + s * s));
    }
    Json ci;
    ci["samples"] = cfg.samples;
    ci["max_rel_deviation"] = worst;
    bool ci_ok = worst <= 1e-7;
    ci["pass"] = ci_ok;
    pass = pass && ci_ok;
    out.doc["cstar_identity"] = std::move(ci);

    Json transfer = Json::array();
    for (size_t i = 0; i < rs.reps.reps.size(); ++i) {
        const CovariantRep& rep = rs.reps.reps[i];
        Json jr;
        jr["index"] = i;
        if (!nondegenerate(rep) || cp.dim() == 0 || !cp.left_identity) {
            jr["skipped"] = true;
            transfer.push_back(std::move(jr));
            continue;
        }
        CPRep t = I_map(cp, rep);
        double star_res = 0;
        for (int trial = 0; trial < 20; ++trial) {
            Vec x = rng.cgauss_vec(cp.dim());
            star_res = std::max(
                star_res, rel_residual(t.apply(cp.star(x)), Mat(t.apply(x).adjoint())));
        }
        jr["image_star_residual"] = star_res;
        CovariantRep back = S_map(cp, t);
        RepValidationReport v = validate_covariant_rep(rs.system, back);
        jr["s_map_involutive"] = v.involutive;
        jr["s_map_involution_residual"] = v.involution_residual;
        bool ok = star_res <= 1e-9 && v.involutive;
        jr["pass"] = ok;
        pass = pass && ok;
        transfer.push_back(std::move(jr));
    }
    out.doc["involutive_transfer"] = std::move(transfer);
    out.doc["pass"] = pass;
    out.pass = pass;
    return out;
}

/// Consolidated machine-readable document: everything the other commands
/// produce plus centralizer dimensions, canonical-map checks and the L1
/// comparison.
inline CommandResult cmd_report(const SystemConfig& raw, const CliOptions& opt) {
    SystemConfig cfg = detail::apply_overrides(raw, opt);
    CommandResult out;
    out.doc = detail::doc_header("report", cfg, opt);
    bool pass = true;

    {
        CommandResult v = cmd_validate(cfg, CliOptions{{}, {}, {}, true});
        v.doc.erase("command");
        v.doc.erase("tolerance");
        v.doc.erase("seed");
        v.doc.erase("samples");
        out.doc["validate"] = std::move(v.doc);
        pass = pass && v.pass;
    }
    RealizedSystem rs = realize(cfg);
    CrossedProduct cp = build_crossed_product(rs.system, rs.reps, cfg.tolerance);
    {
        CommandResult b = cmd_build(cfg, CliOptions{{}, {}, {}, true});
        out.doc["build"] = std::move(b.doc["crossed_product"]);
        pass = pass && b.pass;
    }
    {
        CommandResult c = cmd_correspond(cfg, CliOptions{{}, {}, {}, true});
        Json sub;
        sub["r_continuity"] = std::move(c.doc["r_continuity"]);
        sub["roundtrip"] = std::move(c.doc["roundtrip"]);
        sub["separation"] = std::move(c.doc["separation"]);
        sub["pass"] = c.pass;
        out.doc["correspond"] = std::move(sub);
        pass = pass && c.pass;
    }
    if (cp.involutive) {
        CommandResult c = cmd_cstar(cfg, CliOptions{{}, {}, {}, true});
        Json sub;
        sub["cstar_identity"] = std::move(c.doc["cstar_identity"]);
        sub["involutive_transfer"] = std::move(c.doc["involutive_transfer"]);
        sub["pass"] = c.pass;
        out.doc["cstar"] = std::move(sub);
        pass = pass && c.pass;
    }
    {
        Json cz;
        if (cp.dim() >= 1) {
            CentralizerSpace ml = centralizer_space(cp, CentralizerKind::Left);
            CentralizerSpace mr = centralizer_space(cp, CentralizerKind::Right);
            cz["left_dim"] = ml.dim();
            cz["right_dim"] = mr.dim();
            CovarianceChecksReport cc = covariance_checks(cp);
            Json jc;
            jc["i_membership_residual"] = cc.i_membership_residual;
            jc["j_membership_residual"] = cc.j_membership_residual;
            jc["i_hom_residual"] = cc.i_hom_residual;
            jc["j_antihom_residual"] = cc.j_antihom_residual;
            jc["i_covariance_residual"] = cc.i_covariance_residual;
            jc["j_anticovariance_residual"] = cc.j_anticovariance_residual;
            jc["double_centralizer_residual"] = cc.double_centralizer_residual;
            jc["involutive_checked"] = cc.involutive_checked;
            if (cc.involutive_checked) jc["involutive_residual"] = cc.involutive_residual;
            bool ok = cc.worst() <= 1000 * cfg.tolerance;
            jc["pass"] = ok;
            pass = pass && ok;
            cz["canonical_maps"] = std::move(jc);
        } else {
            cz["skip_reason"] = "quotient dimension is zero";
        }
        out.doc["centralizers"] = std::move(cz);
    }
    {
        L1Report l1 = l1_compare(cp, cfg.samples, cfg.seed + 3);
        Json jl;
        jl["samples"] = l1.samples;
        jl["c_factor"] = l1.c_factor;
        jl["upper_bound_holds"] = l1.upper_bound_holds;
        jl["worst_upper_gap"] = l1.worst_upper_gap;
        jl["empirical_c1"] = l1.empirical_c1;
        jl["c1_bounded"] = l1.c1_bounded;
        jl["kernel_dim"] = l1.kernel_dim;
        pass = pass && l1.upper_bound_holds;
        out.doc["l1_comparison"] = std::move(jl);
    }
    out.doc["pass"] = pass;
    out.pass = pass;
    return out;
}

/// Human-readable rendering of a report document. Every number shown here is
/// taken verbatim from the machine report.
inline void render_human(const Json& j, std::ostream& os, int indent = 0) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            os << pad << it.key() << ":\n";
            render_human(v, os, indent + 1);
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            os << pad << it.key() << ":\n";
            for (size_t i = 0; i < v.size(); ++i) {
                os << pad << "  [" << i << "]\n";
                render_human(v[i], os, indent + 2);
            }
        } else {
            os << pad << it.key() << " = " << v.dump() << "\n";
        }
    }
}

inline std::string render_human(const Json& j) {
    std::ostringstream os;
    render_human(j, os, 0);
    return os.str();
}

}  // namespace xprod
