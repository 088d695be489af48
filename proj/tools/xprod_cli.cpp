// Command-line front end: parse a system config, run construction and
// verification suites, emit human tables or machine-readable reports.
//
// Exit codes: 0 all verdicts pass, 2 config parse failure, 3 validation
// failure, 4 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "xprod/report.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw xprod::ParseError("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossed products (A x G)^R for finite Banach algebra dynamical "
                 "systems: construction, representation correspondence, and "
                 "verification suites"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "human";
    std::string out_path;
    xprod::CliOptions opt;
    double tol_flag = 0;
    uint64_t seed_flag = 0;
    int samples_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "config file (JSON), or '-' for stdin")
            ->required();
        cmd->add_option("--tol", tol_flag, "override the config tolerance");
        cmd->add_option("--seed", seed_flag, "override the config seed")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--samples", samples_flag, "override the config sample count");
        cmd->add_flag("--no-timestamp", opt.no_timestamp,
                      "omit the timestamp field (byte-identical reruns)");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"human", "machine"}));
        cmd->add_option("--out", out_path, "also write the report to this file");
    };

    CLI::App* validate = app.add_subcommand("validate", "axiom report for the system");
    CLI::App* build = app.add_subcommand("build", "construct the crossed product");
    CLI::App* correspond =
        app.add_subcommand("correspond", "round trips, R-continuity, separation");
    CLI::App* cstar = app.add_subcommand("cstar", "C*-identity and involutive transfer");
    CLI::App* report = app.add_subcommand("report", "consolidated report");
    for (CLI::App* cmd : {validate, build, correspond, cstar, report}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text = read_input(config_path);
        xprod::SystemConfig cfg = xprod::parse_config(text);
        if (tol_flag > 0) opt.tol = tol_flag;
        if (seed_given) opt.seed = seed_flag;
        if (samples_flag > 0) opt.samples = samples_flag;

        xprod::CommandResult res;
        if (validate->parsed()) res = xprod::cmd_validate(cfg, opt);
        else if (build->parsed()) res = xprod::cmd_build(cfg, opt);
        else if (correspond->parsed()) res = xprod::cmd_correspond(cfg, opt);
        else if (cstar->parsed()) res = xprod::cmd_cstar(cfg, opt);
        else res = xprod::cmd_report(cfg, opt);

        std::string rendered = format == "machine" ? res.doc.dump(2) + "\n"
                                                   : xprod::render_human(res.doc);
        std::cout << rendered;
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write '" << out_path << "'\n";
                return 1;
            }
            out << rendered;
        }
        return res.pass ? 0 : 4;
    } catch (const xprod::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const xprod::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const xprod::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const xprod::Error& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
