#include "xprod/config.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "xprod/report.hpp"

using namespace xprod;

namespace {

std::string minimal_config = R"({
  "group": {"builder": "cyclic:2"},
  "algebra": {"builder": "field", "norm": "l2"},
  "action": "trivial",
  "representations": [
    {"name": "trivial", "norm": "l2", "pi": [[[1]]], "u": [[[1]], [[1]]]}
  ]
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string config_path(const std::string& name) {
    return std::string(XPROD_CONFIG_DIR) + "/" + name;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(XPROD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, MinimalConfigParsesAndRealizes) {
    SystemConfig cfg = parse_config(minimal_config);
    EXPECT_EQ(cfg.group.builder, "cyclic:2");
    EXPECT_EQ(cfg.tolerance, kDefaultTol);
    RealizedSystem rs = realize(cfg);
    EXPECT_EQ(rs.system.group.n, 2);
    EXPECT_EQ(rs.system.algebra.dim(), 1);
    EXPECT_EQ(rs.reps.reps.size(), 1u);
}

TEST(Config, MissingActionMatrixNamesTheGroupElement) {
    std::string text = R"({
      "group": {"builder": "cyclic:2"},
      "algebra": {"builder": "field"},
      "action": [[[1]]],
      "representations": [
        {"norm": "l2", "pi": [[[1]]], "u": [[[1]], [[1]]]}
      ]
    })";
    SystemConfig cfg = parse_config(text);
    try {
        realize(cfg);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("group element 1"), std::string::npos)
            << e.what();
    }
}

TEST(Config, UnknownKeysAreRejectedWithPath) {
    try {
        parse_config(R"({"group": "cyclic:2", "algebra": "field",
                         "representations": [], "extra": 1})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("extra"), std::string::npos) << e.what();
    }
    try {
        parse_config(R"({"group": "cyclic:2", "algebra": "field",
                         "representations": [{"pi": [[[1]]], "u": [[[1]], [[1]]],
                                              "oops": 0}]})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("representations[0]"), std::string::npos) << msg;
        EXPECT_NE(msg.find("oops"), std::string::npos) << msg;
    }
}

TEST(Config, MalformedScalarsAndNormsAreRejected) {
    EXPECT_THROW(parse_config("not json at all"), ParseError);
    EXPECT_THROW(parse_config(R"({"group": "cyclic:2", "algebra": "field",
        "representations": [{"norm": "l3", "pi": [[[1]]], "u": [[[1]], [[1]]]}]})"),
                 ParseError);
    EXPECT_THROW(parse_config(R"({"group": "cyclic:2", "algebra": "field",
        "representations": [{"pi": [[["x"]]], "u": [[[1]], [[1]]]}]})"),
                 ParseError);
}

TEST(Config, ComplexEntriesParseAsPairs) {
    std::string text = R"({
      "group": {"builder": "cyclic:4"},
      "algebra": "field",
      "action": "trivial",
      "representations": [
        {"norm": "l2", "pi": [[[1]]],
         "u": [[[1]], [[[0, 1]]], [[-1]], [[[0, -1]]]]}
      ]
    })";
    SystemConfig cfg = parse_config(text);
    RealizedSystem rs = realize(cfg);  // the i-character of Z/4
    EXPECT_NEAR(std::abs(rs.reps.reps[0].u[1](0, 0) - Complex(0, 1)), 0.0, 1e-15);
}

TEST(Config, RoundTripThroughSerializer) {
    for (const char* name : {"z2_two_characters.json", "z2_trivial_only.json",
                             "cstar_s3.json", "upper_left_z2.json",
                             "z6_characters.json"}) {
        SystemConfig cfg = parse_config(slurp(config_path(name)));
        SystemConfig back = parse_config(serialize_config(cfg));
        EXPECT_TRUE(back == cfg) << name;
        EXPECT_EQ(serialize_config(back), serialize_config(cfg)) << name;
    }
    // explicit table + basis form
    SystemConfig cfg = parse_config(R"({
      "group": {"table": [[0, 1], [1, 0]]},
      "algebra": {"basis": [[[1, 0], [0, 0]], [[0, 1], [0, 0]]], "norm": "linf"},
      "action": [[[1, 0], [0, 1]], [[1, 0], [0, -1]]],
      "representations": [
        {"name": "p", "norm": "l1", "pi": [[[1]], [[0]]], "u": [[[1]], [[1]]]}
      ],
      "tolerance": 1e-8,
      "seed": 7,
      "samples": 42
    })");
    SystemConfig back = parse_config(serialize_config(cfg));
    EXPECT_TRUE(back == cfg);
}

TEST(Config, BundledConfigsRealizeToExpectedObjects) {
    {
        RealizedSystem rs = realize(parse_config(slurp(config_path("cstar_s3.json"))));
        CrossedProduct cp = build_crossed_product(rs.system, rs.reps);
        EXPECT_EQ(cp.dim(), 6);
        EXPECT_EQ(cp.kernel_dim(), 0);
        EXPECT_TRUE(cp.involutive);
    }
    {
        RealizedSystem rs = realize(parse_config(slurp(config_path("z2_trivial_only.json"))));
        CrossedProduct cp = build_crossed_product(rs.system, rs.reps);
        EXPECT_EQ(cp.dim(), 1);
        EXPECT_EQ(cp.kernel_dim(), 1);
    }
    {
        RealizedSystem rs = realize(parse_config(slurp(config_path("upper_left_z2.json"))));
        CrossedProduct cp = build_crossed_product(rs.system, rs.reps);
        EXPECT_EQ(cp.dim(), 2);
        EXPECT_FALSE(cp.involutive);
        EXPECT_TRUE(cp.left_identity.has_value());
    }
}

TEST(Commands, ReportsCarryVerdictsAndNumbers) {
    SystemConfig cfg = parse_config(slurp(config_path("z2_two_characters.json")));
    CliOptions opt;
    opt.no_timestamp = true;

    CommandResult v = cmd_validate(cfg, opt);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.doc["system"]["group_order"], 2);

    CommandResult b = cmd_build(cfg, opt);
    EXPECT_TRUE(b.pass);
    EXPECT_EQ(b.doc["crossed_product"]["quotient_dim"], 2);
    EXPECT_EQ(b.doc["crossed_product"]["kernel_dim"], 0);

    CommandResult c = cmd_correspond(cfg, opt);
    EXPECT_TRUE(c.pass);
    EXPECT_TRUE(c.doc["separation"]["full_rank"].get<bool>());

    CommandResult s = cmd_cstar(cfg, opt);
    EXPECT_TRUE(s.pass);
    EXPECT_LE(s.doc["cstar_identity"]["max_rel_deviation"].get<double>(), 1e-7);

    CommandResult r = cmd_report(cfg, opt);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.doc["centralizers"]["left_dim"], 2);

    // every machine number appears in the human rendering
    std::string human = render_human(r.doc);
    EXPECT_NE(human.find("quotient_dim = 2"), std::string::npos);
    EXPECT_NE(human.find("empirical_c1"), std::string::npos);
}

TEST(Commands, CstarFailsOnNonInvolutiveData) {
    SystemConfig cfg = parse_config(slurp(config_path("upper_left_z2.json")));
    CliOptions opt;
    opt.no_timestamp = true;
    CommandResult s = cmd_cstar(cfg, opt);
    EXPECT_FALSE(s.pass);
}

TEST(Cli, ExitCodesDistinguishFailureKinds) {
    EXPECT_EQ(run_cli("build " + config_path("z2_two_characters.json")), 0);
    EXPECT_EQ(run_cli("report " + config_path("cstar_s3.json")), 0);

    std::string bad_json = "/tmp/xprod_bad.json";
    {
        std::ofstream out(bad_json);
        out << "{ definitely not json";
    }
    EXPECT_EQ(run_cli("build " + bad_json), 2);

    std::string bad_action = "/tmp/xprod_bad_action.json";
    {
        std::ofstream out(bad_action);
        out << R"({"group": "cyclic:2", "algebra": "field",
                   "action": [[[1]]],
                   "representations": [{"pi": [[[1]]], "u": [[[1]], [[1]]]}]})";
    }
    EXPECT_EQ(run_cli("validate " + bad_action), 3);

    // parses and validates but is not involutive: cstar verdict fails
    EXPECT_EQ(run_cli("cstar " + config_path("upper_left_z2.json")), 4);
}

TEST(Cli, MachineReportsAreByteIdenticalWithoutTimestamp) {
    std::string out1 = "/tmp/xprod_rep1.json", out2 = "/tmp/xprod_rep2.json";
    std::string flags = " --no-timestamp --format machine --samples 20 --seed 5 --out ";
    ASSERT_EQ(run_cli("report " + config_path("z2_two_characters.json") + flags + out1), 0);
    ASSERT_EQ(run_cli("report " + config_path("z2_two_characters.json") + flags + out2), 0);
    std::string a = slurp(out1), b = slurp(out2);
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("\"seed\": 5"), std::string::npos);
    EXPECT_NE(a.find("\"samples\": 20"), std::string::npos);
}
