#include <gtest/gtest.h>

#include "descriptors.hpp"
#include "report.hpp"

#include <maasslab/whittaker.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace maasslab;
using namespace maasslab::cli;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + MAASSLAB_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    std::string out;
    std::array<char, 4096> buf;
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string demo(const std::string& name) { return std::string(MAASSLAB_DEMOS_DIR) + "/" + name; }

// Minimal CSV splitter for the report (quoted fields may contain commas).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> f(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                f.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                f.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            f.emplace_back();
        } else {
            f.back() += c;
        }
    }
    return f;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; std::getline(in, line); ++i)
        if (i >= 2 && !line.empty()) rows.push_back(split_csv(line));
    return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("maasslab_test_" + name);
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST(Parsing, ComplexNumbers) {
    EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0));
    EXPECT_EQ(parse_complex("-2i"), Complex(0, -2));
    EXPECT_EQ(parse_complex("i"), Complex(0, 1));
    EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
    EXPECT_EQ(parse_complex("0.5+1.25i"), Complex(0.5, 1.25));
    EXPECT_EQ(parse_complex(" 1e-3 - 2e1i "), Complex(1e-3, -20));
    EXPECT_THROW(parse_complex("1+"), ConfigError);
    EXPECT_THROW(parse_complex("abc"), ConfigError);
}

TEST(Parsing, Points) {
    const UHPoint z = parse_point("0.25,1.5");
    EXPECT_EQ(z.x(), 0.25);
    EXPECT_EQ(z.y(), 1.5);
    EXPECT_THROW(parse_point("0.25"), ConfigError);
    EXPECT_THROW(parse_point("0,-1"), ConfigError);
    EXPECT_THROW(parse_point("a,b"), ConfigError);
}

TEST(Report, CsvQuotingAndRowInvariant) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    const ReportRow ok = run_case({"s", "ok", "", 1e-3, [] { return Measurement{1e-4, ""}; }});
    const ReportRow bad = run_case({"s", "bad", "", 1e-3, [] { return Measurement{1e-2, ""}; }});
    const ReportRow nan = run_case({"s", "nan", "", 1e-3, [] { return Measurement{std::nan(""), ""}; }});
    const ReportRow thrown = run_case({"s", "thrown", "", 1e-3, []() -> Measurement { throw std::runtime_error("boom"); }});
    EXPECT_TRUE(ok.pass);
    EXPECT_FALSE(bad.pass);
    EXPECT_FALSE(nan.pass);
    EXPECT_FALSE(thrown.pass);
    EXPECT_TRUE(std::isinf(thrown.residual));
    EXPECT_NE(thrown.note.find("boom"), std::string::npos);
}

TEST(Report, RowsSortedIndependentOfWorkers) {
    std::vector<Case> cases;
    for (int i = 9; i >= 0; --i)
        cases.push_back({i % 2 ? "b" : "a", std::to_string(i), "", 1.0, [i] { return Measurement{0.1 * i, ""}; }});
    const auto one = run_cases(cases, 1), many = run_cases(cases, 4);
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].suite, many[i].suite);
        EXPECT_EQ(one[i].id, many[i].id);
        EXPECT_EQ(one[i].residual, many[i].residual);
        if (i) {
            EXPECT_LE(std::tie(one[i - 1].suite, one[i - 1].id), std::tie(one[i].suite, one[i].id));
        }
    }
}

TEST(Descriptors, DemoMultipliersLoad) {
    EXPECT_EQ(load_multiplier(demo("multiplier_trivial_gamma0_4.json")).label(), "trivial");
    const auto eta = load_multiplier(demo("multiplier_eta_gamma0_2.json"));
    EXPECT_EQ(eta.group(), CongruenceSubgroup::gamma0(2));
    EXPECT_EQ(eta.weight(), Complex(0.5));
    EXPECT_NO_THROW(load_multiplier(demo("multiplier_exponential_gamma0_4.json")));
}

TEST(Descriptors, Rejections) {
    EXPECT_THROW(load_multiplier("/nonexistent/multiplier.json"), ConfigError);
    EXPECT_THROW(load_multiplier(temp_file("bad.json", "{ not json").string()), ConfigError);
    EXPECT_THROW(load_multiplier(temp_file("kind.json", R"({"group":{"kind":"Gamma0","level":2},"kind":"mystery"})").string()),
                 ConfigError);
    EXPECT_THROW(load_multiplier(temp_file("etaw.json", R"({"group":{"kind":"Gamma0","level":2},"kind":"eta","weight":1})").string()),
                 ConfigError);
    // kappa = 0.5 with a zero mode
    EXPECT_THROW(load_expansion(temp_file("zm.json", R"({"kappa":0.5,"nu":0.3,"C_plus":1})").string(), CongruenceSubgroup::full()),
                 ConfigError);
}

TEST(Cli, VerifyAllExitsZero) {
    const auto r = run("verify all --level 2 --tol 1e-8");
    EXPECT_EQ(r.exit_code, 0);
    const auto rows = data_rows(r.out);
    EXPECT_GT(rows.size(), 150u);
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 7u) << row[1];
        const bool pass = row[5] == "true";
        EXPECT_EQ(pass, std::stod(row[3]) <= std::stod(row[4])) << row[1];
        EXPECT_TRUE(pass) << row[0] << "/" << row[1] << " " << row[3] << " > " << row[4];
    }
}

TEST(Cli, HeaderAndTimingColumn) {
    const auto plain = run("verify multiplier --level 2");
    EXPECT_EQ(plain.out.rfind("# maass-lab report v1\nsuite,case,inputs,residual,tolerance,pass,note\n", 0), 0u);
    const auto timed = run("verify multiplier --level 2 --timing");
    EXPECT_NE(timed.out.find("suite,case,inputs,residual,tolerance,pass,note,wall_ms\n"), std::string::npos);
    for (const auto& row : data_rows(timed.out)) EXPECT_EQ(row.size(), 8u);
}

TEST(Cli, MutationFailsExactlyTheBasisRow) {
    const auto r = run("verify operators --mutate wtilde-up-sign");
    EXPECT_EQ(r.exit_code, 1);
    std::vector<std::string> failing;
    for (const auto& row : data_rows(r.out))
        if (row[5] == "false") failing.push_back(row[1]);
    ASSERT_EQ(failing.size(), 1u);
    EXPECT_EQ(failing[0], "basis-Wtilde-npos-up");
    EXPECT_EQ(run("verify operators --mutate no-such-mutation").exit_code, 2);
}

TEST(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("verify all --multiplier /nonexistent/multiplier.json").exit_code, 2);
    EXPECT_EQ(run("verify all --multiplier " + temp_file("broken.json", "[1,2").string()).exit_code, 2);
    EXPECT_EQ(run("verify all --tol 0").exit_code, 2);
    EXPECT_EQ(run("verify all --jobs 0").exit_code, 2);
    EXPECT_EQ(run("verify all --no-such-flag").exit_code, 2);
    EXPECT_EQ(run("verify nonsense").exit_code, 2);
    EXPECT_EQ(run("subgroup info --kind Gamma7").exit_code, 2);
    EXPECT_EQ(run("whittaker eval --y 1").exit_code, 2);
    EXPECT_EQ(run("verify whittaker", "MAASSLAB_SEED=abc").exit_code, 2);
    EXPECT_EQ(run("").exit_code, 2);
}

TEST(Cli, CsvIsDeterministic) {
    const auto a = run("verify vvforms --level 2 --jobs 1");
    const auto b = run("verify vvforms --level 2 --jobs 1");
    const auto c = run("verify vvforms --level 2 --jobs 6");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const auto seeded = run("verify vvforms --level 2 --jobs 1", "MAASSLAB_SEED=42");
    EXPECT_EQ(a.out, seeded.out);
    const auto other = run("verify vvforms --level 2 --jobs 1", "MAASSLAB_SEED=7");
    EXPECT_EQ(other.exit_code, 0);
    EXPECT_NE(a.out, other.out);
}

TEST(Cli, JsonReportMatchesCsv) {
    const auto csv = run("verify multiplier --level 4");
    const auto js = run("verify multiplier --level 4 --format json");
    ASSERT_EQ(js.exit_code, 0);
    const auto doc = json::parse(js.out);
    EXPECT_EQ(doc["format"], "maass-lab report v1");
    const auto rows = data_rows(csv.out);
    ASSERT_EQ(doc["rows"].size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(doc["rows"][i]["case"], rows[i][1]);
        EXPECT_EQ(doc["rows"][i]["pass"], rows[i][5] == "true");
    }
}

TEST(Cli, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "maasslab_test_report.csv";
    std::filesystem::remove(path);
    EXPECT_EQ(run("verify multiplier --level 2 --out " + path.string()).exit_code, 0);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "# maass-lab report v1");
}

TEST(Cli, SubgroupInfo) {
    const auto r = run("subgroup info --level 4");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["index"], 6);
    ASSERT_EQ(j["cusps"].size(), 3u);
    long total = 0;
    for (const auto& c : j["cusps"]) total += c["width"].get<long>();
    EXPECT_EQ(total, 6);
    EXPECT_EQ(j["homomorphisms_to_z"].size(), 2u);
}

TEST(Cli, WhittakerEvalMatchesLibrary) {
    const auto r = run("whittaker eval --k 0.5 --nu 0.25+0.1i --y 3 --normalized");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    const Complex expected = normalized_W({0.5, Complex(0.25, 0.1)}, 3.0).value;
    EXPECT_NEAR(j["value"][0].get<double>(), expected.real(), 1e-15);
    EXPECT_NEAR(j["value"][1].get<double>(), expected.imag(), 1e-15);
}

TEST(Cli, DemoExpansionAgreesWithSeries) {
    const auto e = run("form eval-expansion --spec " + demo("eisenstein_s1.5.json") + " --z 0.13,0.9");
    const auto s = run("form eisenstein --nu 1 --R 400 --z 0.13,0.9");
    ASSERT_EQ(e.exit_code, 0);
    ASSERT_EQ(s.exit_code, 0);
    const auto je = json::parse(e.out), js = json::parse(s.out);
    EXPECT_LE(std::abs(je["value"][0].get<double>() - js["value"][0].get<double>()),
              js["tail_bound"].get<double>() + je["error"].get<double>());
    for (const char* which : {"transformation", "eigen", "growth"})
        EXPECT_EQ(run(std::string("form verify --which ") + which + " --spec " + demo("eisenstein_s1.5.json")).exit_code, 0) << which;
    EXPECT_EQ(run("vv roundtrip --level 2 --spec " + demo("eisenstein_s1.5.json")).exit_code, 0);
}

TEST(Cli, InducedMatrixIsMonomial) {
    const auto r = run("vv induce --level 2 --multiplier " + demo("multiplier_eta_gamma0_2.json") + " --element \"S T^-2 S\" --z 0.1,1.2");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["dimension"], 3);
    for (const auto& row : j["matrix"]) {
        int nonzero = 0;
        for (const auto& e : row) {
            const double m = std::hypot(e[0].get<double>(), e[1].get<double>());
            if (m != 0.0) {
                ++nonzero;
                EXPECT_NEAR(m, 1.0, 1e-12);
            }
        }
        EXPECT_EQ(nonzero, 1);
    }
}
