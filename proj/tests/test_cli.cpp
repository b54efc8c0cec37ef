#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(SMOOTHSWITCH_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split(const std::string& s, char d)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, d)) out.push_back(cur);
    return out;
}

// Header + rows of a CSV, ignoring `#` lines.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text)
{
    std::vector<std::string> lines;
    for (const auto& l : split(text, '\n')) {
        if (!l.empty() && l[0] != '#') lines.push_back(l);
    }
    std::vector<std::map<std::string, std::string>> rows;
    if (lines.empty()) return rows;
    const auto head = split(lines[0], ',');
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = split(lines[i], ',');
        f.resize(head.size());
        std::map<std::string, std::string> row;
        for (std::size_t j = 0; j < head.size(); ++j) row[head[j]] = f[j];
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kFriction = "--preset cubic-friction --mu 3 --eps 0.01 --alpha 1 --r 0.1";

}  // namespace

TEST(Cli, Classify)
{
    auto r = run("classify --a-minus 1 --a-plus -1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "attracting-sliding\n");
    r = run("classify --a-minus 1 --a-plus 1");
    EXPECT_EQ(r.out, "crossing\n");
    EXPECT_EQ(run("classify --a-minus x --a-plus 1").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, Version)
{
    const auto r = run("version");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("smoothswitch ", 0), 0u);
}

TEST(Cli, EscapeRows)
{
    auto r = run("escape " + kFriction + " --z0 -1 --kappa 0.05");
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["S"], "0");
    EXPECT_EQ(rows[0]["region"], "crossing");

    r = run("escape " + kFriction + " --z0 -0.5 --kappa 0.05");
    rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["S"], "1");

    EXPECT_EQ(run("escape " + kFriction + " --z0 0.5 --kappa 0.05").code, 3);
}

TEST(Cli, EscapeColumnSelection)
{
    auto rows = parse_csv(run("escape " + kFriction + " --z0 -0.5 --kappa 0.05 --exact-only").out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].count("T_tilde_exact"));
    EXPECT_FALSE(rows[0].count("T_tilde_asym"));
    rows = parse_csv(run("escape " + kFriction + " --z0 -0.5 --kappa 0.05 --asym-only").out);
    EXPECT_FALSE(rows[0].count("T_tilde_exact"));
    EXPECT_TRUE(rows[0].count("T_tilde_asym"));
    EXPECT_EQ(run("escape " + kFriction + " --z0 -0.5 --exact-only --asym-only").code, 2);
}

TEST(Cli, EscapeGenericPolynomial)
{
    const auto r = run("escape --a-minus 2 --a-plus 1 --A-poly 1.5,-0.5 --eps 0.01 --kappa 0.1 --r 0.1");
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    EXPECT_GT(std::stod(rows[0]["T_tilde_exact"]), 0.0);
    // A(±1) must meet a±
    EXPECT_EQ(run("escape --a-minus 2 --a-plus 1 --A-poly 1,1 --eps 0.01 --kappa 0.1 --r 0.1").code, 3);
}

TEST(Cli, Occupancy)
{
    auto r = run("occupancy --a-minus 1 --a-plus -1 --eps 1 --kappa 10 --r 10");
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[0]["regime"], "large-kappa");
    EXPECT_NEAR(std::stod(rows[0]["P_exact"]), 0.02, 0.002);
    EXPECT_EQ(run("occupancy --a-minus 1 --a-plus 1 --eps 0.01 --kappa 0.1 --r 0.1").code, 3);
}

TEST(Cli, MonteCarlo)
{
    const std::string sys = "--a-minus 1 --a-plus 1 --eps 0.01 --kappa 0.1 --r 0.1";
    const auto a = run("mc --mode escape " + sys + " --paths 3000 --seed 4");
    ASSERT_EQ(a.code, 0);
    const auto b = run("mc --mode escape " + sys + " --paths 3000 --seed 4 --threads 3");
    EXPECT_EQ(a.out, b.out);
    auto rows = parse_csv(a.out);
    EXPECT_EQ(rows[0]["within_ci"], "true");
    EXPECT_EQ(run("mc --mode occupancy " + sys + " --paths 10").code, 3);
    EXPECT_EQ(run("mc --mode bogus " + sys).code, 2);
}

TEST(Cli, FrictionScanFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "smoothswitch_cli_test";
    std::filesystem::create_directories(dir);
    const auto f1 = dir / "a.csv", f2 = dir / "b.csv";
    const std::string args = "friction-scan --mu 3 --eps 0.01 --alpha 1 --r 0.1 --kappa 0.01,0.1 --n 40";
    ASSERT_EQ(run(args + " --out " + f1.string()).code, 0);
    ASSERT_EQ(run(args + " --threads 2 --out " + f2.string()).code, 0);
    const auto t1 = slurp(f1);
    EXPECT_EQ(t1, slurp(f2));
    EXPECT_EQ(t1.rfind("# tool: smoothswitch", 0), 0u);
    EXPECT_NE(t1.find("z0,kappa,mu,S,T_exact,T_asym,log10_T_exact,log10_T_asym,well_depth,status"),
              std::string::npos);
    EXPECT_EQ(parse_csv(t1).size(), 80u);
    EXPECT_TRUE(std::filesystem::exists(dir / "a.csv.manifest.json"));
    std::filesystem::remove_all(dir);
}

TEST(Cli, FrictionScanHalfMu)
{
    const auto r = run("friction-scan --mu 0.5 --kappa 0.01,0.1 --z0-min -1.4 --z0-max -0.1 --n 15");
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 30u);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        EXPECT_EQ(rows[i].at("T_asym"), rows[i + 1].at("T_asym"));
    }
}

TEST(Cli, FrictionScanEmpty)
{
    EXPECT_EQ(run("friction-scan --mu 3 --z0-min 0.2 --z0-max 1.5 --n 5").code, 4);
}

TEST(Cli, ConfigFile)
{
    const auto path = std::filesystem::temp_directory_path() / "smoothswitch_cli_test.cfg";
    {
        std::ofstream cfg(path);
        cfg << "# escape settings\npreset = cubic-friction\nmu = 3\neps = 0.01\nalpha = 1\n"
               "r = 0.1\nkappa = 0.05\nz0 = -1\nexact-only = true\n";
    }
    auto rows = parse_csv(run("escape --config " + path.string()).out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["S"], "0");
    EXPECT_FALSE(rows[0].count("T_tilde_asym"));
    // flags override the file
    rows = parse_csv(run("escape --config " + path.string() + " --z0 -0.5").out);
    EXPECT_EQ(rows[0]["S"], "1");
    EXPECT_EQ(run("escape --config /nonexistent/file.cfg").code, 2);
    std::filesystem::remove(path);
}
