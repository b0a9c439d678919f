#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(DDGATE_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ddgate_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("pulse-optimize --shape pie:x"), 2);
    EXPECT_EQ(run("pulse-optimize --shape pi/2:q"), 2);
    EXPECT_EQ(run("zeno --modes XY"), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, PatternSearchWritesAVerifiableFixture) {
    const fs::path d = scratch("patterns");
    EXPECT_EQ(run("-o " + d.string() + " pattern-search"), 0);
    const fs::path f = d / "patterns.txt";
    ASSERT_TRUE(fs::exists(f));
    EXPECT_NE(slurp(f).find("ok   (i) balanced"), std::string::npos);
    EXPECT_EQ(run("pattern-search --verify " + f.string()), 0);

    std::string text = slurp(f);
    const auto pos = text.find("\nB ");
    text.replace(pos + 3, 8, "++++----");
    const fs::path g = d / "broken.txt";
    std::ofstream(g) << text;
    EXPECT_EQ(run("pattern-search --verify " + g.string()), 1);
    EXPECT_EQ(run("-o " + d.string() + " pattern-search --slots 4"), 0);
}

TEST(Cli, NoiselessZenoRunHasUnitFidelityAndIsReproducible) {
    const fs::path d = scratch("zeno");
    const std::string args = " zeno --modes WM --cycles 1 --sigma 0 --pulses hard --realizations 2";
    ASSERT_EQ(run("-o " + d.string() + args), 0);
    const std::string first = slurp(d / "zeno_summary.csv");
    ASSERT_EQ(run("-o " + d.string() + args), 0);
    EXPECT_EQ(first, slurp(d / "zeno_summary.csv"));

    std::istringstream in(first);
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
        ASSERT_EQ(cols.size(), 8u);
        EXPECT_NEAR(std::stod(cols[5]), 0.0, 1e-8);
        EXPECT_NEAR(std::stod(cols[7]), 1.0, 1e-8);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    EXPECT_NE(first.find("# seed = 1"), std::string::npos);
}

TEST(Cli, OutputDirectoryComesFromTheEnvironment) {
    const fs::path d = scratch("env");
    const std::string cmd = "DDGATE_OUTPUT_DIR=" + d.string() + " " + DDGATE_CLI + " pattern-search > /dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(d / "patterns.txt"));
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsOverrideIt) {
    const fs::path d = scratch("config");
    std::ofstream(d / "run.ini") << "[zeno]\nmodes = NM\ncycles = 1\nsigma = 0\npulses = hard\nrealizations = 1\n";
    ASSERT_EQ(run("-o " + d.string() + " --config " + (d / "run.ini").string() + " zeno --modes WM"), 0);
    const std::string s = slurp(d / "zeno_summary.csv");
    EXPECT_NE(s.find("\nWM,"), std::string::npos);
    EXPECT_EQ(s.find("\nNM,"), std::string::npos);
}

TEST(Cli, HardPulseBenchWritesBothGates) {
    const fs::path d = scratch("bench");
    ASSERT_EQ(run("-o " + d.string() + " gate-bench --pulses hard --points 2 --draws 1"), 0);
    const std::string r = slurp(d / "bench_rotation_hard.csv");
    EXPECT_NE(r.find("delta,mean_infidelity,stderr,slope"), std::string::npos);
    EXPECT_NE(r.find("# m = 5"), std::string::npos);
    EXPECT_TRUE(fs::exists(d / "bench_cnot_hard.csv"));
    EXPECT_EQ(run("-o " + d.string() + " gate-bench --gates toffoli --pulses hard"), 2);
}
