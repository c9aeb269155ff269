#include "psys/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace psys {
namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "psys");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(PSYS_MODELS_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("psys_cli_" + name);
    std::ofstream(path) << text;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Cli, HelpAndUsage) {
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    EXPECT_EQ(cli({"fault-sweep", "--help"}).code, kExitOk);
    EXPECT_EQ(cli({}).code, kExitInvalid);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitInvalid);
    EXPECT_EQ(cli({"run"}).code, kExitInvalid);
}

TEST(Cli, ValidateAcceptsModelsAndRejectsBadOnes) {
    EXPECT_EQ(cli({"validate", model("four_membrane.psys")}).code, kExitOk);
    EXPECT_EQ(cli({"validate", model("xor.net")}).code, kExitOk);
    const auto bad = cli({"validate", model("bad_label.psys")});
    EXPECT_EQ(bad.code, kExitInvalid);
    EXPECT_NE(bad.err.find("error:"), std::string::npos);
    EXPECT_EQ(cli({"validate", "/nonexistent.psys"}).code, kExitInvalid);

    const auto cyclic = temp_file("cycle.net", "input a;\noutput z;\nz = AND(a, y);\ny = NOT(z);\n");
    EXPECT_EQ(cli({"validate", cyclic.string()}).code, kExitInvalid);
}

TEST(Cli, RunIsReproducibleAndCarriesTheSeedHeader) {
    const auto a = cli({"run", model("four_membrane.psys"), "--seed", "5", "--max-attempts", "50"});
    const auto b = cli({"run", model("four_membrane.psys"), "--seed", "5", "--max-attempts", "50"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("# seed=5 command=psys run ", 0), 0U);
    EXPECT_NE(a.out.find("attempt,region,object,count\n"), std::string::npos);
}

TEST(Cli, DisturbanceShowsUpInTheTrace) {
    const auto r = cli({"run", model("four_membrane.psys"), "--max-attempts", "4", "--disturb", "2:3:+a^7"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("\n2,3,a,7\n"), std::string::npos);
    EXPECT_EQ(cli({"run", model("four_membrane.psys"), "--disturb", "2:nowhere:+a"}).code, kExitInvalid);
    EXPECT_EQ(cli({"run", model("four_membrane.psys"), "--disturb", "2:3:a"}).code, kExitInvalid);
}

TEST(Cli, EmittedFileIsWritten) {
    const auto path = std::filesystem::temp_directory_path() / "psys_cli_emitted.csv";
    const auto r = cli({"run", model("gates/cooperative_and.psys"), "--max-attempts", "200", "--emitted", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto text = slurp(path);
    EXPECT_NE(text.find("attempt,emitted_object\n"), std::string::npos);
}

TEST(Cli, CompileOutputLoadsBack) {
    const auto path = std::filesystem::temp_directory_path() / "psys_cli_xor.psys";
    ASSERT_EQ(cli({"compile", model("xor.net"), "--backend", "network", "-o", path.string()}).code, kExitOk);
    const auto text = slurp(path);
    EXPECT_NE(text.find("# input a: a_0/a_1"), std::string::npos);
    EXPECT_EQ(cli({"validate", path.string()}).code, kExitOk);
    EXPECT_EQ(cli({"compile", model("xor.net"), "--backend", "tree"}).code, kExitInvalid);
    EXPECT_EQ(cli({"compile", model("xor.net"), "--redundancy", "3"}).code, kExitInvalid);
}

TEST(Cli, TruthTableExitCodes) {
    const auto ok = cli({"truth-table", model("tree3.net"), "--seeds", "10"});
    EXPECT_EQ(ok.code, kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("assignment,expected,observed,pass,attempts\n"), std::string::npos);
    EXPECT_EQ(cli({"truth-table", model("tree3.net"), "--seeds", "2", "--budget", "3"}).code, kExitTimeout);
    const auto redundant =
        cli({"truth-table", model("xor.net"), "--backend", "network", "--redundancy", "2,3", "--seeds", "5"});
    EXPECT_EQ(redundant.code, kExitOk) << redundant.err;
}

TEST(Cli, FaultSweepRowsPerCell) {
    const auto r = cli({"fault-sweep", "--gate", "NOT", "--h", "1,3", "--loss-rates", "0,0.1", "--seeds", "7"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        rows += (!line.empty() && line[0] != '#' && line[0] != 'h') ? 1 : 0;
    }
    EXPECT_EQ(rows, 2U * 2U * 7U);
    EXPECT_EQ(cli({"fault-sweep", "--loss-rates", "1.5"}).code, kExitInvalid);
    EXPECT_EQ(cli({"fault-sweep", "--gate", "XOR"}).code, kExitInvalid);
}

TEST(Cli, FabricRunReportsPartitions) {
    const auto ok = cli({"fabric-run", "--topology", "cycle", "--nodes", "5", "--seeds", "3"});
    ASSERT_EQ(ok.code, kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("nodes,edges,p_move,failures,correct,attempts_to_output\n"), std::string::npos);
    EXPECT_NE(ok.err.find("12/12 correct"), std::string::npos);

    const auto cut = cli({"fabric-run", "--topology", "cycle", "--nodes", "6", "--fail", "0:0", "--fail", "0:3",
                          "--seeds", "1", "--inputs", "11", "--budget", "1000"});
    EXPECT_EQ(cut.code, kExitOk);
    EXPECT_NE(cut.err.find("warning:"), std::string::npos);
    EXPECT_EQ(cli({"fabric-run", "--inputs", "12"}).code, kExitInvalid);
}

}  // namespace
}  // namespace psys
