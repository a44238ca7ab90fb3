#include "ctrlscore/system.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int status = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(CTRLSCORE_CLI_PATH) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buffer;
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    const int raw = pclose(pipe);
    result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return result;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

double parse_node_value(const std::string& records, const std::string& kind, int node) {
    std::istringstream in(records);
    std::string line;
    const std::string needle = "record=score kind=" + kind + " node=" + std::to_string(node) + " ";
    while (std::getline(in, line)) {
        if (line.rfind(needle, 0) == 0) {
            const auto pos = line.find("value=");
            REQUIRE(pos != std::string::npos);
            return std::stod(line.substr(pos + 6));
        }
    }
    FAIL("no record for node " << node << " in:\n" << records);
    return 0.0;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("score on the first builtin network ranks the hub node") {
    // Coarse step keeps this test quick; the full-resolution run lives in the
    // acceptance suite.
    const auto result = run_cli("score --network net1 --kind vcs --dt 0.01 --output records");
    REQUIRE(result.status == 0);
    CHECK(parse_node_value(result.output, "vcs", 7) == doctest::Approx(0.341).epsilon(0.02));
    CHECK(parse_node_value(result.output, "vcs", 5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("gramian bundle round trip is bit-identical with the fused pipeline") {
    const auto bundle = temp_path("cli_net1.gramians");
    const auto direct =
        run_cli("score --network net1 --kind aecs --dt 0.01 --output records");
    REQUIRE(direct.status == 0);

    const auto precompute = run_cli("gramian --network net1 --dt 0.01 --out " + bundle.string());
    REQUIRE(precompute.status == 0);
    const auto from_file =
        run_cli("score --gramian-file " + bundle.string() + " --kind aecs --output records");
    REQUIRE(from_file.status == 0);
    CHECK(from_file.output == direct.output);

    std::filesystem::remove(bundle);
}

TEST_CASE("identical configs give byte-identical records") {
    const std::string args = "score --network net3 --kind vcs --dt 0.01 --output records";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    REQUIRE(first.status == 0);
    CHECK(first.output == second.output);
}

TEST_CASE("datadriven pipeline through trajectory files") {
    const auto traj = temp_path("cli_net1.trajectories");
    const auto generated = run_cli("generate-trajectories --network net1 --count 12 --seed 5 " +
                                   std::string("--dt 0.01 --out ") + traj.string());
    REQUIRE(generated.status == 0);

    const auto datadriven = run_cli("score --trajectories " + traj.string() +
                                    " --kind vcs --output records");
    REQUIRE(datadriven.status == 0);
    const auto model = run_cli("score --network net1 --kind vcs --dt 0.01 --output records");
    REQUIRE(model.status == 0);
    for (int node = 1; node <= 10; ++node) {
        CHECK(parse_node_value(datadriven.output, "vcs", node) ==
              doctest::Approx(parse_node_value(model.output, "vcs", node)).epsilon(0.01).scale(1.0));
    }

    std::filesystem::remove(traj);
}

TEST_CASE("certify reports regular for builtins and rejects zero horizons") {
    const auto regular = run_cli("certify --network net1 --dt 0.01 --output records");
    REQUIRE(regular.status == 0);
    CHECK(regular.output.find("verdict=regular") != std::string::npos);

    const auto degenerate = temp_path("cli_degenerate.json");
    {
        std::ofstream out(degenerate);
        out << R"({"n": 1, "self_loop": 0.0, "directed": true,
                   "snapshots": [{"duration": 0.0, "edges": []}]})";
    }
    const auto rejected = run_cli("certify --network " + degenerate.string());
    CHECK(rejected.status == 2);
    CHECK(rejected.output.find("zero horizon") != std::string::npos);
    std::filesystem::remove(degenerate);

    const auto single = temp_path("cli_single.json");
    {
        std::ofstream out(single);
        out << R"({"n": 1, "self_loop": 0.0, "directed": true,
                   "snapshots": [{"duration": 1.0, "edges": []}]})";
    }
    const auto scalar = run_cli("certify --network " + single.string() + " --output records");
    CHECK(scalar.status == 0);
    CHECK(scalar.output.find("verdict=regular") != std::string::npos);
    std::filesystem::remove(single);
}

TEST_CASE("validation failures use exit code 2") {
    CHECK(run_cli("score --network does_not_exist.json").status == 2);
    CHECK(run_cli("score --backend bogus --network net1").status == 2);
    CHECK(run_cli("bogus-subcommand").status == 2);
    CHECK(run_cli("score").status == 2);  // no input source
}

TEST_CASE("datadriven backend can synthesize its own observations") {
    const auto result = run_cli(
        "score --network net1 --backend datadriven --count 12 --seed 9 --dt 0.01 "
        "--output records");
    REQUIRE(result.status == 0);
    CHECK(parse_node_value(result.output, "vcs", 7) == doctest::Approx(0.341).epsilon(0.02));

    const auto repeat = run_cli(
        "score --network net1 --backend datadriven --count 12 --seed 9 --dt 0.01 "
        "--output records");
    CHECK(repeat.output == result.output);
}

TEST_CASE("reproduce II emits a comparison artifact and passes") {
    const auto dir = temp_path("cli_reproduce");
    std::filesystem::create_directories(dir);
    const auto result = run_cli("reproduce II --out-dir " + dir.string());
    CHECK(result.status == 0);
    CHECK(result.output.find("all") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "reproduce_table2.txt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("centrality table lists the three indices") {
    const auto result = run_cli("centrality --network net1 --dt 0.01 --output records");
    REQUIRE(result.status == 0);
    CHECK(result.output.find("record=centrality node=1 ") != std::string::npos);
    CHECK(result.output.find("ac=") != std::string::npos);

    const auto gcs = run_cli("centrality --network net2 --gcs vcs --dt 0.05 --output records");
    REQUIRE(gcs.status == 0);
    CHECK(gcs.output.find("record=gcs kind=vcs snapshot=4 node=10") != std::string::npos);
}

TEST_SUITE_END();
