// End-to-end checks of the installed command-line surface: exit codes,
// output files, determinism. Each case shells out to the built binary.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = RESTIE_CLI_PATH;
const std::string kFixtures = RESTIE_FIXTURE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("restie_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    TempDir scratch;
    const fs::path log = scratch.path / "out.txt";
    const std::string command =
        kCli + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    std::ifstream in(log);
    std::ostringstream out;
    out << in.rdbuf();
    result.output = out.str();
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fixture_args() {
    const std::string dir = kFixtures + "/pocket_county";
    return "--zones " + dir + "/zones.geojson --flood " + dir +
           "/flood_100yr.geojson --flood-label 100yr --flood " + dir +
           "/flood_500yr.geojson --flood-label 500yr --sci " + dir + "/sci.tsv";
}

} // namespace

TEST_CASE("analyze on the fixture exits 0 and writes outputs") {
    TempDir out;
    const auto r = run("analyze " + fixture_args() + " --out " +
                       (out.path / "results").string());
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out.path / "results" / "metrics.csv"));
    CHECK(fs::exists(out.path / "results" / "summary.json"));
    CHECK(r.output.find("median fp_rate") != std::string::npos);
}

TEST_CASE("missing flood file exits 2 and names the path") {
    TempDir out;
    const std::string dir = kFixtures + "/pocket_county";
    const auto r = run("analyze --zones " + dir +
                       "/zones.geojson --flood /nope/missing.geojson "
                       "--flood-label 100yr --sci " +
                       dir + "/sci.tsv --out " + (out.path / "x").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("/nope/missing.geojson") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    const auto missing_required = run("analyze --sci whatever.tsv");
    CHECK(missing_required.exit_code == 1);

    TempDir out;
    const auto both_sources =
        run("analyze " + fixture_args() + " --raw also.tsv --users u.csv --out " +
            (out.path / "y").string());
    CHECK(both_sources.exit_code == 1);

    const auto bad_sub = run("frobnicate");
    CHECK(bad_sub.exit_code == 1);
}

TEST_CASE("synth is deterministic and feeds analyze") {
    TempDir a, b;
    const std::string params =
        "synth --grid-w 6 --grid-h 6 --seed 9 --edges-per-zone 5 --out ";
    CHECK(run(params + (a.path / "c").string()).exit_code == 0);
    CHECK(run(params + (b.path / "c").string()).exit_code == 0);
    for (const char* name :
         {"zones.geojson", "flood_100yr.geojson", "flood_500yr.geojson",
          "sci.tsv"}) {
        CAPTURE(name);
        CHECK(slurp(a.path / "c" / name) == slurp(b.path / "c" / name));
    }

    const auto analyze = run(
        "analyze --zones " + (a.path / "c" / "zones.geojson").string() +
        " --flood " + (a.path / "c" / "flood_100yr.geojson").string() +
        " --flood-label 100yr --flood " +
        (a.path / "c" / "flood_500yr.geojson").string() +
        " --flood-label 500yr --sci " + (a.path / "c" / "sci.tsv").string() +
        " --out " + (a.path / "results").string());
    CAPTURE(analyze.output);
    CHECK(analyze.exit_code == 0);
    CHECK(fs::exists(a.path / "results" / "zones_enriched.geojson"));
}

TEST_CASE("overlay subcommand writes fp_rates.csv") {
    TempDir out;
    const std::string dir = kFixtures + "/pocket_county";
    const auto r = run("overlay --zones " + dir + "/zones.geojson --flood " +
                       dir + "/flood_100yr.geojson --flood-label 100yr --out " +
                       (out.path / "o").string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out.path / "o" / "fp_rates.csv");
    CHECK(csv.find("zone_id,") == 0);
    CHECK(csv.find("\nA,") != std::string::npos);
}

TEST_CASE("check subcommand prints ingest stats") {
    const auto r = run("check " + fixture_args());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("rows read: 7") != std::string::npos);
    CHECK(r.output.find("rows dropped (unknown zone): 1") != std::string::npos);
    CHECK(r.output.find("inputs OK") != std::string::npos);
}

TEST_CASE("check rejects corrupt SCI data with exit 2") {
    TempDir tmp;
    const std::string dir = kFixtures + "/pocket_county";
    const fs::path bad = tmp.path / "bad.tsv";
    std::ofstream(bad) << "user_loc\tfr_loc\tscaled_sci\nA\tB\t5\nB\tA\t7\n";
    const auto r = run("check --zones " + dir + "/zones.geojson --sci " +
                       bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("asymmetric") != std::string::npos);
}

TEST_CASE("analyze with ttest-groups flag picks the pair") {
    TempDir out;
    const auto r = run("analyze " + fixture_args() +
                       " --ttest-groups G1,G2 --out " +
                       (out.path / "results").string());
    CHECK(r.exit_code == 0);
    const std::string summary = slurp(out.path / "results" / "summary.json");
    CHECK(summary.find("\"groups\": \"G1,G2\"") != std::string::npos);
}
