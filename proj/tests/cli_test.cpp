// Exercises the installed `stv` binary end to end. Run as:
//   cli_test <path-to-stv> <fixtures-dir>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

std::string g_stv;
fs::path g_fixtures;
fs::path g_tmp;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    fs::path out_path = g_tmp / "stdout.txt";
    std::string cmd = g_stv + " " + args + " > " + out_path.string() + " 2> " +
                      (g_tmp / "stderr.txt").string();
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    return r;
}

std::string fixture(const std::string& name) {
    return (g_fixtures / name).string();
}

std::string count_to_transcript(const std::string& fixture_name,
                                const std::string& rules) {
    fs::path out = g_tmp / (fixture_name + "." + rules + ".json");
    RunResult r = run("count --election " + fixture(fixture_name) + " --rules " +
                      rules + " --out " + out.string());
    check(r.code == 0, "count " + fixture_name + " under " + rules);
    return out.string();
}

void test_count() {
    RunResult to_stdout =
        run("count --election " + fixture("two_horse.election") + " --out -");
    check(to_stdout.code == 0, "count exits 0 on a clean election");
    check(to_stdout.out.find("\"winners\"") != std::string::npos,
          "count writes the transcript to stdout with --out -");

    check(run("count --election " + fixture("two_horse.election") +
              " --rules tasmania")
                  .code == 1,
          "unknown ruleset exits 1");
    check(run("count --election /nonexistent.election").code == 1,
          "missing file exits 1");
    check(run("count").code == 1, "missing required option exits 1");
    check(run("--help").code == 0, "--help exits 0");

    fs::path bad = g_tmp / "bad.election";
    std::ofstream(bad) << "vacancies: 3\ncandidates: A, B\n1: A > A\n";
    check(run("count --election " + bad.string()).code == 1,
          "invalid election exits 1");
}

void test_detect() {
    std::string clean = count_to_transcript("two_horse.election", "federal");
    RunResult r = run("detect --transcript " + clean);
    check(r.code == 0, "detect exits 0 on a clean transcript");
    check(r.out == "no findings\n", "detect reports no findings");

    std::string nsw = count_to_transcript("nsw_negative.election", "nsw_local");
    r = run("detect --transcript " + nsw);
    check(r.code == 3, "detect exits 3 on the negative-tally transcript");
    check(r.out.find("negative_tally") != std::string::npos,
          "detect names the negative tally");

    std::string senate = count_to_transcript("senate_inflation.election", "federal");
    r = run("detect --transcript " + senate);
    check(r.code == 3, "detect exits 3 on the value-increase transcript");
    check(run("detect --transcript " + senate + " --only negative_tally").code == 0,
          "--only filters away unrelated findings");
    check(run("detect --transcript " + senate + " --only value_increase").code == 3,
          "--only keeps matching findings");
    check(run("detect --transcript " + senate + " --only nonsense").code == 1,
          "unknown finding kind exits 1");
    check(run("detect --transcript " + fixture("two_horse.election")).code == 1,
          "non-transcript input exits 1");
}

void test_shift_search() {
    RunResult r = run("shift-search --election " + fixture("monotonicity.election") +
                      " --donor A --beneficiary D --max 7");
    check(r.code == 3, "shift-search exits 3 when a manipulation exists");
    check(r.out.rfind("3 papers", 0) == 0, "shift-search reports the minimal count");

    r = run("shift-search --election " + fixture("two_horse.election") +
            " --donor B --beneficiary A --max 4");
    check(r.code == 0, "shift-search exits 0 when no manipulation exists");
    check(r.out == "none\n", "shift-search prints none");

    check(run("shift-search --election " + fixture("two_horse.election") +
              " --donor Nobody --beneficiary A --max 4")
                  .code == 1,
          "unknown candidate exits 1");
}

void test_compare() {
    RunResult r = run("compare --election " + fixture("preset_split.election") +
                      " --rules federal,nsw_local,act_pre2020,act2020,victoria");
    check(r.code == 3, "compare exits 3 on disagreement");
    check(r.out.find("nsw_local:") != std::string::npos, "compare lists outcomes");
    check(r.out.find('X') != std::string::npos, "agreement matrix marks the split");

    r = run("compare --election " + fixture("two_horse.election") +
            " --rules federal,victoria");
    check(r.code == 0, "compare exits 0 on agreement");

    check(run("compare --election " + fixture("two_horse.election") +
              " --rules federal")
                  .code == 1,
          "compare needs two rulesets");
}

void test_engine_error() {
    // W's rounded tally equals the exact value of its exhausted papers,
    // so the NSW surplus fraction divides by zero.
    fs::path path = g_tmp / "zero_denominator.election";
    std::ofstream(path) << "name: zero-denominator\n"
                           "vacancies: 6\n"
                           "candidates: D1, D2, D3, W, R, X, Y, Z\n"
                           "5: D1 > W\n"
                           "3: D1 > X\n"
                           "2: D2 > W > R\n"
                           "6: D2 > Y\n"
                           "5: D3 > W\n"
                           "3: D3 > Z\n";
    RunResult r = run("count --election " + path.string() + " --rules nsw_local");
    check(r.code == 2, "engine error exits 2");
    std::ifstream err(g_tmp / "stderr.txt");
    std::ostringstream buf;
    buf << err.rdbuf();
    check(buf.str().find("engine error at count 5") != std::string::npos,
          "engine error names the count");
}

void test_seed() {
    RunResult with_seed =
        run("count --election " + fixture("nsw_negative.election") +
            " --rules nsw_local_sample --seed 7 --out -");
    RunResult again = run("count --election " + fixture("nsw_negative.election") +
                          " --rules nsw_local_sample --seed 7 --out -");
    check(with_seed.code == 0 && with_seed.out == again.out,
          "seeded sampling is reproducible");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: cli_test <stv-binary> <fixtures-dir>\n";
        return 2;
    }
    g_stv = argv[1];
    g_fixtures = argv[2];
    g_tmp = fs::temp_directory_path() / "stv_cli_test";
    fs::create_directories(g_tmp);

    test_count();
    test_detect();
    test_shift_search();
    test_compare();
    test_engine_error();
    test_seed();

    if (g_failures) {
        std::cerr << g_failures << " CLI checks failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}
