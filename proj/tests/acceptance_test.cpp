// Acceptance gate: one PASS/FAIL line per criterion. Run as:
//   acceptance_test <path-to-stv> <fixtures-dir>
#include "stv/analysis.hpp"
#include "stv/io.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace stv;
namespace fs = std::filesystem;

namespace {

std::string g_stv;
fs::path g_fixtures;
fs::path g_tmp;
int g_failures = 0;

using Clock = std::chrono::steady_clock;

struct Criterion {
    std::string name;
    double budget_seconds;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }

    void finish() {
        double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed > budget_seconds) {
            ok = false;
            if (detail.empty()) detail = "over time budget";
        }
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << ": " << name << " ("
             << static_cast<int>(elapsed * 1000) << " ms, budget "
             << static_cast<int>(budget_seconds * 1000) << " ms)";
        if (!ok) line << " -- " << detail;
        std::cout << line.str() << "\n";
        if (!ok) ++g_failures;
    }
};

Election load_fixture(const std::string& name) {
    std::ifstream in(g_fixtures / name);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = parse_election(buf.str());
    if (!parsed.ok()) {
        std::cerr << "cannot load fixture " << name << ":\n"
                  << format_errors(parsed.errors);
        std::exit(2);
    }
    return parsed.election;
}

int run_cli(const std::string& args) {
    std::string cmd = g_stv + " " + args + " > /dev/null 2>&1";
    int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

bool has_kind(const std::vector<Finding>& fs, FindingKind k) {
    return std::any_of(fs.begin(), fs.end(),
                       [&](const Finding& f) { return f.kind == k; });
}

bool wins(const CountTranscript& t, CandidateIndex c) {
    return std::find(t.winners.begin(), t.winners.end(), c) != t.winners.end();
}

/// Replays per-count deltas; true iff
///   sum(tallies) + cumulative exhausted + cumulative loss = papers
/// holds after every count. total_loss receives the accumulated loss.
bool conserved(const CountTranscript& t, Rational& total_loss) {
    std::vector<Rational> tallies(t.candidate_names.size());
    Rational exhausted, loss;
    for (const CountStep& step : t.steps) {
        for (const auto& [cand, amount] : step.credited) tallies[cand] += amount;
        if (step.source) tallies[*step.source] -= step.value_removed;
        exhausted += step.exhausted_value;
        loss += step.rounding_loss;
        Rational sum;
        for (const Rational& tally : tallies) sum += tally;
        if (sum + exhausted + loss != Rational(t.total_papers)) return false;
    }
    total_loss = loss;
    return true;
}

/// Random well-formed elections, independent of the library generators.
struct Generator {
    std::mt19937_64 rng;
    explicit Generator(std::uint64_t seed) : rng(seed) {}

    Election next(std::uint32_t max_candidates, std::int64_t max_papers,
                  std::uint32_t fixed_vacancies) {
        Election e;
        e.name = "random";
        std::uint32_t n = 2 + rng() % (max_candidates - 1);
        for (std::uint32_t i = 0; i < n; ++i)
            e.candidates.push_back({i, std::string(1, static_cast<char>('A' + i))});
        e.vacancies = fixed_vacancies ? fixed_vacancies : 1 + rng() % (n - 1);
        std::int64_t papers = 0;
        do {
            std::vector<CandidateIndex> pool(n);
            for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(1 + rng() % n);
            std::int64_t mult =
                std::min<std::int64_t>(1 + rng() % 9, max_papers - papers);
            e.ballots.push_back({pool, mult});
            papers += mult;
        } while (papers < max_papers && rng() % 4 != 0);
        return e;
    }
};

/// Plain instant-runoff count, used as the single-vacancy oracle.
CandidateIndex irv(const Election& e) {
    const std::size_t n = e.candidates.size();
    std::int64_t papers = 0;
    for (const auto& b : e.ballots) papers += b.multiplicity;
    const std::int64_t majority = papers / 2 + 1;
    std::vector<bool> active(n, true);
    std::vector<std::vector<std::int64_t>> rounds;
    while (true) {
        std::vector<std::int64_t> tally(n, 0);
        for (const auto& b : e.ballots)
            for (CandidateIndex pref : b.preferences)
                if (active[pref]) {
                    tally[pref] += b.multiplicity;
                    break;
                }
        rounds.push_back(tally);
        CandidateIndex best = 0;
        std::int64_t best_tally = -1;
        std::size_t active_count = 0;
        for (CandidateIndex c = 0; c < n; ++c) {
            if (!active[c]) continue;
            ++active_count;
            if (tally[c] > best_tally) best_tally = tally[c], best = c;
        }
        if (best_tally >= majority || active_count == 1) return best;
        std::int64_t low = best_tally;
        for (CandidateIndex c = 0; c < n; ++c)
            if (active[c]) low = std::min(low, tally[c]);
        std::vector<CandidateIndex> tied;
        for (CandidateIndex c = 0; c < n; ++c)
            if (active[c] && tally[c] == low) tied.push_back(c);
        for (auto it = rounds.rbegin(); it != rounds.rend() && tied.size() > 1; ++it) {
            std::int64_t round_low = (*it)[tied.front()];
            bool differ = false;
            for (CandidateIndex c : tied) {
                if ((*it)[c] != round_low) differ = true;
                round_low = std::min(round_low, (*it)[c]);
            }
            if (!differ) continue;
            std::vector<CandidateIndex> narrowed;
            for (CandidateIndex c : tied)
                if ((*it)[c] == round_low) narrowed.push_back(c);
            tied = std::move(narrowed);
        }
        active[tied.front()] = false;
    }
}

void criterion_negative_tally() {
    Criterion c{"negative transfer value and tally under nsw_local", 1.0};
    Election e = load_fixture("nsw_negative.election");
    Ruleset nsw = *preset_ruleset("nsw_local");
    CountTranscript t = run_count(e, nsw);
    auto findings = detect_negative(t);
    c.expect(has_kind(findings, FindingKind::negative_transfer_value),
             "no negative transfer value reported");
    c.expect(has_kind(findings, FindingKind::negative_tally),
             "no negative tally reported");

    fs::path transcript = g_tmp / "nsw_negative.json";
    c.expect(run_cli("count --election " +
                     (g_fixtures / "nsw_negative.election").string() +
                     " --rules nsw_local --out " + transcript.string()) == 0,
             "cli count failed");
    c.expect(run_cli("detect --transcript " + transcript.string()) == 3,
             "cli detect did not exit 3");

    Ruleset exact = nsw;
    exact.rounding = Rounding::exact;
    c.expect(detect_all(run_count(e, exact)).findings.empty(),
             "exact rounding still produced findings");
    c.finish();
}

void criterion_value_increase() {
    Criterion c{"value-gaining papers under unified transfer values", 1.0};
    Election e = load_fixture("senate_inflation.election");
    auto findings = detect_value_increase(run_count(e, *preset_ruleset("federal")));
    c.expect(!findings.empty(), "no value_increase finding");
    for (const auto& f : findings) {
        Rational incoming, outgoing;
        for (const auto& [label, value] : f.evidence) {
            if (label == "incoming") incoming = value;
            if (label == "outgoing") outgoing = value;
        }
        c.expect(outgoing > incoming, "outgoing value does not exceed incoming");
    }
    c.expect(detect_value_increase(run_count(e, *preset_ruleset("nsw_local"))).empty(),
             "weighted gregory produced a value_increase finding");
    c.finish();
}

void criterion_monotonicity() {
    Criterion c{"monotonicity violation found and minimal", 10.0};
    Election e = load_fixture("monotonicity.election");
    c.expect(e.candidates.size() <= 6, "fixture too large");
    Ruleset r = *preset_ruleset("federal");
    const CandidateIndex donor = 0, beneficiary = 3;  // A, D
    c.expect(!wins(run_count(e, r), donor), "donor already wins as cast");
    auto found = search_monotonicity(e, r, donor, beneficiary,
                                     eligible_swap_papers(e, donor, beneficiary));
    c.expect(found.has_value(), "no manipulation found");
    if (found) {
        c.expect(found->papers_moved > 0, "empty manipulation returned");
        c.expect(wins(run_count(apply_swap(e, donor, beneficiary, found->papers_moved), r),
                      donor),
                 "claimed manipulation does not elect the donor");
        c.expect(!wins(run_count(apply_swap(e, donor, beneficiary,
                                            found->papers_moved - 1),
                                 r),
                       donor),
                 "manipulation is not minimal");
    }
    c.finish();
}

void criterion_irv_agreement() {
    Criterion c{"single-vacancy counts match the IRV oracle", 30.0};
    Generator gen(20260823);
    auto presets = preset_names();
    for (int i = 0; i < 200; ++i) {
        Election e = gen.next(5, 50, 1);
        CandidateIndex expected = irv(e);
        for (const auto& preset : presets) {
            CountTranscript t = run_count(e, *preset_ruleset(preset));
            if (t.winners.size() != 1 || t.winners[0] != expected) {
                c.expect(false, "disagreement under " + preset + " on election " +
                                    std::to_string(i));
                break;
            }
        }
        if (!c.ok) break;
    }
    c.finish();
}

void criterion_conservation() {
    Criterion c{"value conservation at every count", 60.0};
    auto presets = preset_names();
    for (const auto& preset : presets) {
        Generator gen(97 + std::hash<std::string>{}(preset) % 1000);
        Ruleset rounded = *preset_ruleset(preset);
        Ruleset exact = rounded;
        exact.rounding = Rounding::exact;
        for (int i = 0; i < 500 && c.ok; ++i) {
            Election e = gen.next(5, 50, 0);
            Rational loss;
            try {
                c.expect(conserved(run_count(e, rounded), loss),
                         "conservation broke under " + preset);
                c.expect(conserved(run_count(e, exact), loss),
                         "conservation broke under exact " + preset);
                c.expect(loss.is_zero(),
                         "nonzero rounding loss in exact mode under " + preset);
            } catch (const EngineError&) {
                // zero-denominator structured failure; not a conservation case
            }
        }
    }
    c.finish();
}

void criterion_determinism() {
    Criterion c{"byte-identical transcripts across repeated runs", 10.0};
    for (const auto& entry : fs::directory_iterator(g_fixtures)) {
        if (entry.path().extension() != ".election") continue;
        Election e = load_fixture(entry.path().filename().string());
        for (const auto& preset : preset_names()) {
            std::string first, second;
            try {
                first = serialize_transcript(run_count(e, *preset_ruleset(preset)));
                second = serialize_transcript(run_count(e, *preset_ruleset(preset)));
            } catch (const EngineError&) {
                continue;
            }
            c.expect(first == second, "nondeterministic transcript for " +
                                          entry.path().filename().string() +
                                          " under " + preset);
        }
    }
    c.finish();
}

void criterion_quota() {
    Criterion c{"quota never allows over-election", 1.0};
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 1000; ++i) {
        std::int64_t papers = 1 + static_cast<std::int64_t>(rng() % 10000000);
        std::uint32_t vacancies = 1 + static_cast<std::uint32_t>(rng() % 30);
        Quota q = compute_quota(papers, vacancies);
        if ((static_cast<std::int64_t>(vacancies) + 1) * q.value <= papers) {
            c.expect(false, "quota too small for " + std::to_string(papers) +
                                " papers, " + std::to_string(vacancies) + " seats");
            break;
        }
    }
    c.finish();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance_test <stv-binary> <fixtures-dir>\n";
        return 2;
    }
    g_stv = argv[1];
    g_fixtures = argv[2];
    g_tmp = fs::temp_directory_path() / "stv_acceptance";
    fs::create_directories(g_tmp);

    criterion_negative_tally();
    criterion_value_increase();
    criterion_monotonicity();
    criterion_irv_agreement();
    criterion_conservation();
    criterion_determinism();
    criterion_quota();

    if (g_failures) {
        std::cerr << g_failures << " acceptance criteria failed\n";
        return 1;
    }
    return 0;
}
