#include "stv/analysis.hpp"
#include "stv/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitEngineError = 2;
constexpr int kExitFindings = 3;

struct Fail {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Fail{kExitInputError, "cannot open " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

stv::Election load_election(const std::string& path) {
    auto parsed = stv::parse_election(read_file(path));
    if (!parsed.ok())
        throw Fail{kExitInputError, path + ":\n" + stv::format_errors(parsed.errors)};
    return parsed.election;
}

stv::Ruleset load_ruleset(const std::string& name, std::uint64_t seed) {
    auto preset = stv::preset_ruleset(name);
    if (!preset) {
        std::string known;
        for (const auto& n : stv::preset_names()) known += " " + n;
        throw Fail{kExitInputError, "unknown ruleset \"" + name + "\"; available:" + known};
    }
    preset->sample_seed = seed;
    return *preset;
}

stv::CountTranscript count_or_fail(const stv::Election& e, const stv::Ruleset& r) {
    try {
        return stv::run_count(e, r);
    } catch (const stv::EngineError& err) {
        throw Fail{kExitEngineError,
                   std::string("engine error at count ") +
                       std::to_string(err.count_index()) + ": " + err.what()};
    }
}

stv::CandidateIndex find_candidate(const stv::Election& e, const std::string& name) {
    for (const auto& c : e.candidates)
        if (c.name == name) return c.index;
    throw Fail{kExitInputError, "no candidate named \"" + name + "\""};
}

int cmd_count(const std::string& election_path, const std::string& rules,
              std::uint64_t seed, const std::string& out_path) {
    stv::Election e = load_election(election_path);
    stv::CountTranscript t = count_or_fail(e, load_ruleset(rules, seed));
    std::string body = stv::serialize_transcript(t);
    if (out_path.empty() || out_path == "-") {
        std::cout << body;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Fail{kExitInputError, "cannot write " + out_path};
        out << body;
    }
    std::cerr << "quota " << t.quota.value << ", " << t.steps.size() << " counts, winners:";
    for (auto w : t.winners) std::cerr << " " << t.candidate_names[w];
    std::cerr << "\n";
    return kExitOk;
}

int cmd_detect(const std::string& transcript_path, const std::string& only) {
    auto parsed = stv::parse_transcript(read_file(transcript_path));
    if (!parsed.ok())
        throw Fail{kExitInputError,
                   transcript_path + ":\n" + stv::format_errors(parsed.errors)};
    stv::AnomalyReport report = stv::detect_all(parsed.transcript);
    if (!only.empty()) {
        auto kind = stv::finding_kind_from_name(only);
        if (!kind) throw Fail{kExitInputError, "unknown finding kind \"" + only + "\""};
        std::erase_if(report.findings,
                      [&](const stv::Finding& f) { return f.kind != *kind; });
    }
    if (report.findings.empty()) {
        std::cout << "no findings\n";
        return kExitOk;
    }
    std::cout << stv::format_findings(report, parsed.transcript.candidate_names);
    return kExitFindings;
}

int cmd_shift_search(const std::string& election_path, const std::string& rules,
                     std::uint64_t seed, const std::string& donor,
                     const std::string& beneficiary, std::int64_t max_papers) {
    stv::Election e = load_election(election_path);
    stv::Ruleset r = load_ruleset(rules, seed);
    stv::CandidateIndex d = find_candidate(e, donor);
    stv::CandidateIndex b = find_candidate(e, beneficiary);
    std::optional<stv::SwapManipulation> found;
    try {
        found = stv::search_monotonicity(e, r, d, b, max_papers);
    } catch (const stv::EngineError& err) {
        throw Fail{kExitEngineError,
                   std::string("engine error at count ") +
                       std::to_string(err.count_index()) + ": " + err.what()};
    }
    if (!found) {
        std::cout << "none\n";
        return kExitOk;
    }
    std::cout << found->papers_moved << " papers: " << found->description << "\n";
    return kExitFindings;
}

int cmd_compare(const std::string& election_path, const std::string& rules_csv,
                std::uint64_t seed) {
    stv::Election e = load_election(election_path);
    std::vector<stv::Ruleset> rulesets;
    std::stringstream ss(rules_csv);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) rulesets.push_back(load_ruleset(name, seed));
    if (rulesets.size() < 2)
        throw Fail{kExitInputError, "compare needs at least two rulesets"};
    stv::ComparisonReport report;
    try {
        report = stv::compare_rulesets(e, rulesets);
    } catch (const stv::EngineError& err) {
        throw Fail{kExitEngineError,
                   std::string("engine error at count ") +
                       std::to_string(err.count_index()) + ": " + err.what()};
    }
    for (const auto& outcome : report.outcomes) {
        std::cout << outcome.ruleset_name << ":";
        for (auto w : outcome.winners) std::cout << " " << e.candidates[w].name;
        std::cout << "\n";
    }
    std::cout << "agreement:\n";
    for (std::size_t i = 0; i < report.agreement.size(); ++i) {
        std::cout << "  " << report.outcomes[i].ruleset_name;
        for (bool same : report.agreement[i]) std::cout << " " << (same ? "=" : "X");
        std::cout << "\n";
    }
    if (report.all_agree()) return kExitOk;
    std::cout << stv::format_findings(stv::AnomalyReport{report.findings}, {});
    return kExitFindings;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STV counting engine with legislation-faithful rule variants"};
    app.require_subcommand(1);

    std::string election_path, rules = "federal", out_path, transcript_path, only;
    std::string donor, beneficiary;
    std::uint64_t seed = 0;
    std::int64_t max_papers = 0;

    auto* count = app.add_subcommand("count", "run a count and write the transcript");
    count->add_option("--election", election_path, "election file")->required();
    count->add_option("--rules", rules, "ruleset preset name");
    count->add_option("--seed", seed, "sample seed (random_sample rulesets)");
    count->add_option("--out", out_path, "transcript output path ('-' for stdout)");

    auto* detect = app.add_subcommand("detect", "run anomaly detectors on a transcript");
    detect->add_option("--transcript", transcript_path, "transcript file")->required();
    detect->add_option("--only", only, "restrict to one finding kind");

    auto* shift = app.add_subcommand("shift-search",
                                     "search for a loser-to-winner preference swap");
    shift->add_option("--election", election_path, "election file")->required();
    shift->add_option("--rules", rules, "ruleset preset name");
    shift->add_option("--seed", seed, "sample seed (random_sample rulesets)");
    shift->add_option("--donor", donor, "losing candidate giving papers away")->required();
    shift->add_option("--beneficiary", beneficiary, "candidate receiving them")->required();
    shift->add_option("--max", max_papers, "largest paper count to try")->required();

    auto* compare = app.add_subcommand("compare", "count under several rulesets");
    compare->add_option("--election", election_path, "election file")->required();
    compare->add_option("--rules", rules, "comma-separated preset names")->required();
    compare->add_option("--seed", seed, "sample seed (random_sample rulesets)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(count)) return cmd_count(election_path, rules, seed, out_path);
        if (app.got_subcommand(detect)) return cmd_detect(transcript_path, only);
        if (app.got_subcommand(shift))
            return cmd_shift_search(election_path, rules, seed, donor, beneficiary,
                                    max_papers);
        if (app.got_subcommand(compare)) return cmd_compare(election_path, rules, seed);
    } catch (const Fail& f) {
        std::cerr << f.message << "\n";
        return f.code;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
