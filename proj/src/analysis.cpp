#include "stv/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace stv {

const char* finding_kind_name(FindingKind k) {
    switch (k) {
        case FindingKind::negative_transfer_value: return "negative_transfer_value";
        case FindingKind::negative_tally: return "negative_tally";
        case FindingKind::value_increase: return "value_increase";
        case FindingKind::monotonicity_violation: return "monotonicity_violation";
        case FindingKind::ruleset_disagreement: return "ruleset_disagreement";
    }
    return "?";
}

std::optional<FindingKind> finding_kind_from_name(const std::string& name) {
    for (FindingKind k :
         {FindingKind::negative_transfer_value, FindingKind::negative_tally,
          FindingKind::value_increase, FindingKind::monotonicity_violation,
          FindingKind::ruleset_disagreement})
        if (name == finding_kind_name(k)) return k;
    return std::nullopt;
}

std::string format_findings(const AnomalyReport& report,
                            const std::vector<std::string>& candidate_names) {
    std::ostringstream out;
    for (const Finding& f : report.findings) {
        out << finding_kind_name(f.kind);
        if (f.count_index > 0) out << " at count " << f.count_index;
        if (!f.candidates.empty()) {
            out << " [";
            for (std::size_t i = 0; i < f.candidates.size(); ++i) {
                if (i) out << ", ";
                if (f.candidates[i] < candidate_names.size())
                    out << candidate_names[f.candidates[i]];
                else
                    out << "#" << f.candidates[i];
            }
            out << "]";
        }
        out << ": " << f.message;
        for (const auto& [label, value] : f.evidence)
            out << " " << label << "=" << value.str();
        out << "\n";
    }
    return out.str();
}

std::vector<Finding> detect_negative(const CountTranscript& t) {
    std::vector<Finding> out;
    std::vector<Rational> tallies(t.candidate_names.size());
    for (const CountStep& step : t.steps) {
        if (step.transfer_value && step.transfer_value->is_negative()) {
            Finding f;
            f.kind = FindingKind::negative_transfer_value;
            f.count_index = step.index;
            if (step.source) f.candidates.push_back(*step.source);
            f.evidence.emplace_back("transfer_value", *step.transfer_value);
            f.message = "papers distributed at a negative transfer value";
            out.push_back(std::move(f));
        }
        for (const auto& [cand, amount] : step.credited) tallies[cand] += amount;
        if (step.source) tallies[*step.source] -= step.value_removed;
        for (CandidateIndex c = 0; c < tallies.size(); ++c) {
            if (!tallies[c].is_negative()) continue;
            Finding f;
            f.kind = FindingKind::negative_tally;
            f.count_index = step.index;
            f.candidates.push_back(c);
            f.evidence.emplace_back("tally", tallies[c]);
            f.message = "candidate tally below zero";
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<Finding> detect_value_increase(const CountTranscript& t) {
    std::vector<Finding> out;
    for (const CountStep& step : t.steps) {
        if (step.action != ActionKind::surplus || !step.transfer_value) continue;
        for (const SourceParcel& src : step.sources) {
            if (src.papers <= 0 || !(src.incoming_tv < *step.transfer_value)) continue;
            Finding f;
            f.kind = FindingKind::value_increase;
            f.count_index = step.index;
            if (step.source) f.candidates.push_back(*step.source);
            f.evidence.emplace_back("incoming", src.incoming_tv);
            f.evidence.emplace_back("outgoing", *step.transfer_value);
            f.message = std::to_string(src.papers) + " papers departing above their "
                                                     "incoming value";
            out.push_back(std::move(f));
        }
    }
    return out;
}

AnomalyReport detect_all(const CountTranscript& t) {
    AnomalyReport report;
    for (auto& f : detect_negative(t)) report.findings.push_back(std::move(f));
    for (auto& f : detect_value_increase(t)) report.findings.push_back(std::move(f));
    return report;
}

std::int64_t eligible_swap_papers(const Election& e, CandidateIndex donor,
                                  CandidateIndex recipient) {
    std::int64_t total = 0;
    for (const Ballot& b : e.ballots) {
        auto donor_pos = std::find(b.preferences.begin(), b.preferences.end(), donor);
        auto recip_pos = std::find(b.preferences.begin(), b.preferences.end(), recipient);
        if (donor_pos != b.preferences.end() && recip_pos != b.preferences.end() &&
            donor_pos < recip_pos)
            total += b.multiplicity;
    }
    return total;
}

Election apply_swap(const Election& e, CandidateIndex donor, CandidateIndex recipient,
                    std::int64_t papers) {
    Election out = e;
    out.ballots.clear();
    std::int64_t remaining = papers;
    for (const Ballot& b : e.ballots) {
        auto donor_pos = std::find(b.preferences.begin(), b.preferences.end(), donor);
        auto recip_pos = std::find(b.preferences.begin(), b.preferences.end(), recipient);
        bool eligible = donor_pos != b.preferences.end() &&
                        recip_pos != b.preferences.end() && donor_pos < recip_pos;
        if (!eligible || remaining <= 0) {
            out.ballots.push_back(b);
            continue;
        }
        std::int64_t take = std::min(remaining, b.multiplicity);
        remaining -= take;
        Ballot swapped = b;
        swapped.multiplicity = take;
        std::iter_swap(swapped.preferences.begin() + (donor_pos - b.preferences.begin()),
                       swapped.preferences.begin() + (recip_pos - b.preferences.begin()));
        out.ballots.push_back(std::move(swapped));
        if (take < b.multiplicity) {
            Ballot rest = b;
            rest.multiplicity = b.multiplicity - take;
            out.ballots.push_back(std::move(rest));
        }
    }
    return out;
}

std::optional<SwapManipulation> search_monotonicity(const Election& e, const Ruleset& r,
                                                    CandidateIndex donor,
                                                    CandidateIndex beneficiary,
                                                    std::int64_t max_papers) {
    CountTranscript base = run_count(e, r);
    if (std::find(base.winners.begin(), base.winners.end(), donor) != base.winners.end())
        return std::nullopt;  // nothing to manipulate, the donor already wins

    std::int64_t pool = eligible_swap_papers(e, donor, beneficiary);
    std::int64_t limit = std::min(max_papers, pool);
    for (std::int64_t m = 1; m <= limit; ++m) {
        Election variant = apply_swap(e, donor, beneficiary, m);
        CountTranscript t;
        try {
            t = run_count(variant, r);
        } catch (const EngineError&) {
            continue;  // a variant count that cannot complete is not a win
        }
        if (std::find(t.winners.begin(), t.winners.end(), donor) != t.winners.end()) {
            SwapManipulation found;
            found.donor = donor;
            found.recipient = beneficiary;
            found.papers_moved = m;
            found.description =
                "swap " + e.candidates[donor].name + " with " +
                e.candidates[beneficiary].name + " on the first " + std::to_string(m) +
                " papers ranking the donor first of the two";
            return found;
        }
    }
    return std::nullopt;
}

ComparisonReport compare_rulesets(const Election& e, const std::vector<Ruleset>& rulesets) {
    ComparisonReport report;
    std::vector<std::set<CandidateIndex>> winner_sets;
    for (const Ruleset& r : rulesets) {
        CountTranscript t = run_count(e, r);
        report.outcomes.push_back(RulesetOutcome{r.name, t.winners});
        winner_sets.emplace_back(t.winners.begin(), t.winners.end());
    }
    report.agreement.assign(rulesets.size(), std::vector<bool>(rulesets.size(), true));
    for (std::size_t i = 0; i < rulesets.size(); ++i) {
        for (std::size_t j = i + 1; j < rulesets.size(); ++j) {
            bool same = winner_sets[i] == winner_sets[j];
            report.agreement[i][j] = report.agreement[j][i] = same;
            if (same) continue;
            Finding f;
            f.kind = FindingKind::ruleset_disagreement;
            f.message = "rulesets " + rulesets[i].name + " and " + rulesets[j].name +
                        " elect different winner sets";
            report.findings.push_back(std::move(f));
        }
    }
    return report;
}

}  // namespace stv
