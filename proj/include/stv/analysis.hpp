#pragma once

#include "stv/engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stv {

enum class FindingKind {
    negative_transfer_value,
    negative_tally,
    value_increase,
    monotonicity_violation,
    ruleset_disagreement,
};

const char* finding_kind_name(FindingKind k);
std::optional<FindingKind> finding_kind_from_name(const std::string& name);

/// One detected anomaly. Everything needed to reproduce it is here:
/// the count index it occurred at, the candidates involved, and the
/// offending exact values.
struct Finding {
    FindingKind kind = FindingKind::negative_transfer_value;
    std::uint32_t count_index = 0;
    std::vector<CandidateIndex> candidates;
    std::vector<std::pair<std::string, Rational>> evidence;
    std::string message;
};

struct AnomalyReport {
    std::vector<Finding> findings;
};

std::string format_findings(const AnomalyReport& report,
                            const std::vector<std::string>& candidate_names);

/// Negative transfer values and negative running tallies. Tallies are
/// reconstructed from the transcript's per-count deltas, never from
/// engine internals, so the detector works on any stored transcript.
std::vector<Finding> detect_negative(const CountTranscript& t);

/// Parcels whose outgoing transfer value strictly exceeds the value
/// they arrived with.
std::vector<Finding> detect_value_increase(const CountTranscript& t);

/// All transcript detectors together.
AnomalyReport detect_all(const CountTranscript& t);

struct SwapManipulation {
    CandidateIndex donor = 0;
    CandidateIndex recipient = 0;
    std::int64_t papers_moved = 0;
    std::string description;
};

/// Number of papers that rank `donor` somewhere before `recipient`
/// (both present); the pool search_monotonicity can draw from.
std::int64_t eligible_swap_papers(const Election& e, CandidateIndex donor,
                                  CandidateIndex recipient);

/// Builds the election where the first `papers` eligible papers (input
/// order) have donor and recipient swapped on their preference lists.
Election apply_swap(const Election& e, CandidateIndex donor, CandidateIndex recipient,
                    std::int64_t papers);

/// Linear sweep m = 1..max_papers for the smallest number of swapped
/// papers that turns the losing donor into a winner. Linear because
/// winner membership is not monotone in m; only the exhaustive sweep is
/// sound. Returns nullopt if no m works (or the donor already wins).
std::optional<SwapManipulation> search_monotonicity(const Election& e, const Ruleset& r,
                                                    CandidateIndex donor,
                                                    CandidateIndex beneficiary,
                                                    std::int64_t max_papers);

struct RulesetOutcome {
    std::string ruleset_name;
    std::vector<CandidateIndex> winners;  // election order
};

struct ComparisonReport {
    std::vector<RulesetOutcome> outcomes;
    std::vector<std::vector<bool>> agreement;  // winner sets equal as sets
    std::vector<Finding> findings;             // ruleset_disagreement entries
    bool all_agree() const { return findings.empty(); }
};

ComparisonReport compare_rulesets(const Election& e, const std::vector<Ruleset>& rulesets);

}  // namespace stv
