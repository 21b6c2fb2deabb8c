#pragma once

#include "stv/model.hpp"
#include "stv/rules.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stv {

enum class ActionKind { first_preferences, surplus, exclusion };

const char* action_kind_name(ActionKind k);

/// A parcel feeding one surplus batch: how many papers arrived at which
/// transfer value. Recorded so detectors can compare incoming against
/// outgoing values without replaying the engine.
struct SourceParcel {
    Rational incoming_tv;
    std::int64_t papers = 0;

    bool operator==(const SourceParcel&) const = default;
};

/// One count: a single rounded batch of paper movement (or the opening
/// first-preference distribution). Conservation holds per count:
///   sum(credited) + exhausted_value + rounding_loss = value_removed.
struct CountStep {
    std::uint32_t index = 0;  // 1-based
    ActionKind action = ActionKind::first_preferences;
    std::optional<CandidateIndex> source;  // surplus / exclusion candidate
    std::uint32_t batch = 1;  // 1-based batch number within a distribution
    /// Ascending candidate index; destinations only (the source's loss
    /// is value_removed). Amounts can be negative under a negative NSW
    /// surplus fraction.
    std::vector<std::pair<CandidateIndex, Rational>> credited;
    std::optional<Rational> transfer_value;  // outgoing value per paper
    std::vector<SourceParcel> sources;       // surplus steps only
    std::int64_t exhausted_papers = 0;
    Rational exhausted_value;
    Rational rounding_loss;
    Rational value_removed;
    std::vector<CandidateIndex> elected_now;  // quota order
    std::optional<CandidateIndex> excluded_now;

    bool operator==(const CountStep&) const = default;
};

struct FinalCandidate {
    CandidateStatus status = CandidateStatus::continuing;
    Rational tally;
    std::optional<std::uint32_t> order_elected;

    bool operator==(const FinalCandidate&) const = default;
};

/// Complete audit record of one count run. A pure function of
/// (election, ruleset): serializing it twice gives identical bytes.
struct CountTranscript {
    std::string election_name;
    std::vector<std::string> candidate_names;
    std::uint32_t vacancies = 0;
    std::int64_t total_papers = 0;
    Ruleset ruleset;
    Quota quota;
    std::vector<CountStep> steps;
    std::vector<CandidateIndex> winners;  // election order
    std::vector<FinalCandidate> final_states;

    bool operator==(const CountTranscript&) const = default;
};

/// Runs the full count under the given ruleset. The election must pass
/// validate_election. Throws EngineError (with the count index) if the
/// NSW surplus fraction hits a zero denominator.
CountTranscript run_count(const Election& e, const Ruleset& r);

}  // namespace stv
