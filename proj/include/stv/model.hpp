#pragma once

#include "stv/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stv {

using CandidateIndex = std::uint32_t;

struct Candidate {
    CandidateIndex index = 0;  // ballot-paper order, dense 0..n-1
    std::string name;

    bool operator==(const Candidate&) const = default;
};

/// A group of identical ballot papers. `multiplicity` papers, each
/// carrying the same preference list. Tallies are multiplicity-weighted
/// everywhere, so compressing identical papers never changes a result.
struct Ballot {
    std::vector<CandidateIndex> preferences;  // first = most preferred
    std::int64_t multiplicity = 1;

    bool operator==(const Ballot&) const = default;
};

struct Election {
    std::string name;
    std::vector<Candidate> candidates;
    std::uint32_t vacancies = 0;
    std::vector<Ballot> ballots;

    std::int64_t total_papers() const;

    bool operator==(const Election&) const = default;
};

/// Invariant check. Returns one human-readable entry per violation;
/// empty means the election is well formed. Violations are data, not
/// exceptions: callers decide whether to proceed.
std::vector<std::string> validate_election(const Election& e);

/// A run of papers from one ballot line, inside a parcel. `cursor` is
/// the offset of the next preference not yet examined; after any
/// redistribution it points past every non-continuing candidate.
struct PaperRun {
    std::uint32_t ballot = 0;  // index into Election::ballots
    std::uint32_t cursor = 0;
    std::int64_t papers = 0;
};

/// Papers received by a candidate at one count at one transfer value.
/// `credited_value` is the amount actually added to the tally for this
/// parcel under the active rounding mode; `exact_value` is the
/// unrounded papers x transfer_value amount. The gap between the two is
/// the rounding loss this parcel carries, and is what makes the NSW
/// exhausted-aggregate pathology possible.
struct Parcel {
    std::vector<PaperRun> runs;
    Rational transfer_value;  // exactly 1 for first-preference parcels
    std::uint32_t received_at_count = 0;
    Rational exact_value;
    Rational credited_value;

    std::int64_t paper_count() const;
};

enum class CandidateStatus { continuing, elected, excluded };

const char* status_name(CandidateStatus s);

struct CandidateState {
    CandidateStatus status = CandidateStatus::continuing;
    Rational tally;
    std::vector<Parcel> parcels;  // arrival order
    std::optional<std::uint32_t> order_elected;  // 1-based
};

}  // namespace stv
