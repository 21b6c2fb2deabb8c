#pragma once

#include "stv/engine.hpp"
#include "stv/model.hpp"

#include <string>
#include <vector>

namespace stv {

struct ParseError {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string message;
};

std::string format_errors(const std::vector<ParseError>& errors);

struct ElectionParseResult {
    Election election;
    std::vector<ParseError> errors;  // empty iff election is usable
    bool ok() const { return errors.empty(); }
};

/// Parses the line-oriented election format:
///
///   name: Example
///   vacancies: 2
///   candidates: Alice, Bob, Carol
///   3: Alice > Bob
///   1: Carol > Alice
///
/// Preferences may use candidate names or 0-based indices. Blank lines
/// and '#' comments are ignored. A document whose first non-space
/// character is '{' is parsed as the JSON encoding of the same schema
/// instead. All core-model invariants are validated after parsing.
ElectionParseResult parse_election(const std::string& source);

/// Canonical text form; parse_election(serialize_election(e)) == e.
std::string serialize_election(const Election& e);

/// Canonical JSON: stable key order, exact "num/den" rationals, no
/// timestamps. Identical transcripts give byte-identical output.
std::string serialize_transcript(const CountTranscript& t);

struct TranscriptParseResult {
    CountTranscript transcript;
    std::vector<ParseError> errors;
    bool ok() const { return errors.empty(); }
};

TranscriptParseResult parse_transcript(const std::string& source);

}  // namespace stv
