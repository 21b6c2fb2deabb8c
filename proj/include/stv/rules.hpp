#pragma once

#include "stv/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stv {

enum class SurplusMethod {
    last_parcel,
    random_sample,
    gregory_weighted,
    unified_tv,
};

const char* surplus_method_name(SurplusMethod m);
std::optional<SurplusMethod> surplus_method_from_name(const std::string& name);

/// One jurisdiction's answers to the surplus-distribution questions.
struct Ruleset {
    std::string name;
    SurplusMethod surplus_method = SurplusMethod::unified_tv;
    Rounding rounding = Rounding::floor_integer;
    /// true: exhausted papers shrink the divisor, via the NSW surplus
    /// fraction (V-Q)/(V-E). false: Federal/Victoria style, exhausted
    /// papers keep their share of the surplus and leave as exhausted
    /// value.
    bool exhausted_reduce_denominator = false;
    bool batch_by_incoming_tv = false;
    std::uint64_t sample_seed = 0;  // random_sample only
    bool surplus_cap_at_one = false;  // NSW "exceeds 1 -> 1" cap

    bool operator==(const Ruleset&) const = default;
};

/// Frozen presets: federal, nsw_local, act_pre2020, act2020, victoria.
/// nsw_local_sample is the same NSW configuration with the seeded
/// random-sample method instead of weighted Gregory.
std::optional<Ruleset> preset_ruleset(const std::string& name);
std::vector<std::string> preset_names();

struct Quota {
    std::int64_t value = 0;

    bool operator==(const Quota&) const = default;
};

/// Droop quota: floor(papers / (vacancies + 1)) + 1.
Quota compute_quota(std::int64_t total_papers, std::uint32_t vacancies);

/// Raised when a count cannot proceed (currently only the NSW surplus
/// fraction's zero denominator, V = E). Carries the count index at
/// which the engine stopped.
class EngineError : public std::runtime_error {
  public:
    EngineError(std::string what, std::uint32_t count_index)
        : std::runtime_error(std::move(what)), count_index_(count_index) {}
    std::uint32_t count_index() const { return count_index_; }

  private:
    std::uint32_t count_index_;
};

/// NSW local government surplus fraction (V-Q)/(V-E), where V is the
/// rounded tally at election and E the exact aggregate value of
/// exhausted papers. Capped at 1 only when the raw fraction strictly
/// exceeds 1, so a negative fraction (E > V) passes through untouched.
/// Throws EngineError with count 0 when V = E; callers rethrow with the
/// real count index.
Rational surplus_fraction_nsw(const Rational& tally, const Quota& quota,
                              const Rational& exhausted_aggregate, bool cap);

/// Senate-style unified transfer value: surplus / physical paper count.
/// Papers that will exhaust are counted in the divisor.
Rational transfer_value_unified(const Rational& surplus, std::int64_t ballot_count);

/// Weighted inclusive Gregory: incoming value scaled by surplus over
/// the exact total value held. Never exceeds the incoming value while
/// surplus <= total value.
Rational transfer_value_weighted(const Rational& incoming_tv, const Rational& surplus,
                                 const Rational& total_value);

}  // namespace stv
