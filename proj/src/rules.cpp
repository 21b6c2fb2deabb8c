#include "stv/rules.hpp"

namespace stv {

const char* surplus_method_name(SurplusMethod m) {
    switch (m) {
        case SurplusMethod::last_parcel: return "last_parcel";
        case SurplusMethod::random_sample: return "random_sample";
        case SurplusMethod::gregory_weighted: return "gregory_weighted";
        case SurplusMethod::unified_tv: return "unified_tv";
    }
    return "?";
}

std::optional<SurplusMethod> surplus_method_from_name(const std::string& name) {
    if (name == "last_parcel") return SurplusMethod::last_parcel;
    if (name == "random_sample") return SurplusMethod::random_sample;
    if (name == "gregory_weighted") return SurplusMethod::gregory_weighted;
    if (name == "unified_tv") return SurplusMethod::unified_tv;
    return std::nullopt;
}

std::optional<Ruleset> preset_ruleset(const std::string& name) {
    Ruleset r;
    r.name = name;
    if (name == "federal" || name == "victoria") {
        r.surplus_method = SurplusMethod::unified_tv;
        r.rounding = Rounding::floor_integer;
        return r;
    }
    if (name == "nsw_local") {
        r.surplus_method = SurplusMethod::gregory_weighted;
        r.rounding = Rounding::floor_integer;
        r.exhausted_reduce_denominator = true;
        r.batch_by_incoming_tv = true;
        r.surplus_cap_at_one = true;
        return r;
    }
    if (name == "nsw_local_sample") {
        r.surplus_method = SurplusMethod::random_sample;
        r.rounding = Rounding::floor_integer;
        r.exhausted_reduce_denominator = true;
        r.surplus_cap_at_one = true;
        return r;
    }
    if (name == "act_pre2020" || name == "act2020") {
        r.surplus_method = SurplusMethod::last_parcel;
        r.rounding = name == "act2020" ? Rounding::floor_6dp : Rounding::floor_integer;
        r.exhausted_reduce_denominator = true;
        r.surplus_cap_at_one = true;
        return r;
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"federal", "nsw_local", "nsw_local_sample", "act_pre2020", "act2020",
            "victoria"};
}

Quota compute_quota(std::int64_t total_papers, std::uint32_t vacancies) {
    return Quota{total_papers / (static_cast<std::int64_t>(vacancies) + 1) + 1};
}

Rational surplus_fraction_nsw(const Rational& tally, const Quota& quota,
                              const Rational& exhausted_aggregate, bool cap) {
    Rational denominator = tally - exhausted_aggregate;
    if (denominator.is_zero())
        throw EngineError("NSW surplus fraction has zero denominator (tally equals "
                          "exhausted aggregate)",
                          0);
    Rational fraction = (tally - Rational(quota.value)) / denominator;
    if (cap && fraction > Rational(1)) return Rational(1);
    return fraction;
}

Rational transfer_value_unified(const Rational& surplus, std::int64_t ballot_count) {
    return surplus / Rational(ballot_count);
}

Rational transfer_value_weighted(const Rational& incoming_tv, const Rational& surplus,
                                 const Rational& total_value) {
    return incoming_tv * surplus / total_value;
}

}  // namespace stv
