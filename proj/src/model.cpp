#include "stv/model.hpp"

#include <set>
#include <unordered_set>

namespace stv {

std::int64_t Election::total_papers() const {
    std::int64_t total = 0;
    for (const auto& b : ballots) total += b.multiplicity;
    return total;
}

std::vector<std::string> validate_election(const Election& e) {
    std::vector<std::string> out;
    auto add = [&](std::string msg) { out.push_back(std::move(msg)); };

    for (std::size_t i = 0; i < e.candidates.size(); ++i) {
        if (e.candidates[i].index != i)
            add("candidate at position " + std::to_string(i) + " has index " +
                std::to_string(e.candidates[i].index) + ", expected dense 0-based indices");
    }
    std::set<std::string> names;
    for (const auto& c : e.candidates) {
        if (!names.insert(c.name).second)
            add("duplicate candidate name \"" + c.name + "\"");
    }
    if (e.vacancies == 0) add("vacancies must be positive");
    if (e.vacancies >= e.candidates.size())
        add("vacancies must be fewer than candidates");

    for (std::size_t i = 0; i < e.ballots.size(); ++i) {
        const Ballot& b = e.ballots[i];
        if (b.preferences.empty())
            add("ballot " + std::to_string(i) + " has no preferences");
        if (b.multiplicity <= 0)
            add("ballot " + std::to_string(i) + " multiplicity must be positive");
        std::unordered_set<CandidateIndex> seen;
        for (CandidateIndex c : b.preferences) {
            if (c >= e.candidates.size())
                add("ballot " + std::to_string(i) + " names unknown candidate index " +
                    std::to_string(c));
            else if (!seen.insert(c).second)
                add("duplicate candidate " + std::to_string(c) + " in ballot " +
                    std::to_string(i));
        }
    }
    if (e.total_papers() <= 0) add("election has no ballot papers");
    return out;
}

std::int64_t Parcel::paper_count() const {
    std::int64_t n = 0;
    for (const auto& r : runs) n += r.papers;
    return n;
}

const char* status_name(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::continuing: return "continuing";
        case CandidateStatus::elected: return "elected";
        case CandidateStatus::excluded: return "excluded";
    }
    return "?";
}

}  // namespace stv
