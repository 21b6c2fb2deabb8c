#include "stv/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace stv {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(trim(s.substr(start)));
            return out;
        }
        out.emplace_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

bool is_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

void resolve_preference(const std::string& token,
                        const std::unordered_map<std::string, CandidateIndex>& by_name,
                        std::size_t n_candidates, std::size_t line, Ballot& ballot,
                        std::vector<ParseError>& errors) {
    auto it = by_name.find(token);
    if (it != by_name.end()) {
        ballot.preferences.push_back(it->second);
        return;
    }
    if (is_integer(token) && token[0] != '-') {
        unsigned long idx = std::stoul(token);
        if (idx < n_candidates) {
            ballot.preferences.push_back(static_cast<CandidateIndex>(idx));
            return;
        }
    }
    errors.push_back({line, "unknown candidate \"" + token + "\""});
}

ElectionParseResult parse_election_json(const std::string& source) {
    ElectionParseResult res;
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& err) {
        res.errors.push_back({0, std::string("invalid JSON: ") + err.what()});
        return res;
    }
    try {
        res.election.name = doc.value("name", "");
        res.election.vacancies = doc.at("vacancies").get<std::uint32_t>();
        std::unordered_map<std::string, CandidateIndex> by_name;
        for (const auto& name : doc.at("candidates")) {
            Candidate c;
            c.index = static_cast<CandidateIndex>(res.election.candidates.size());
            c.name = name.get<std::string>();
            by_name.emplace(c.name, c.index);
            res.election.candidates.push_back(std::move(c));
        }
        for (const auto& jb : doc.at("ballots")) {
            Ballot b;
            b.multiplicity = jb.value("multiplicity", std::int64_t{1});
            for (const auto& pref : jb.at("preferences")) {
                if (pref.is_number_unsigned() || pref.is_number_integer()) {
                    auto idx = pref.get<std::int64_t>();
                    if (idx < 0 ||
                        idx >= static_cast<std::int64_t>(res.election.candidates.size())) {
                        res.errors.push_back(
                            {0, "unknown candidate index " + std::to_string(idx)});
                        continue;
                    }
                    b.preferences.push_back(static_cast<CandidateIndex>(idx));
                } else {
                    resolve_preference(pref.get<std::string>(), by_name,
                                       res.election.candidates.size(), 0, b, res.errors);
                }
            }
            res.election.ballots.push_back(std::move(b));
        }
    } catch (const json::exception& err) {
        res.errors.push_back({0, std::string("bad election document: ") + err.what()});
        return res;
    }
    if (res.errors.empty())
        for (const auto& v : validate_election(res.election)) res.errors.push_back({0, v});
    return res;
}

}  // namespace

std::string format_errors(const std::vector<ParseError>& errors) {
    std::ostringstream out;
    for (const auto& e : errors) {
        if (e.line > 0) out << "line " << e.line << ": ";
        out << e.message << "\n";
    }
    return out.str();
}

ElectionParseResult parse_election(const std::string& source) {
    auto head = trim(source);
    if (!head.empty() && head.front() == '{') return parse_election_json(source);

    ElectionParseResult res;
    std::unordered_map<std::string, CandidateIndex> by_name;
    bool saw_vacancies = false;
    bool saw_candidates = false;

    std::istringstream in(source);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            res.errors.push_back({lineno, "expected \"key: value\" or \"COUNT: prefs\""});
            continue;
        }
        std::string key(trim(line.substr(0, colon)));
        std::string value(trim(line.substr(colon + 1)));
        if (key == "name") {
            res.election.name = value;
        } else if (key == "vacancies") {
            if (is_integer(value) && value[0] != '-') {
                res.election.vacancies = static_cast<std::uint32_t>(std::stoul(value));
                saw_vacancies = true;
            } else {
                res.errors.push_back({lineno, "vacancies must be a positive integer"});
            }
        } else if (key == "candidates") {
            for (const auto& name : split(value, ',')) {
                if (name.empty()) {
                    res.errors.push_back({lineno, "empty candidate name"});
                    continue;
                }
                Candidate c;
                c.index = static_cast<CandidateIndex>(res.election.candidates.size());
                c.name = name;
                by_name.emplace(c.name, c.index);
                res.election.candidates.push_back(std::move(c));
            }
            saw_candidates = true;
        } else if (is_integer(key)) {
            if (!saw_candidates) {
                res.errors.push_back({lineno, "ballot line before candidates: header"});
                continue;
            }
            Ballot b;
            b.multiplicity = std::stoll(key);
            if (b.multiplicity <= 0) {
                res.errors.push_back({lineno, "multiplicity must be positive"});
                continue;
            }
            for (const auto& token : split(value, '>')) {
                if (token.empty()) {
                    res.errors.push_back({lineno, "empty preference"});
                    continue;
                }
                resolve_preference(token, by_name, res.election.candidates.size(), lineno,
                                   b, res.errors);
            }
            res.election.ballots.push_back(std::move(b));
        } else {
            res.errors.push_back({lineno, "unknown header \"" + key + "\""});
        }
    }
    if (!saw_vacancies) res.errors.push_back({0, "missing vacancies: header"});
    if (!saw_candidates) res.errors.push_back({0, "missing candidates: header"});
    if (res.errors.empty())
        for (const auto& v : validate_election(res.election)) res.errors.push_back({0, v});
    return res;
}

std::string serialize_election(const Election& e) {
    std::ostringstream out;
    out << "name: " << e.name << "\n";
    out << "vacancies: " << e.vacancies << "\n";
    out << "candidates: ";
    for (std::size_t i = 0; i < e.candidates.size(); ++i) {
        if (i) out << ", ";
        out << e.candidates[i].name;
    }
    out << "\n";
    for (const auto& b : e.ballots) {
        out << b.multiplicity << ": ";
        for (std::size_t i = 0; i < b.preferences.size(); ++i) {
            if (i) out << " > ";
            out << e.candidates[b.preferences[i]].name;
        }
        out << "\n";
    }
    return out.str();
}

namespace {

json ruleset_to_json(const Ruleset& r) {
    return json{{"name", r.name},
                {"surplus_method", surplus_method_name(r.surplus_method)},
                {"rounding", rounding_name(r.rounding)},
                {"exhausted_reduce_denominator", r.exhausted_reduce_denominator},
                {"batch_by_incoming_tv", r.batch_by_incoming_tv},
                {"sample_seed", r.sample_seed},
                {"surplus_cap_at_one", r.surplus_cap_at_one}};
}

Ruleset ruleset_from_json(const json& j) {
    Ruleset r;
    r.name = j.at("name").get<std::string>();
    auto method = surplus_method_from_name(j.at("surplus_method").get<std::string>());
    if (!method) throw std::invalid_argument("unknown surplus_method");
    r.surplus_method = *method;
    std::string rounding = j.at("rounding").get<std::string>();
    if (rounding == "exact")
        r.rounding = Rounding::exact;
    else if (rounding == "floor_integer")
        r.rounding = Rounding::floor_integer;
    else if (rounding == "floor_6dp")
        r.rounding = Rounding::floor_6dp;
    else
        throw std::invalid_argument("unknown rounding mode");
    r.exhausted_reduce_denominator = j.at("exhausted_reduce_denominator").get<bool>();
    r.batch_by_incoming_tv = j.at("batch_by_incoming_tv").get<bool>();
    r.sample_seed = j.at("sample_seed").get<std::uint64_t>();
    r.surplus_cap_at_one = j.at("surplus_cap_at_one").get<bool>();
    return r;
}

json step_to_json(const CountStep& s) {
    json j;
    j["index"] = s.index;
    j["action"] = action_kind_name(s.action);
    if (s.source) j["source"] = *s.source;
    j["batch"] = s.batch;
    json credited = json::array();
    for (const auto& [cand, amount] : s.credited)
        credited.push_back(json{{"candidate", cand}, {"amount", amount.str()}});
    j["credited"] = std::move(credited);
    if (s.transfer_value) j["transfer_value"] = s.transfer_value->str();
    json sources = json::array();
    for (const auto& src : s.sources)
        sources.push_back(
            json{{"incoming_tv", src.incoming_tv.str()}, {"papers", src.papers}});
    j["sources"] = std::move(sources);
    j["exhausted_papers"] = s.exhausted_papers;
    j["exhausted_value"] = s.exhausted_value.str();
    j["rounding_loss"] = s.rounding_loss.str();
    j["value_removed"] = s.value_removed.str();
    j["elected"] = s.elected_now;
    if (s.excluded_now) j["excluded"] = *s.excluded_now;
    return j;
}

CountStep step_from_json(const json& j) {
    CountStep s;
    s.index = j.at("index").get<std::uint32_t>();
    std::string action = j.at("action").get<std::string>();
    if (action == "first_preferences")
        s.action = ActionKind::first_preferences;
    else if (action == "surplus")
        s.action = ActionKind::surplus;
    else if (action == "exclusion")
        s.action = ActionKind::exclusion;
    else
        throw std::invalid_argument("unknown action \"" + action + "\"");
    if (j.contains("source")) s.source = j.at("source").get<CandidateIndex>();
    s.batch = j.at("batch").get<std::uint32_t>();
    for (const auto& c : j.at("credited"))
        s.credited.emplace_back(c.at("candidate").get<CandidateIndex>(),
                                Rational::parse(c.at("amount").get<std::string>()));
    if (j.contains("transfer_value"))
        s.transfer_value = Rational::parse(j.at("transfer_value").get<std::string>());
    for (const auto& src : j.at("sources"))
        s.sources.push_back(
            SourceParcel{Rational::parse(src.at("incoming_tv").get<std::string>()),
                         src.at("papers").get<std::int64_t>()});
    s.exhausted_papers = j.at("exhausted_papers").get<std::int64_t>();
    s.exhausted_value = Rational::parse(j.at("exhausted_value").get<std::string>());
    s.rounding_loss = Rational::parse(j.at("rounding_loss").get<std::string>());
    s.value_removed = Rational::parse(j.at("value_removed").get<std::string>());
    s.elected_now = j.at("elected").get<std::vector<CandidateIndex>>();
    if (j.contains("excluded")) s.excluded_now = j.at("excluded").get<CandidateIndex>();
    return s;
}

}  // namespace

std::string serialize_transcript(const CountTranscript& t) {
    json j;
    j["election"] = t.election_name;
    j["candidates"] = t.candidate_names;
    j["vacancies"] = t.vacancies;
    j["total_papers"] = t.total_papers;
    j["ruleset"] = ruleset_to_json(t.ruleset);
    j["quota"] = t.quota.value;
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back(step_to_json(s));
    j["steps"] = std::move(steps);
    j["winners"] = t.winners;
    json finals = json::array();
    for (const auto& f : t.final_states) {
        json jf{{"status", status_name(f.status)}, {"tally", f.tally.str()}};
        if (f.order_elected) jf["order_elected"] = *f.order_elected;
        finals.push_back(std::move(jf));
    }
    j["final"] = std::move(finals);
    return j.dump(2) + "\n";
}

TranscriptParseResult parse_transcript(const std::string& source) {
    TranscriptParseResult res;
    try {
        json j = json::parse(source);
        CountTranscript& t = res.transcript;
        t.election_name = j.at("election").get<std::string>();
        t.candidate_names = j.at("candidates").get<std::vector<std::string>>();
        t.vacancies = j.at("vacancies").get<std::uint32_t>();
        t.total_papers = j.at("total_papers").get<std::int64_t>();
        t.ruleset = ruleset_from_json(j.at("ruleset"));
        t.quota.value = j.at("quota").get<std::int64_t>();
        for (const auto& js : j.at("steps")) t.steps.push_back(step_from_json(js));
        t.winners = j.at("winners").get<std::vector<CandidateIndex>>();
        for (const auto& jf : j.at("final")) {
            FinalCandidate f;
            std::string status = jf.at("status").get<std::string>();
            if (status == "continuing")
                f.status = CandidateStatus::continuing;
            else if (status == "elected")
                f.status = CandidateStatus::elected;
            else if (status == "excluded")
                f.status = CandidateStatus::excluded;
            else
                throw std::invalid_argument("unknown status \"" + status + "\"");
            f.tally = Rational::parse(jf.at("tally").get<std::string>());
            if (jf.contains("order_elected"))
                f.order_elected = jf.at("order_elected").get<std::uint32_t>();
            t.final_states.push_back(std::move(f));
        }
    } catch (const std::exception& err) {
        res.errors.push_back({0, std::string("bad transcript: ") + err.what()});
    }
    return res;
}

}  // namespace stv
