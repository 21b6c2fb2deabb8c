#include "stv/engine.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>

namespace stv {

const char* action_kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::first_preferences: return "first_preferences";
        case ActionKind::surplus: return "surplus";
        case ActionKind::exclusion: return "exclusion";
    }
    return "?";
}

namespace {

struct RoutedRuns {
    // dest index -> runs landing there, in input run order
    std::map<CandidateIndex, std::vector<PaperRun>> by_dest;
    std::vector<PaperRun> exhausted;
    std::int64_t exhausted_papers = 0;
    std::int64_t continuing_papers = 0;
};

class Counter {
  public:
    Counter(const Election& e, const Ruleset& r)
        : e_(e), r_(r), st_(e.candidates.size()) {}

    CountTranscript run();

  private:
    bool continuing(CandidateIndex c) const {
        return st_[c].status == CandidateStatus::continuing;
    }

    std::uint32_t next_count_index() const {
        return static_cast<std::uint32_t>(steps_.size()) + 1;
    }

    // Advances the cursor past every non-continuing candidate. Returns
    // the run positioned on a continuing candidate, or nullopt if the
    // paper exhausts.
    std::optional<PaperRun> advance(PaperRun run) const {
        const auto& prefs = e_.ballots[run.ballot].preferences;
        while (run.cursor < prefs.size() && !continuing(prefs[run.cursor])) ++run.cursor;
        if (run.cursor >= prefs.size()) return std::nullopt;
        return run;
    }

    RoutedRuns route(const std::vector<PaperRun>& runs) const {
        RoutedRuns out;
        for (const PaperRun& r : runs) {
            if (auto moved = advance(r)) {
                out.by_dest[e_.ballots[moved->ballot].preferences[moved->cursor]]
                    .push_back(*moved);
                out.continuing_papers += r.papers;
            } else {
                out.exhausted.push_back(r);
                out.exhausted_papers += r.papers;
            }
        }
        return out;
    }

    CountStep& emit_batch(ActionKind kind, std::optional<CandidateIndex> source,
                          std::uint32_t batch_no, const std::vector<PaperRun>& runs,
                          const Rational& tv_out, const Rational& exhaust_per_paper,
                          const Rational& value_removed,
                          std::vector<SourceParcel> sources,
                          std::optional<CandidateIndex> excluded_now);

    void elect_check(CountStep& step);
    void snapshot();

    void distribute_first_preferences();
    void distribute_surplus(CandidateIndex c);
    void distribute_surplus_nsw(CandidateIndex c, const Rational& surplus);
    void distribute_surplus_random(CandidateIndex c, const Rational& surplus);
    void exclude_lowest();
    CandidateIndex pick_exclusion() const;
    void fill_remaining();

    std::vector<std::pair<Rational, std::vector<const Parcel*>>> batches_by_tv(
        CandidateIndex c) const;

    const Election& e_;
    const Ruleset& r_;
    Quota quota_;
    std::vector<CandidateState> st_;
    std::vector<bool> surplus_pending_ = std::vector<bool>(e_.candidates.size(), false);
    std::vector<CountStep> steps_;
    std::vector<CandidateIndex> winners_;
    std::uint32_t order_counter_ = 0;
    // Tallies at each decision point (after first preferences and after
    // each completed distribution); drives count-back tie breaking.
    std::vector<std::vector<Rational>> history_;
};

CountStep& Counter::emit_batch(ActionKind kind, std::optional<CandidateIndex> source,
                               std::uint32_t batch_no,
                               const std::vector<PaperRun>& runs, const Rational& tv_out,
                               const Rational& exhaust_per_paper,
                               const Rational& value_removed,
                               std::vector<SourceParcel> sources,
                               std::optional<CandidateIndex> excluded_now) {
    CountStep step;
    step.index = next_count_index();
    step.action = kind;
    step.source = source;
    step.batch = batch_no;
    step.transfer_value = tv_out;
    step.sources = std::move(sources);
    step.excluded_now = excluded_now;
    step.value_removed = value_removed;

    RoutedRuns routed = route(runs);
    Rational credited_total;
    for (auto& [dest, dest_runs] : routed.by_dest) {
        std::int64_t papers = 0;
        for (const auto& r : dest_runs) papers += r.papers;
        Rational exact = tv_out * Rational(papers);
        Rational credited = exact.round_down(r_.rounding);
        st_[dest].tally += credited;
        Parcel parcel;
        parcel.runs = std::move(dest_runs);
        parcel.transfer_value = tv_out;
        parcel.received_at_count = step.index;
        parcel.exact_value = exact;
        parcel.credited_value = credited;
        st_[dest].parcels.push_back(std::move(parcel));
        step.credited.emplace_back(dest, credited);
        credited_total += credited;
    }
    step.exhausted_papers = routed.exhausted_papers;
    step.exhausted_value =
        (exhaust_per_paper * Rational(routed.exhausted_papers)).round_down(r_.rounding);
    step.rounding_loss = value_removed - credited_total - step.exhausted_value;

    steps_.push_back(std::move(step));
    elect_check(steps_.back());
    return steps_.back();
}

void Counter::elect_check(CountStep& step) {
    std::vector<CandidateIndex> crossed;
    for (CandidateIndex c = 0; c < st_.size(); ++c)
        if (continuing(c) && st_[c].tally >= Rational(quota_.value)) crossed.push_back(c);
    std::sort(crossed.begin(), crossed.end(), [&](CandidateIndex a, CandidateIndex b) {
        if (st_[a].tally != st_[b].tally) return st_[a].tally > st_[b].tally;
        return a < b;
    });
    for (CandidateIndex c : crossed) {
        if (winners_.size() >= e_.vacancies) break;
        st_[c].status = CandidateStatus::elected;
        st_[c].order_elected = ++order_counter_;
        surplus_pending_[c] = true;
        winners_.push_back(c);
        step.elected_now.push_back(c);
    }
}

void Counter::snapshot() {
    std::vector<Rational> tallies(st_.size());
    for (CandidateIndex c = 0; c < st_.size(); ++c) tallies[c] = st_[c].tally;
    history_.push_back(std::move(tallies));
}

void Counter::distribute_first_preferences() {
    std::vector<PaperRun> runs;
    runs.reserve(e_.ballots.size());
    for (std::uint32_t b = 0; b < e_.ballots.size(); ++b)
        runs.push_back(PaperRun{b, 0, e_.ballots[b].multiplicity});
    emit_batch(ActionKind::first_preferences, std::nullopt, 1, runs, Rational(1),
               Rational(1), Rational(e_.total_papers()), {}, std::nullopt);
}

// Parcels grouped by distinct incoming transfer value, in first-arrival
// order.
std::vector<std::pair<Rational, std::vector<const Parcel*>>> Counter::batches_by_tv(
    CandidateIndex c) const {
    std::vector<std::pair<Rational, std::vector<const Parcel*>>> batches;
    for (const Parcel& p : st_[c].parcels) {
        auto it = std::find_if(batches.begin(), batches.end(),
                               [&](const auto& b) { return b.first == p.transfer_value; });
        if (it == batches.end())
            batches.push_back({p.transfer_value, {&p}});
        else
            it->second.push_back(&p);
    }
    return batches;
}

void Counter::distribute_surplus(CandidateIndex c) {
    const Rational surplus = st_[c].tally - Rational(quota_.value);
    assert(surplus > Rational(0));

    const bool nsw_fraction =
        r_.exhausted_reduce_denominator && (r_.surplus_method == SurplusMethod::gregory_weighted ||
                                            r_.surplus_method == SurplusMethod::unified_tv);
    if (nsw_fraction) {
        distribute_surplus_nsw(c, surplus);
    } else if (r_.surplus_method == SurplusMethod::random_sample) {
        distribute_surplus_random(c, surplus);
    } else if (r_.surplus_method == SurplusMethod::last_parcel) {
        const Parcel& parcel = st_[c].parcels.back();
        std::int64_t papers = parcel.paper_count();
        RoutedRuns peek = route(parcel.runs);
        Rational tv_out;
        Rational exhaust_per_paper;
        Rational exact_outgoing;  // value leaving on the papers themselves
        if (r_.exhausted_reduce_denominator) {
            // ACT style: exhausted papers are set aside first and the
            // surplus is spread over the live papers only.
            std::int64_t live = peek.continuing_papers;
            tv_out = live == 0 ? Rational(0)
                               : std::min(Rational(1), surplus / Rational(live));
            exhaust_per_paper = Rational(0);
            exact_outgoing = tv_out * Rational(live);
        } else {
            tv_out = std::min(Rational(1), surplus / Rational(papers));
            exhaust_per_paper = tv_out;
            exact_outgoing = tv_out * Rational(papers);
        }
        CountStep& step =
            emit_batch(ActionKind::surplus, c, 1, parcel.runs, tv_out,
                       exhaust_per_paper, surplus, {{parcel.transfer_value, papers}},
                       std::nullopt);
        // When the value-per-paper cap bites, the undistributable part
        // of the surplus stays behind with the exhausted papers.
        Rational credit_sum;
        for (const auto& [dest, amount] : step.credited) credit_sum += amount;
        Rational floored_exhaust = step.exhausted_value;
        step.exhausted_value = floored_exhaust + (surplus - exact_outgoing);
        step.rounding_loss = exact_outgoing - credit_sum - floored_exhaust;
    } else if (r_.surplus_method == SurplusMethod::unified_tv) {
        std::vector<PaperRun> runs;
        std::vector<SourceParcel> sources;
        std::int64_t papers = 0;
        for (const Parcel& p : st_[c].parcels) {
            runs.insert(runs.end(), p.runs.begin(), p.runs.end());
            sources.push_back({p.transfer_value, p.paper_count()});
            papers += p.paper_count();
        }
        Rational tv_out = transfer_value_unified(surplus, papers);
        emit_batch(ActionKind::surplus, c, 1, runs, tv_out, tv_out, surplus,
                   std::move(sources), std::nullopt);
    } else {  // gregory_weighted, exhausted papers keep their share
        Rational total_value;
        for (const Parcel& p : st_[c].parcels) total_value += p.exact_value;
        auto batches = batches_by_tv(c);
        std::uint32_t batch_no = 0;
        for (auto& [tv_in, parcels] : batches) {
            ++batch_no;
            std::vector<PaperRun> runs;
            std::int64_t papers = 0;
            for (const Parcel* p : parcels) {
                runs.insert(runs.end(), p->runs.begin(), p->runs.end());
                papers += p->paper_count();
            }
            Rational tv_out = transfer_value_weighted(tv_in, surplus, total_value);
            Rational removed = tv_out * Rational(papers);
            emit_batch(ActionKind::surplus, c, batch_no, runs, tv_out, tv_out, removed,
                       {{tv_in, papers}}, std::nullopt);
        }
    }

    st_[c].tally = Rational(quota_.value);
    surplus_pending_[c] = false;
}

void Counter::distribute_surplus_nsw(CandidateIndex c, const Rational& surplus) {
    // E: exact aggregate of incoming values of papers that exhaust,
    // determined before any batch moves. V is the rounded tally. The
    // rounding gap between them is what lets E exceed V.
    Rational exhausted_aggregate;
    std::int64_t live_papers = 0;
    for (const Parcel& p : st_[c].parcels) {
        RoutedRuns peek = route(p.runs);
        exhausted_aggregate += p.transfer_value * Rational(peek.exhausted_papers);
        live_papers += peek.continuing_papers;
    }

    if (live_papers == 0) {
        // Everything exhausts; nothing to scale. The surplus leaves with
        // the exhausted papers.
        std::vector<PaperRun> runs;
        std::vector<SourceParcel> sources;
        for (const Parcel& p : st_[c].parcels) {
            runs.insert(runs.end(), p.runs.begin(), p.runs.end());
            sources.push_back({p.transfer_value, p.paper_count()});
        }
        CountStep& step = emit_batch(ActionKind::surplus, c, 1, runs, Rational(0),
                                     Rational(0), surplus, std::move(sources),
                                     std::nullopt);
        step.exhausted_value = step.value_removed;
        step.rounding_loss = Rational(0);
        return;
    }

    Rational fraction;
    try {
        fraction = surplus_fraction_nsw(st_[c].tally, quota_, exhausted_aggregate,
                                        r_.surplus_cap_at_one);
    } catch (const EngineError& err) {
        throw EngineError(err.what(), next_count_index());
    }

    auto batches = batches_by_tv(c);
    // Per-batch removed value is the exact outgoing value of its live
    // papers; the final batch absorbs the remainder so the removals
    // total the surplus. Under a capped fraction the remainder is value
    // staying with exhausted papers, so it is accounted as exhausted
    // value; rounding loss is strictly the exact-vs-floored credit gap.
    std::vector<Rational> exact_credit(batches.size());
    std::vector<Rational> removed(batches.size());
    Rational allocated;
    for (std::size_t i = 0; i < batches.size(); ++i) {
        std::int64_t live = 0;
        for (const Parcel* p : batches[i].second) live += route(p->runs).continuing_papers;
        exact_credit[i] = batches[i].first * fraction * Rational(live);
        removed[i] = exact_credit[i];
        if (i + 1 < batches.size()) allocated += removed[i];
    }
    removed.back() = surplus - allocated;

    for (std::size_t i = 0; i < batches.size(); ++i) {
        std::vector<PaperRun> runs;
        std::int64_t papers = 0;
        for (const Parcel* p : batches[i].second) {
            runs.insert(runs.end(), p->runs.begin(), p->runs.end());
            papers += p->paper_count();
        }
        Rational tv_out = batches[i].first * fraction;
        CountStep& step = emit_batch(ActionKind::surplus, c,
                                     static_cast<std::uint32_t>(i) + 1, runs, tv_out,
                                     Rational(0), removed[i],
                                     {{batches[i].first, papers}}, std::nullopt);
        Rational credit_sum;
        for (const auto& [dest, amount] : step.credited) credit_sum += amount;
        step.exhausted_value = step.value_removed - exact_credit[i];
        step.rounding_loss = exact_credit[i] - credit_sum;
    }
}

void Counter::distribute_surplus_random(CandidateIndex c, const Rational& surplus) {
    std::int64_t total = 0;
    for (const Parcel& p : st_[c].parcels) total += p.paper_count();
    BigInt floor_s = surplus.floor();
    std::int64_t sample_size = static_cast<std::int64_t>(floor_s);
    if (sample_size > total) sample_size = total;
    if (sample_size < 0) sample_size = 0;

    // Deterministic partial Fisher-Yates over the canonical paper order
    // (parcels in arrival order, runs in order, papers expanded).
    std::mt19937_64 rng(r_.sample_seed + 0x9e3779b97f4a7c15ULL *
                                             static_cast<std::uint64_t>(next_count_index()));
    std::map<std::int64_t, std::int64_t> perm;  // sparse identity overlay
    auto at = [&](std::int64_t i) {
        auto it = perm.find(i);
        return it == perm.end() ? i : it->second;
    };
    std::vector<std::int64_t> picked;
    picked.reserve(static_cast<std::size_t>(sample_size));
    for (std::int64_t i = 0; i < sample_size; ++i) {
        std::int64_t j = i + static_cast<std::int64_t>(
                                 rng() % static_cast<std::uint64_t>(total - i));
        std::int64_t vi = at(i), vj = at(j);
        perm[i] = vj;
        perm[j] = vi;
        picked.push_back(vj);
    }
    std::sort(picked.begin(), picked.end());

    std::vector<PaperRun> sampled;
    std::vector<SourceParcel> sources;
    std::int64_t offset = 0;
    std::size_t pi = 0;
    for (const Parcel& p : st_[c].parcels) {
        std::int64_t in_parcel = 0;
        for (const PaperRun& r : p.runs) {
            std::int64_t hit = 0;
            while (pi < picked.size() && picked[pi] < offset + r.papers) {
                ++hit;
                ++pi;
            }
            if (hit > 0) sampled.push_back(PaperRun{r.ballot, r.cursor, hit});
            in_parcel += hit;
            offset += r.papers;
        }
        if (in_parcel > 0) sources.push_back({p.transfer_value, in_parcel});
    }

    emit_batch(ActionKind::surplus, c, 1, sampled, Rational(1), Rational(1), surplus,
               std::move(sources), std::nullopt);
}

CandidateIndex Counter::pick_exclusion() const {
    std::vector<CandidateIndex> tied;
    for (CandidateIndex c = 0; c < st_.size(); ++c) {
        if (!continuing(c)) continue;
        if (tied.empty() || st_[c].tally < st_[tied.front()].tally)
            tied.assign(1, c);
        else if (st_[c].tally == st_[tied.front()].tally)
            tied.push_back(c);
    }
    assert(!tied.empty());
    // Count-back: walk decision points newest-first, narrowing the tied
    // set to the lowest tally wherever they differed.
    for (auto it = history_.rbegin(); it != history_.rend() && tied.size() > 1; ++it) {
        const auto& snap = *it;
        Rational low = snap[tied.front()];
        bool differ = false;
        for (CandidateIndex c : tied) {
            if (snap[c] != low) differ = true;
            if (snap[c] < low) low = snap[c];
        }
        if (!differ) continue;
        std::vector<CandidateIndex> narrowed;
        for (CandidateIndex c : tied)
            if (snap[c] == low) narrowed.push_back(c);
        tied = std::move(narrowed);
    }
    return *std::min_element(tied.begin(), tied.end());
}

void Counter::exclude_lowest() {
    CandidateIndex c = pick_exclusion();
    st_[c].status = CandidateStatus::excluded;
    if (st_[c].parcels.empty()) {
        emit_batch(ActionKind::exclusion, c, 1, {}, Rational(0), Rational(0), Rational(0),
                   {}, c);
    } else {
        // One batch per parcel, arrival order, each rounded separately.
        std::vector<Parcel> parcels = std::move(st_[c].parcels);
        std::uint32_t batch_no = 0;
        for (const Parcel& p : parcels) {
            ++batch_no;
            emit_batch(ActionKind::exclusion, c, batch_no, p.runs, p.transfer_value,
                       p.transfer_value, p.credited_value,
                       {{p.transfer_value, p.paper_count()}},
                       batch_no == 1 ? std::optional<CandidateIndex>(c) : std::nullopt);
        }
    }
    st_[c].tally = Rational(0);
}

void Counter::fill_remaining() {
    std::vector<CandidateIndex> rest;
    for (CandidateIndex c = 0; c < st_.size(); ++c)
        if (continuing(c)) rest.push_back(c);
    std::sort(rest.begin(), rest.end(), [&](CandidateIndex a, CandidateIndex b) {
        if (st_[a].tally != st_[b].tally) return st_[a].tally > st_[b].tally;
        return a < b;
    });
    for (CandidateIndex c : rest) {
        st_[c].status = CandidateStatus::elected;
        st_[c].order_elected = ++order_counter_;
        winners_.push_back(c);
        if (!steps_.empty()) steps_.back().elected_now.push_back(c);
    }
}

CountTranscript Counter::run() {
    quota_ = compute_quota(e_.total_papers(), e_.vacancies);

    distribute_first_preferences();
    snapshot();

    while (true) {
        if (winners_.size() >= e_.vacancies) break;
        std::uint32_t unfilled = e_.vacancies - static_cast<std::uint32_t>(winners_.size());
        std::uint32_t still_continuing = 0;
        for (CandidateIndex c = 0; c < st_.size(); ++c)
            if (continuing(c)) ++still_continuing;
        if (still_continuing == unfilled) {
            fill_remaining();
            break;
        }

        // A surplus of exactly zero produces no distribution step.
        for (CandidateIndex c = 0; c < st_.size(); ++c)
            if (surplus_pending_[c] && st_[c].tally == Rational(quota_.value))
                surplus_pending_[c] = false;

        std::optional<CandidateIndex> next_surplus;
        for (CandidateIndex c = 0; c < st_.size(); ++c) {
            if (!surplus_pending_[c]) continue;
            if (!next_surplus) {
                next_surplus = c;
                continue;
            }
            const Rational& best = st_[*next_surplus].tally;
            if (st_[c].tally > best ||
                (st_[c].tally == best &&
                 *st_[c].order_elected < *st_[*next_surplus].order_elected))
                next_surplus = c;
        }

        if (next_surplus)
            distribute_surplus(*next_surplus);
        else
            exclude_lowest();
        snapshot();
    }

    CountTranscript t;
    t.election_name = e_.name;
    for (const auto& c : e_.candidates) t.candidate_names.push_back(c.name);
    t.vacancies = e_.vacancies;
    t.total_papers = e_.total_papers();
    t.ruleset = r_;
    t.quota = quota_;
    t.steps = std::move(steps_);
    t.winners = std::move(winners_);
    t.final_states.resize(st_.size());
    for (CandidateIndex c = 0; c < st_.size(); ++c) {
        t.final_states[c].status = st_[c].status;
        t.final_states[c].tally = st_[c].tally;
        t.final_states[c].order_elected = st_[c].order_elected;
    }
    return t;
}

}  // namespace

CountTranscript run_count(const Election& e, const Ruleset& r) {
    return Counter(e, r).run();
}

}  // namespace stv
