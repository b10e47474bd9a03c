#pragma once
// multiselect.hpp - offline multiselection: answer a batch of select ranks
// while doing only the partial sorting those ranks force. Untouched regions
// keep their windows; the returned state exposes the execution-dependent
// quantities the cost predictors need.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sms/core.hpp"
#include "sms/measures.hpp"
#include "sms/partition.hpp"

namespace sms {

// Sorted, deduplicated ranks with a map back to the caller's order.
struct QueryBatch {
    std::vector<std::size_t> unique_ranks;       // ascending, 1-based
    std::vector<std::size_t> original_to_unique; // per original query

    static QueryBatch from(const std::vector<std::size_t>& ranks, std::size_t n) {
        for (std::size_t r : ranks)
            if (r < 1 || r > n) throw std::out_of_range("select rank outside [1..n]");
        QueryBatch qb;
        qb.unique_ranks = ranks;
        std::sort(qb.unique_ranks.begin(), qb.unique_ranks.end());
        qb.unique_ranks.erase(std::unique(qb.unique_ranks.begin(), qb.unique_ranks.end()),
                              qb.unique_ranks.end());
        qb.original_to_unique.reserve(ranks.size());
        for (std::size_t r : ranks) {
            std::size_t idx = std::lower_bound(qb.unique_ranks.begin(), qb.unique_ranks.end(), r) -
                              qb.unique_ranks.begin();
            qb.original_to_unique.push_back(idx);
        }
        return qb;
    }
};

// What the run left behind: resolved bands, per-run cut positions, and the
// untouched gaps in rank order.
template <typename T>
struct PartialOrderState {
    struct BandInfo {
        std::size_t rank_lo = 0, rank_hi = 0;  // 1-based, inclusive
        BandContent<T> band;
        std::size_t contributing_runs = 0;
        std::size_t multiplicity = 0;  // pivot-valued elements in the band
    };
    struct GapInfo {
        std::size_t rank_lo = 0, rank_hi = 0;
        std::vector<Window> windows;
    };

    std::size_t n = 0;
    std::vector<Window> run_windows;               // the instance's runs
    std::vector<BandInfo> bands;                   // creation order
    std::map<int, std::vector<std::size_t>> cuts;  // run id -> cut positions
    std::vector<GapInfo> gaps;                     // untouched regions

    std::size_t pivot_count() const { return bands.size(); }

    // sizes of the nonempty per-run segments delimited by the recorded cuts
    std::vector<std::size_t> selection_block_sizes() const {
        std::vector<std::size_t> sizes;
        for (const Window& rw : run_windows) {
            std::vector<std::size_t> cs;
            auto it = cuts.find(rw.run);
            if (it != cuts.end()) cs = it->second;
            cs.push_back(rw.lo);
            cs.push_back(rw.hi);
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            for (std::size_t k = 0; k + 1 < cs.size(); ++k)
                if (cs[k + 1] > cs[k]) sizes.push_back(cs[k + 1] - cs[k]);
        }
        return sizes;
    }
    // per pivot value of multiplicity > 1: how many runs hold a piece of it
    std::vector<std::size_t> pivot_block_counts() const {
        std::vector<std::size_t> m;
        for (const BandInfo& b : bands)
            if (b.multiplicity > 1) m.push_back(b.contributing_runs);
        return m;
    }
    // runs with at least one element, per untouched gap, in rank order
    std::vector<std::size_t> segment_run_counts() const {
        std::vector<const GapInfo*> order;
        for (const auto& g : gaps) order.push_back(&g);
        std::sort(order.begin(), order.end(),
                  [](const GapInfo* x, const GapInfo* y) { return x->rank_lo < y->rank_lo; });
        std::vector<std::size_t> counts;
        for (const GapInfo* g : order) {
            std::size_t runs = 0;
            for (const Window& w : g->windows)
                if (!w.empty()) ++runs;
            if (runs) counts.push_back(runs);
        }
        return counts;
    }
};

template <typename T>
struct MultiselectResult {
    std::vector<T> answers;  // caller order
    PartialOrderState<T> state;
    CostReport report;
};

namespace detail {

template <typename T>
void multiselect_over(const InstrumentedArray<T>& a, std::vector<Window> initial,
                      std::size_t base_rank, const QueryBatch& qb, std::size_t qa, std::size_t qb_end,
                      std::vector<T>& unique_answers, PartialOrderState<T>& st) {
    struct Item {
        std::vector<Window> ws;
        std::size_t base;
        std::size_t qa, qb;
    };
    std::vector<Item> stack;
    initial.erase(std::remove_if(initial.begin(), initial.end(),
                                 [](const Window& w) { return w.empty(); }),
                  initial.end());
    if (!initial.empty()) stack.push_back({std::move(initial), base_rank, qa, qb_end});
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        std::size_t total = 0;
        for (const Window& w : it.ws) total += w.size();
        if (it.qa == it.qb) {
            // no queries reach this region: leave it untouched
            st.gaps.push_back({it.base + 1, it.base + total, std::move(it.ws)});
            continue;
        }
        if (it.ws.size() == 1) {
            // one sorted window answers its ranks by offset
            const Window& w = it.ws[0];
            for (std::size_t q = it.qa; q < it.qb; ++q)
                unique_answers[q] = a.value(w.lo + (qb.unique_ranks[q] - it.base) - 1);
            st.gaps.push_back({it.base + 1, it.base + total, std::move(it.ws)});
            continue;
        }
        PartitionOutcome<T> po = partition_step(a, std::span<const Window>(it.ws));
        std::size_t left_total = 0;
        for (const Window& w : po.left) left_total += w.size();
        const std::size_t band_lo = it.base + left_total + 1;
        const std::size_t band_hi = it.base + left_total + po.band.size();
        st.bands.push_back({band_lo, band_hi, po.band, po.contributing_runs, po.mu_multiplicity});
        for (const auto& c : po.cuts) {
            auto& v = st.cuts[c.run];
            v.push_back(c.left_end);
            v.push_back(c.right_begin);
        }
        // route queries: ranks < band_lo left, <= band_hi answered, else right
        const auto rb = qb.unique_ranks.begin();
        std::size_t q_left_end =
            std::lower_bound(rb + it.qa, rb + it.qb, band_lo) - rb;
        std::size_t q_band_end =
            std::upper_bound(rb + q_left_end, rb + it.qb, band_hi) - rb;
        for (std::size_t q = q_left_end; q < q_band_end; ++q)
            unique_answers[q] = po.band.value_at(qb.unique_ranks[q] - band_lo, a);
        if (!po.right.empty())
            stack.push_back({std::move(po.right), band_hi, q_band_end, it.qb});
        if (!po.left.empty())
            stack.push_back({std::move(po.left), it.base, it.qa, q_left_end});
    }
}

template <typename T>
CostReport multiselect_report(const std::string& name, const InstrumentedArray<T>& a,
                              const std::vector<std::size_t>& ranks,
                              const PartialOrderState<T>& st, std::uint64_t comparisons) {
    InstanceProfile p = profile_instance(a);
    CostReport r = make_report(name, p, comparisons);
    if (p.n > 0) {
        r.predictors["envelope"] = predictor_envelope(p.n, ranks);
        auto sel = st.selection_block_sizes();
        r.predictors["multiselect"] = predictor_multiselect(p.n, sel, sel.size(), p.rho,
                                                            st.pivot_block_counts(),
                                                            st.segment_run_counts());
    }
    return r;
}

}  // namespace detail

template <typename T>
MultiselectResult<T> multiselect(const InstrumentedArray<T>& a,
                                 const std::vector<std::size_t>& ranks) {
    QueryBatch qb = QueryBatch::from(ranks, a.size());
    MultiselectResult<T> r;
    std::uint64_t before = a.comparisons();
    r.state.n = a.size();
    RunDecomposition rd = detect_runs(a);
    r.state.run_windows = rd.windows();
    std::vector<T> unique_answers(qb.unique_ranks.size());
    detail::multiselect_over(a, r.state.run_windows, 0, qb, 0, qb.unique_ranks.size(),
                             unique_answers, r.state);
    r.answers.reserve(ranks.size());
    for (std::size_t idx : qb.original_to_unique) r.answers.push_back(unique_answers[idx]);
    r.report = detail::multiselect_report("multiselect", a, ranks, r.state,
                                          a.comparisons() - before);
    return r;
}

// Split at pre-existing pivot positions, route each rank to its piece.
template <typename T>
MultiselectResult<T> multiselect_with_global(const InstrumentedArray<T>& a,
                                             const std::vector<std::size_t>& ranks) {
    QueryBatch qb = QueryBatch::from(ranks, a.size());
    MultiselectResult<T> r;
    std::uint64_t before = a.comparisons();
    r.state.n = a.size();
    PivotPositions pp = detect_pivot_positions(a);
    std::vector<T> unique_answers(qb.unique_ranks.size());
    std::size_t qa = 0;
    for (auto [lo, hi] : split_by_pivot_positions(a.size(), pp)) {
        RunDecomposition rd = detect_runs_range(a, lo, hi);
        auto ws = rd.windows();
        for (Window& w : ws) w.run += static_cast<int>(lo);  // keep run ids unique
        r.state.run_windows.insert(r.state.run_windows.end(), ws.begin(), ws.end());
        std::size_t qe = qa;
        while (qe < qb.unique_ranks.size() && qb.unique_ranks[qe] <= hi) ++qe;
        detail::multiselect_over(a, ws, lo, qb, qa, qe, unique_answers, r.state);
        qa = qe;
    }
    r.answers.reserve(ranks.size());
    for (std::size_t idx : qb.original_to_unique) r.answers.push_back(unique_answers[idx]);
    r.report = detail::multiselect_report("multiselect_global", a, ranks, r.state,
                                          a.comparisons() - before);
    return r;
}

}  // namespace sms
