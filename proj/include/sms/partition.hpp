#pragma once
// partition.hpp - one splitting step shared by the synergistic sorter, the
// multiselection algorithm and the deferred structures: pick the median of
// the windows' middles, cut every window at that value, and carve out the
// middle band whose final ranks are now known.

#include <cstddef>
#include <vector>

#include "sms/core.hpp"

namespace sms {

// The resolved middle band: a contiguous stretch of the owner run plus the
// equal-to-pivot elements collected from the other runs, logically spliced
// in at ext_at. Content reads are free; count_less charges one comparison
// per binary probe.
template <typename T>
struct BandContent {
    int run = -1;
    std::size_t lo = 0, hi = 0;  // owner-run segment [lo, hi)
    std::size_t ext_at = 0;      // a[lo..ext_at), ext_value x ext_count, a[ext_at..hi)
    std::size_t ext_count = 0;
    T ext_value{};

    std::size_t size() const { return (hi - lo) + ext_count; }
    const T& value_at(std::size_t off, const InstrumentedArray<T>& a) const {
        std::size_t head = ext_at - lo;
        if (off < head) return a.value(lo + off);
        if (off < head + ext_count) return ext_value;
        return a.value(lo + off - ext_count);
    }
    const T& min_value(const InstrumentedArray<T>& a) const { return value_at(0, a); }
    const T& max_value(const InstrumentedArray<T>& a) const { return value_at(size() - 1, a); }
    // number of band elements strictly smaller than x
    std::size_t count_less(const T& x, const InstrumentedArray<T>& a) const {
        std::size_t l = 0, h = size();
        while (l < h) {
            std::size_t m = l + (h - l) / 2;
            if (a.cmp_values(value_at(m, a), x) < 0) l = m + 1;
            else h = m;
        }
        return l;
    }
};

struct RunCut {
    int run;
    std::size_t left_end;     // elements [window.lo, left_end) went left
    std::size_t right_begin;  // elements [right_begin, window.hi) went right
};

template <typename T>
struct PartitionOutcome {
    std::vector<Window> left, right;  // nonempty leftovers, input order
    BandContent<T> band;
    std::size_t mu_pos = 0;  // position of the pivot element
    std::vector<RunCut> cuts;

    // analysis only (computed without charged comparisons)
    std::size_t active_runs = 0;
    std::size_t contributing_runs = 0;  // runs with a pivot-valued element in the band
    std::size_t mu_multiplicity = 0;    // pivot-valued elements in the band
};

// phase accounting for tuning and tests; charged comparisons only
struct PartitionPhaseTally {
    std::uint64_t median = 0, boundaries = 0, minmax = 0, owner = 0;
    void reset() { median = boundaries = minmax = owner = 0; }
};
inline PartitionPhaseTally& partition_phase_tally() {
    static thread_local PartitionPhaseTally t;
    return t;
}

// One splitting step over >= 2 nonempty single-run windows.
//
// The boundary searches reuse, at no cost, the relation of each window's
// middle to the pivot established while selecting the median: each unknown
// boundary lies in a known half of the window, and is located by racing a
// doubling search from each end of that half.
template <typename T>
PartitionOutcome<T> partition_step(const InstrumentedArray<T>& a, std::span<const Window> ws) {
    PartitionOutcome<T> out;
    out.active_runs = ws.size();
    PartitionPhaseTally& tally = partition_phase_tally();
    std::uint64_t mark = a.comparisons();
    MedianResult med = median_of_middles(a, ws);
    tally.median += a.comparisons() - mark;
    mark = a.comparisons();
    const std::size_t j = med.owner;
    const std::size_t mu_pos = med.middle_pos;
    const T mu = a.value(mu_pos);
    out.mu_pos = mu_pos;

    // equal range of mu in every window except the owner
    std::vector<std::size_t> b1(ws.size()), b2(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i == j) continue;
        const Window& w = ws[i];
        const std::size_t mid = middle_position(w);
        if (med.relations[i] == Rel::eq) {
            b1[i] = detail::race_boundary(a, mu, SearchMode::first_geq, w.lo, mid + 1, true).pos;
            b2[i] = detail::race_boundary(a, mu, SearchMode::first_gt, mid + 1, w.hi).pos;
        } else if (med.relations[i] == Rel::lt) {
            // middle < mu: both boundaries in (mid, hi]
            auto r1 = detail::race_boundary(a, mu, SearchMode::first_geq, mid + 1, w.hi);
            b1[i] = r1.pos;
            if (r1.pos == w.hi || !r1.saw_equal)
                b2[i] = r1.pos;  // mu absent beyond the boundary
            else
                b2[i] = detail::race_boundary(a, mu, SearchMode::first_gt, r1.pos + 1, w.hi).pos;
        } else {
            // middle > mu: both boundaries in [lo, mid]
            auto r2 = detail::race_boundary(a, mu, SearchMode::first_gt, w.lo, mid + 1, true);
            b2[i] = r2.pos;
            if (r2.pos == w.lo || !r2.saw_equal)
                b1[i] = r2.pos;
            else
                b1[i] = detail::race_boundary(a, mu, SearchMode::first_geq, w.lo, r2.pos, true).pos;
        }
    }

    tally.boundaries += a.comparisons() - mark;
    mark = a.comparisons();

    // largest element below mu and smallest above it, across the other runs
    bool have_maxl = false, have_minr = false;
    std::size_t maxl_pos = 0, minr_pos = 0;
    std::size_t ext_count = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i == j) continue;
        ext_count += b2[i] - b1[i];
        if (b1[i] > ws[i].lo) {
            std::size_t cand = b1[i] - 1;
            if (!have_maxl) {
                maxl_pos = cand;
                have_maxl = true;
            } else if (a.cmp_positions(cand, maxl_pos) > 0) {
                maxl_pos = cand;
            }
        }
        if (b2[i] < ws[i].hi) {
            std::size_t cand = b2[i];
            if (!have_minr) {
                minr_pos = cand;
                have_minr = true;
            } else if (a.cmp_positions(cand, minr_pos) < 0) {
                minr_pos = cand;
            }
        }
    }

    tally.minmax += a.comparisons() - mark;
    mark = a.comparisons();

    // owner-run boundaries, anchored at the pivot
    const Window& wj = ws[j];
    std::size_t left_end_j, right_begin_j, gt_j;
    if (have_maxl)
        left_end_j =
            detail::race_boundary(a, a.value(maxl_pos), SearchMode::first_gt, wj.lo, mu_pos + 1, true).pos;
    else
        left_end_j = detail::race_boundary(a, mu, SearchMode::first_geq, wj.lo, mu_pos + 1, true).pos;

    bool need_gt = ext_count > 0 || !have_minr;
    gt_j = need_gt ? detail::race_boundary(a, mu, SearchMode::first_gt, mu_pos + 1, wj.hi).pos
                   : mu_pos + 1;  // placeholder; unused when ext_count == 0
    if (have_minr)
        right_begin_j = detail::race_boundary(a, a.value(minr_pos), SearchMode::first_geq,
                                              need_gt ? gt_j : mu_pos + 1, wj.hi)
                            .pos;
    else
        right_begin_j = gt_j;

    tally.owner += a.comparisons() - mark;

    out.band.run = wj.run;
    out.band.lo = left_end_j;
    out.band.hi = right_begin_j;
    out.band.ext_at = need_gt ? gt_j : right_begin_j;
    out.band.ext_count = ext_count;
    out.band.ext_value = mu;

    for (std::size_t i = 0; i < ws.size(); ++i) {
        const Window& w = ws[i];
        std::size_t le = (i == j) ? left_end_j : b1[i];
        std::size_t rb = (i == j) ? right_begin_j : b2[i];
        out.cuts.push_back({w.run, le, rb});
        if (le > w.lo) out.left.push_back({w.run, w.lo, le});
        if (rb < w.hi) out.right.push_back({w.run, rb, w.hi});
    }

    // analysis: pivot multiplicity inside the band, uncounted raw reads
    std::size_t eq_in_j = 1;
    {
        const auto& vals = a.values();
        for (std::size_t p = mu_pos; p > out.band.lo && !(vals[p - 1] < mu); --p) ++eq_in_j;
        for (std::size_t p = mu_pos + 1; p < out.band.hi && !(mu < vals[p]); ++p) ++eq_in_j;
    }
    out.mu_multiplicity = eq_in_j + ext_count;
    out.contributing_runs = 1;
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (i != j && b2[i] > b1[i]) ++out.contributing_runs;
    return out;
}

}  // namespace sms
