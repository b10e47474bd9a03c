#pragma once
// sort.hpp - the two synergistic sorters: a merging one built on sorted-set
// union with doubling searches, and a splitting one built on the shared
// partition step.

#include <cstdint>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "sms/baselines.hpp"
#include "sms/core.hpp"
#include "sms/measures.hpp"
#include "sms/partition.hpp"

namespace sms {

// ---------------------------------------------------------------------------
// Sorted-set union with block certification
// ---------------------------------------------------------------------------

template <typename T>
struct UnionOutput {
    std::vector<std::pair<T, std::size_t>> counted;  // ascending values with multiplicities
    std::vector<Window> trace;                       // certified blocks, output order
};

// Heap-driven union of sorted windows. A unique minimum certifies, via one
// doubling search for the runner-up value, a whole block of its run; equal
// minima reveal a value's cross-run multiplicity directly.
template <typename T>
UnionOutput<T> dlm_union(const InstrumentedArray<T>& a, std::span<const Window> windows) {
    UnionOutput<T> out;
    struct Front {
        std::size_t pos;
        std::size_t widx;
    };
    std::vector<Window> ws(windows.begin(), windows.end());
    std::vector<std::size_t> front(ws.size());

    auto front_less = [&a, &ws](const Front& x, const Front& y) {
        cmp_t c = a.cmp_positions(x.pos, y.pos);
        if (c != 0) return c < 0;
        return ws[x.widx].run < ws[y.widx].run;
    };
    auto heap_greater = [&front_less](const Front& x, const Front& y) { return front_less(y, x); };
    std::priority_queue<Front, std::vector<Front>, decltype(heap_greater)> heap(heap_greater);

    for (std::size_t i = 0; i < ws.size(); ++i) {
        front[i] = ws[i].lo;
        if (!ws[i].empty()) heap.push({ws[i].lo, i});
    }

    bool check_merge = false;  // only after a multiplicity event can a value repeat
    auto append = [&](const T& v, std::size_t count, bool check) {
        if (check && !out.counted.empty() && a.cmp_values(out.counted.back().first, v) == 0)
            out.counted.back().second += count;
        else
            out.counted.emplace_back(v, count);
    };

    while (!heap.empty()) {
        Front top = heap.top();
        heap.pop();
        if (heap.empty()) {
            // the remaining tail of this run is one certified block
            const Window& w = ws[top.widx];
            out.trace.push_back({w.run, front[top.widx], w.hi});
            for (std::size_t p = front[top.widx]; p < w.hi; ++p) {
                append(a.value(p), 1, check_merge || p > front[top.widx]);
            }
            front[top.widx] = w.hi;
            continue;
        }
        // collect all fronts equal to the minimum
        std::vector<Front> eq{top};
        bool more = true;
        while (more && !heap.empty()) {
            if (a.cmp_positions(top.pos, heap.top().pos) == 0) {
                eq.push_back(heap.top());
                heap.pop();
            } else {
                more = false;
            }
        }
        if (eq.size() > 1) {
            // multiplicity of this value across runs is now known
            append(a.value(top.pos), eq.size(), check_merge);
            for (const Front& f : eq) {
                const Window& w = ws[f.widx];
                out.trace.push_back({w.run, f.pos, f.pos + 1});
                front[f.widx] = f.pos + 1;
                if (front[f.widx] < w.hi) heap.push({front[f.widx], f.widx});
            }
            check_merge = true;
            continue;
        }
        // unique minimum: certify everything before the runner-up's value
        const Front& second = heap.top();
        const Window& w = ws[top.widx];
        std::size_t boundary = doubling_search_from_left(a, a.value(second.pos),
                                                         SearchMode::first_geq, front[top.widx], w.hi);
        out.trace.push_back({w.run, front[top.widx], boundary});
        for (std::size_t p = front[top.widx]; p < boundary; ++p)
            append(a.value(p), 1, check_merge || p > front[top.widx]);
        check_merge = false;
        front[top.widx] = boundary;
        if (boundary < w.hi) heap.push({boundary, top.widx});
    }
    return out;
}

template <typename T>
struct DlmSortResult {
    CountedSortedMultiset<T> sorted;
    UnionOutput<T> union_output;
    CostReport report;
};

template <typename T>
DlmSortResult<T> dlm_sort(const InstrumentedArray<T>& a) {
    DlmSortResult<T> r;
    std::uint64_t before = a.comparisons();
    RunDecomposition rd = detect_runs(a);
    auto ws = rd.windows();
    r.union_output = dlm_union(a, std::span<const Window>(ws));
    r.sorted.entries = r.union_output.counted;
    r.report = make_report("dlm_sort", profile_instance(a), a.comparisons() - before);
    return r;
}

// ---------------------------------------------------------------------------
// Splitting sorter
// ---------------------------------------------------------------------------

namespace detail {

// Depth-first left-to-right sweep over the partition tree with an explicit
// stack. Each sub-instance either collapses to a single sorted window or
// splits into left windows, a resolved band, and right windows.
template <typename T, typename WindowSink, typename BandSink>
void split_sort_over(const InstrumentedArray<T>& a, std::vector<Window> initial,
                     WindowSink&& on_window, BandSink&& on_band,
                     std::vector<std::size_t>* pivot_positions = nullptr) {
    using Item = std::variant<std::vector<Window>, BandContent<T>>;
    std::vector<Item> stack;
    initial.erase(std::remove_if(initial.begin(), initial.end(),
                                 [](const Window& w) { return w.empty(); }),
                  initial.end());
    if (!initial.empty()) stack.emplace_back(std::move(initial));
    while (!stack.empty()) {
        Item item = std::move(stack.back());
        stack.pop_back();
        if (std::holds_alternative<BandContent<T>>(item)) {
            on_band(std::get<BandContent<T>>(item));
            continue;
        }
        auto& ws = std::get<std::vector<Window>>(item);
        if (ws.size() == 1) {
            on_window(ws[0]);
            continue;
        }
        PartitionOutcome<T> po = partition_step(a, std::span<const Window>(ws));
        if (pivot_positions) pivot_positions->push_back(po.mu_pos);
        if (!po.right.empty()) stack.emplace_back(std::move(po.right));
        stack.emplace_back(std::move(po.band));
        if (!po.left.empty()) stack.emplace_back(std::move(po.left));
    }
}

template <typename T>
void append_band(const InstrumentedArray<T>& a, const BandContent<T>& b, std::vector<T>& out) {
    for (std::size_t p = b.lo; p < b.ext_at; ++p) out.push_back(a.value(p));
    out.insert(out.end(), b.ext_count, b.ext_value);
    for (std::size_t p = b.ext_at; p < b.hi; ++p) out.push_back(a.value(p));
}

}  // namespace detail

template <typename T>
struct SplitSortResult {
    std::vector<T> sorted;
    CostReport report;
    std::vector<std::size_t> pivot_positions;  // pivot elements, recursion order
};

// Sort a contiguous range by repeated median-of-middles partitioning.
template <typename T>
std::vector<T> quick_synergy_sort_range(const InstrumentedArray<T>& a, std::size_t lo,
                                        std::size_t hi,
                                        std::vector<std::size_t>* pivots = nullptr) {
    std::vector<T> out;
    out.reserve(hi - lo);
    RunDecomposition rd = detect_runs_range(a, lo, hi);
    detail::split_sort_over(
        a, rd.windows(),
        [&](const Window& w) {
            for (std::size_t p = w.lo; p < w.hi; ++p) out.push_back(a.value(p));
        },
        [&](const BandContent<T>& b) { detail::append_band(a, b, out); }, pivots);
    return out;
}

template <typename T>
SplitSortResult<T> quick_synergy_sort(const InstrumentedArray<T>& a) {
    SplitSortResult<T> r;
    std::uint64_t before = a.comparisons();
    r.sorted = quick_synergy_sort_range(a, 0, a.size(), &r.pivot_positions);
    r.report = make_report("quick_synergy_sort", profile_instance(a), a.comparisons() - before);
    return r;
}

// Split at pre-existing pivot positions first, then sort each piece.
template <typename T>
SplitSortResult<T> global_sort(const InstrumentedArray<T>& a) {
    SplitSortResult<T> r;
    std::uint64_t before = a.comparisons();
    PivotPositions pp = detect_pivot_positions(a);
    for (auto [lo, hi] : split_by_pivot_positions(a.size(), pp)) {
        std::vector<T> piece = quick_synergy_sort_range(a, lo, hi, &r.pivot_positions);
        r.sorted.insert(r.sorted.end(), piece.begin(), piece.end());
    }
    r.report = make_report("global_sort", profile_instance(a), a.comparisons() - before);
    return r;
}

}  // namespace sms
