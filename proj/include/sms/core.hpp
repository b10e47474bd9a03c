#pragma once
// core.hpp - instrumented multiset array plus the primitives everything else
// is built from: run detection, pivot-position detection, doubling searches
// and the median-of-middles selection.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sms {

using cmp_t = int;  // three-way outcome: <0, 0, >0

// A multiset held in input order with a tally of every key-vs-key comparison
// spent on it. One logical three-way comparison is charged exactly once;
// reading a value or doing index arithmetic is free.
template <typename T = std::int64_t>
class InstrumentedArray {
public:
    using value_type = T;

    InstrumentedArray() = default;
    explicit InstrumentedArray(std::vector<T> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const T& value(std::size_t i) const { return values_[i]; }
    const std::vector<T>& values() const { return values_; }

    std::uint64_t comparisons() const { return comparisons_; }

    cmp_t cmp_values(const T& a, const T& b) const {
        ++comparisons_;
        if (a < b) return -1;
        if (b < a) return 1;
        return 0;
    }
    cmp_t cmp_positions(std::size_t i, std::size_t j) const {
        return cmp_values(values_[i], values_[j]);
    }
    // v versus the element at i (counted once).
    cmp_t cmp_value_at(const T& v, std::size_t i) const {
        return cmp_values(v, values_[i]);
    }

private:
    std::vector<T> values_;
    mutable std::uint64_t comparisons_ = 0;
};

// A contiguous slice [lo, hi) of the input belonging to one run.
struct Window {
    int run = -1;
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t size() const { return hi - lo; }
    bool empty() const { return hi == lo; }
};

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

// Maximal non-decreasing segments, left to right. `starts[k]` is the first
// index of run k; segment k ends where segment k+1 starts.
struct RunDecomposition {
    std::vector<std::size_t> starts;
    std::size_t n = 0;

    std::size_t count() const { return starts.size(); }
    std::size_t run_end(std::size_t k) const {
        return k + 1 < starts.size() ? starts[k + 1] : n;
    }
    Window window(std::size_t k) const {
        return Window{static_cast<int>(k), starts[k], run_end(k)};
    }
    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s(starts.size());
        for (std::size_t k = 0; k < starts.size(); ++k) s[k] = run_end(k) - starts[k];
        return s;
    }
    std::vector<Window> windows() const {
        std::vector<Window> w(starts.size());
        for (std::size_t k = 0; k < starts.size(); ++k) w[k] = window(k);
        return w;
    }
};

// Linear scan over [lo, hi); exactly max(len-1, 0) comparisons. Run ids are
// numbered from `first_run_id` so sub-ranges can keep globally unique ids.
template <typename T>
RunDecomposition detect_runs_range(const InstrumentedArray<T>& a, std::size_t lo, std::size_t hi) {
    RunDecomposition rd;
    rd.n = hi;
    if (lo >= hi) return rd;
    rd.starts.push_back(lo);
    for (std::size_t i = lo + 1; i < hi; ++i)
        if (a.cmp_positions(i - 1, i) > 0) rd.starts.push_back(i);
    return rd;
}

template <typename T>
RunDecomposition detect_runs(const InstrumentedArray<T>& a) {
    return detect_runs_range(a, 0, a.size());
}

// ---------------------------------------------------------------------------
// Pivot positions (global order)
// ---------------------------------------------------------------------------

// Interior positions p (1-based, p in [2..n]) such that every element before
// p is <= every element at or after p.
struct PivotPositions {
    std::vector<std::size_t> positions;
    std::size_t count() const { return positions.size(); }
};

// One prefix-maximum sweep, one suffix-minimum sweep, one test per interior
// position: at most 3(n-1) comparisons.
template <typename T>
PivotPositions detect_pivot_positions(const InstrumentedArray<T>& a) {
    PivotPositions pp;
    const std::size_t n = a.size();
    if (n <= 1) return pp;

    std::vector<std::size_t> prefix_max(n), suffix_min(n);
    prefix_max[0] = 0;
    for (std::size_t i = 1; i < n; ++i)
        prefix_max[i] = a.cmp_positions(prefix_max[i - 1], i) > 0 ? prefix_max[i - 1] : i;
    suffix_min[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;)
        suffix_min[i] = a.cmp_positions(i, suffix_min[i + 1]) <= 0 ? i : suffix_min[i + 1];

    for (std::size_t p = 2; p <= n; ++p) {
        // 0-based split index s: prefix [0, s), suffix [s, n)
        const std::size_t s = p - 1;
        if (a.cmp_positions(prefix_max[s - 1], suffix_min[s]) <= 0) pp.positions.push_back(p);
    }
    return pp;
}

// phi+1 contiguous input segments [lo, hi), 0-based, covering [0, n).
inline std::vector<std::pair<std::size_t, std::size_t>>
split_by_pivot_positions(std::size_t n, const PivotPositions& pp) {
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    std::size_t lo = 0;
    for (std::size_t p : pp.positions) {
        segs.emplace_back(lo, p - 1);
        lo = p - 1;
    }
    segs.emplace_back(lo, n);
    return segs;
}

// ---------------------------------------------------------------------------
// Doubling searches
// ---------------------------------------------------------------------------

enum class SearchMode { first_geq, first_gt };

struct Anchor {
    enum Kind { left_end, right_end, position } kind = left_end;
    std::size_t pos = 0;  // absolute index, used when kind == position
    static Anchor left() { return {left_end, 0}; }
    static Anchor right() { return {right_end, 0}; }
    static Anchor at(std::size_t p) { return {position, p}; }
};

namespace detail {

// pred(i) == true  <=>  a[i] >= v (first_geq) or a[i] > v (first_gt).
// pred is monotone over a sorted window: false... then true...
template <typename T>
inline bool probe_pred(const InstrumentedArray<T>& a, const T& v, SearchMode m,
                       std::size_t i, cmp_t* out_cmp = nullptr) {
    cmp_t c = a.cmp_value_at(v, i);  // v vs a[i]
    if (out_cmp) *out_cmp = c;
    return m == SearchMode::first_geq ? c <= 0 : c < 0;
}

// One-comparison-at-a-time search for the first index in [lo, hi) whose
// element satisfies `mode` against v (hi if none). Gallops from one end of
// the window, then binary-searches the bracketed stretch. The boundary lands
// within 2*ceil(log2(d+2))+2 comparisons of the galloping end.
template <typename T>
class BoundaryStepper {
public:
    // If edge_known is true the galloping-end element's outcome is already
    // known (true for a right gallop, false for a left one) and is not
    // re-probed.
    BoundaryStepper(const InstrumentedArray<T>& a, const T& v, SearchMode mode,
                    std::size_t lo, std::size_t hi, bool from_left, bool edge_known = false)
        : a_(&a), v_(&v), mode_(mode), lo_(lo), hi_(hi), from_left_(from_left) {
        if (lo_ >= hi_) {
            finish(lo_);
            return;
        }
        if (edge_known) {
            if (from_left_) {
                low_false_ = lo_;
                off_ = 1;
                state_ = State::gallop;
            } else {
                high_true_ = hi_ - 1;
                off_ = 1;
                state_ = State::gallop;
            }
            settle();
        }
    }

    bool done() const { return state_ == State::finished; }
    std::size_t result() const { return result_; }
    // For first_geq, any equal probe proves the boundary element equals v;
    // for first_gt, it proves the element just before the boundary does.
    // So saw_equal() is exactly the "v present at the boundary" test.
    bool saw_equal() const { return saw_equal_; }

    // Performs exactly one comparison (unless already done).
    void step() {
        if (done()) return;
        cmp_t c = 0;
        switch (state_) {
            case State::start: {
                std::size_t p = from_left_ ? lo_ : hi_ - 1;
                bool t = probe(p, &c);
                if (from_left_) {
                    if (t) finish(lo_);
                    else {
                        low_false_ = lo_;
                        off_ = 1;
                        state_ = State::gallop;
                    }
                } else {
                    if (t) {
                        high_true_ = p;
                        off_ = 1;
                        state_ = State::gallop;
                    } else {
                        finish(hi_);
                    }
                }
                break;
            }
            case State::gallop: {
                if (from_left_) {
                    std::size_t p = lo_ + off_;  // offsets 1, 3, 7, ...
                    if (probe(p, &c)) begin_binary(low_false_ + 1, p);
                    else {
                        low_false_ = p;
                        off_ = off_ * 2 + 1;
                    }
                } else {
                    std::size_t p = hi_ - 1 - off_;
                    if (probe(p, &c)) {
                        high_true_ = p;
                        off_ = off_ * 2 + 1;
                    } else {
                        begin_binary(p + 1, high_true_);
                    }
                }
                break;
            }
            case State::binary: {
                std::size_t mid = bin_lo_ + (bin_hi_ - bin_lo_) / 2;
                if (probe(mid, &c)) bin_hi_ = mid;
                else bin_lo_ = mid + 1;
                break;
            }
            case State::finished: break;
        }
        settle();
    }

    std::size_t run_to_done() {
        while (!done()) step();
        return result_;
    }

private:
    enum class State { start, gallop, binary, finished };

    bool probe(std::size_t i, cmp_t* c) {
        bool t = probe_pred(*a_, *v_, mode_, i, c);
        if (*c == 0) saw_equal_ = true;
        return t;
    }
    void begin_binary(std::size_t l, std::size_t h) {
        bin_lo_ = l;
        bin_hi_ = h;
        state_ = State::binary;
    }
    // resolve comparison-free transitions
    void settle() {
        if (state_ == State::gallop) {
            if (from_left_) {
                if (lo_ + off_ >= hi_) begin_binary(low_false_ + 1, hi_);
            } else {
                if (off_ > hi_ - 1 - lo_) begin_binary(lo_, high_true_);
            }
        }
        if (state_ == State::binary && bin_lo_ >= bin_hi_) finish(bin_lo_);
    }
    void finish(std::size_t r) {
        result_ = r;
        state_ = State::finished;
    }

    const InstrumentedArray<T>* a_;
    const T* v_;
    SearchMode mode_;
    std::size_t lo_, hi_;
    bool from_left_;
    State state_ = State::start;
    std::size_t off_ = 0;
    std::size_t low_false_ = 0;   // from-left: last failing offset position
    std::size_t high_true_ = 0;   // from-right: leftmost known-true position
    std::size_t bin_lo_ = 0, bin_hi_ = 0;
    std::size_t result_ = 0;
    bool saw_equal_ = false;
};

struct BoundaryResult {
    std::size_t pos = 0;
    // first_geq: v present at the boundary element (pos < hi);
    // first_gt: v present just before the boundary (pos > lo).
    bool saw_equal = false;
};

// Locate one boundary in [lo, hi) by racing a gallop from each end, strictly
// alternating single comparisons (left side moves first). Total cost is
// within a constant of 4*log2(min(distance-from-left, distance-from-right)).
template <typename T>
BoundaryResult race_boundary(const InstrumentedArray<T>& a, const T& v, SearchMode mode,
                             std::size_t lo, std::size_t hi,
                             bool right_edge_known_true = false) {
    BoundaryResult out;
    if (lo >= hi) {
        out.pos = lo;
        return out;
    }
    BoundaryStepper<T> fwd(a, v, mode, lo, hi, true);
    BoundaryStepper<T> bwd(a, v, mode, lo, hi, false, right_edge_known_true);
    const BoundaryStepper<T>* winner = nullptr;
    while (true) {
        if (bwd.done()) {
            winner = &bwd;
            break;
        }
        if (fwd.done()) {
            winner = &fwd;
            break;
        }
        fwd.step();
        if (fwd.done()) {
            winner = &fwd;
            break;
        }
        bwd.step();
    }
    out.pos = winner->result();
    out.saw_equal = fwd.saw_equal() || bwd.saw_equal();
    return out;
}

}  // namespace detail

// First index in [lo, hi) satisfying `mode` against v (hi if none), galloping
// from the left end. Comparisons <= 2*ceil(log2(d+2)) + 2 where d is the
// distance from the anchor end to the returned boundary.
template <typename T>
std::size_t doubling_search_from_left(const InstrumentedArray<T>& a, const T& v,
                                      SearchMode mode, std::size_t lo, std::size_t hi) {
    detail::BoundaryStepper<T> s(a, v, mode, lo, hi, true);
    return s.run_to_done();
}

template <typename T>
std::size_t doubling_search_from_right(const InstrumentedArray<T>& a, const T& v,
                                       SearchMode mode, std::size_t lo, std::size_t hi) {
    detail::BoundaryStepper<T> s(a, v, mode, lo, hi, false);
    return s.run_to_done();
}

// Anchored at an interior position: one probe decides the direction, then a
// gallop with offsets 1, 2, 4, ... away from the anchor.
template <typename T>
std::size_t doubling_search_from_pos(const InstrumentedArray<T>& a, const T& v,
                                     SearchMode mode, std::size_t lo, std::size_t hi,
                                     std::size_t pos) {
    if (lo >= hi) return lo;
    if (pos >= hi) pos = hi - 1;
    if (pos < lo) pos = lo;
    if (detail::probe_pred(a, v, mode, pos)) {
        // boundary <= pos: gallop left
        std::size_t known_true = pos;
        std::size_t off = 1;
        while (pos >= lo + off) {
            std::size_t p = pos - off;
            if (!detail::probe_pred(a, v, mode, p)) {
                // p failed, known_true holds: binary over (p, known_true]
                std::size_t bl = p + 1, bh = known_true;
                while (bl < bh) {
                    std::size_t mid = bl + (bh - bl) / 2;
                    if (detail::probe_pred(a, v, mode, mid)) bh = mid;
                    else bl = mid + 1;
                }
                return bl;
            }
            known_true = p;
            off *= 2;
        }
        std::size_t bl = lo, bh = known_true;
        while (bl < bh) {
            std::size_t mid = bl + (bh - bl) / 2;
            if (detail::probe_pred(a, v, mode, mid)) bh = mid;
            else bl = mid + 1;
        }
        return bl;
    }
    // boundary > pos: gallop right
    std::size_t known_false = pos;
    std::size_t off = 1;
    while (pos + off < hi) {
        std::size_t p = pos + off;
        if (detail::probe_pred(a, v, mode, p)) {
            std::size_t bl = known_false + 1, bh = p;
            while (bl < bh) {
                std::size_t mid = bl + (bh - bl) / 2;
                if (detail::probe_pred(a, v, mode, mid)) bh = mid;
                else bl = mid + 1;
            }
            return bl;
        }
        known_false = p;
        off *= 2;
    }
    std::size_t bl = known_false + 1, bh = hi;
    while (bl < bh) {
        std::size_t mid = bl + (bh - bl) / 2;
        if (detail::probe_pred(a, v, mode, mid)) bh = mid;
        else bl = mid + 1;
    }
    return bl;
}

template <typename T>
std::size_t doubling_search(const InstrumentedArray<T>& a, Window w, const T& v,
                            Anchor anchor, SearchMode mode) {
    switch (anchor.kind) {
        case Anchor::left_end: return doubling_search_from_left(a, v, mode, w.lo, w.hi);
        case Anchor::right_end: return doubling_search_from_right(a, v, mode, w.lo, w.hi);
        default: return doubling_search_from_pos(a, v, mode, w.lo, w.hi, anchor.pos);
    }
}

struct EqualRange {
    std::size_t first_geq = 0;
    std::size_t first_gt = 0;
    std::size_t count() const { return first_gt - first_geq; }
};

// Equal-range of v in the sorted window [lo, hi). Probes alternate strictly
// between a forward search from the left end and a backward search from the
// right end; once one side resolves, the other is finished by racing its
// remaining gallop against a fresh search anchored at the known equal block.
template <typename T>
EqualRange doubling_search_bidir(const InstrumentedArray<T>& a, const T& v,
                                 std::size_t lo, std::size_t hi) {
    EqualRange er{lo, lo};
    if (lo >= hi) return er;
    detail::BoundaryStepper<T> fwd(a, v, SearchMode::first_geq, lo, hi, true);
    detail::BoundaryStepper<T> bwd(a, v, SearchMode::first_gt, lo, hi, false);
    while (!fwd.done() && !bwd.done()) {
        fwd.step();
        if (fwd.done()) break;
        bwd.step();
    }
    if (fwd.done()) {
        std::size_t b1 = fwd.result();
        er.first_geq = b1;
        if (b1 == hi) {  // all elements < v
            er.first_gt = hi;
            return er;
        }
        if (!fwd.saw_equal()) {  // a[b1] > v: v absent
            er.first_gt = b1;
            return er;
        }
        // v present: race the pending backward search against a search
        // anchored just past the known equal element.
        detail::BoundaryStepper<T> anch(a, v, SearchMode::first_gt, b1, hi, true, true);
        while (!anch.done() && !bwd.done()) {
            anch.step();
            if (anch.done()) break;
            bwd.step();
        }
        er.first_gt = anch.done() ? anch.result() : bwd.result();
        return er;
    }
    // backward side finished first
    std::size_t b2 = bwd.result();
    er.first_gt = b2;
    if (b2 == lo) {  // all elements > v
        er.first_geq = lo;
        return er;
    }
    if (!bwd.saw_equal()) {  // a[b2-1] < v: v absent
        er.first_geq = b2;
        return er;
    }
    // v present at b2-1: race the pending forward search against a search
    // over [lo, b2) whose right edge is the known equal element.
    detail::BoundaryStepper<T> anch(a, v, SearchMode::first_geq, lo, b2, false, true);
    while (!anch.done() && !fwd.done()) {
        anch.step();
        if (anch.done()) break;
        fwd.step();
    }
    er.first_geq = anch.done() ? anch.result() : fwd.result();
    return er;
}

template <typename T>
EqualRange doubling_search_bidir(const InstrumentedArray<T>& a, Window w, const T& v) {
    return doubling_search_bidir(a, v, w.lo, w.hi);
}

// ---------------------------------------------------------------------------
// Median of the middles
// ---------------------------------------------------------------------------

enum class Rel : signed char { lt = -1, eq = 0, gt = 1 };

struct MedianResult {
    std::size_t middle_pos = 0;  // absolute index of the chosen middle element
    std::size_t owner = 0;       // index into the window span
    std::vector<Rel> relations;  // each window's middle value vs the median value
};

namespace detail {

struct MidItem {
    std::size_t pos;   // absolute index
    std::size_t widx;  // window index (tie-break order)
};

// Three-way by value (counted), ties by window index (free).
template <typename T>
inline cmp_t mid_cmp(const InstrumentedArray<T>& a, const MidItem& x, const MidItem& y) {
    cmp_t c = a.cmp_positions(x.pos, y.pos);
    if (c != 0) return c;
    if (x.widx < y.widx) return -1;
    if (x.widx > y.widx) return 1;
    return 0;
}

// Median of a tiny group by insertion sort (counted value comparisons).
template <typename T>
inline MidItem small_median(const InstrumentedArray<T>& a, std::span<MidItem> g) {
    for (std::size_t i = 1; i < g.size(); ++i) {
        MidItem x = g[i];
        std::size_t j = i;
        while (j > 0 && mid_cmp(a, x, g[j - 1]) < 0) {
            g[j] = g[j - 1];
            --j;
        }
        g[j] = x;
    }
    return g[g.size() / 2];
}

// Deterministic quickselect with a median-of-medians fallback after two
// rounds of weak progress; worst case linear comparisons. The first round
// uses the middle item as pivot, so an all-equal input costs exactly m-1;
// later rounds pick the median of a small evenly spread sample to keep the
// expected constant low.
template <typename T>
MidItem select_kth(const InstrumentedArray<T>& a, std::vector<MidItem>& items, std::size_t k,
                   std::vector<Rel>& rel_out) {
    std::size_t bad_rounds = 0;
    std::size_t round = 0;
    std::vector<MidItem> lt, eq, gt;
    while (true) {
        if (items.size() == 1) {
            MidItem only = items[0];
            rel_out[only.widx] = Rel::eq;
            return only;
        }
        MidItem pivot;
        if (bad_rounds >= 2) {
            // median of medians of fives
            std::vector<MidItem> meds;
            meds.reserve(items.size() / 5 + 1);
            for (std::size_t i = 0; i < items.size(); i += 5) {
                std::size_t len = std::min<std::size_t>(5, items.size() - i);
                meds.push_back(small_median(a, std::span<MidItem>(items.data() + i, len)));
            }
            std::vector<Rel> scratch(rel_out.size());
            std::vector<MidItem> meds_copy = meds;
            pivot = select_kth(a, meds_copy, (meds.size() + 1) / 2, scratch);
        } else if (round > 0 && items.size() >= 24) {
            std::size_t s = items.size() >= 400 ? 25 : 9;
            std::vector<MidItem> sample(s);
            for (std::size_t i = 0; i < s; ++i) sample[i] = items[i * (items.size() - 1) / (s - 1)];
            pivot = small_median(a, std::span<MidItem>(sample.data(), s));
        } else {
            pivot = items[items.size() / 2];
        }
        ++round;
        lt.clear();
        eq.clear();
        gt.clear();
        for (const MidItem& it : items) {
            if (it.pos == pivot.pos && it.widx == pivot.widx) {
                eq.push_back(it);
                continue;
            }
            cmp_t c = a.cmp_positions(it.pos, pivot.pos);
            if (c < 0) lt.push_back(it);
            else if (c > 0) gt.push_back(it);
            else eq.push_back(it);
        }
        const std::size_t before = items.size();
        if (k <= lt.size()) {
            for (const MidItem& it : eq) rel_out[it.widx] = Rel::gt;  // > final median
            for (const MidItem& it : gt) rel_out[it.widx] = Rel::gt;
            items.swap(lt);
        } else if (k <= lt.size() + eq.size()) {
            for (const MidItem& it : lt) rel_out[it.widx] = Rel::lt;
            for (const MidItem& it : gt) rel_out[it.widx] = Rel::gt;
            for (const MidItem& it : eq) rel_out[it.widx] = Rel::eq;
            // among equal values order is by window index; eq preserves input
            // order which is window order
            std::size_t idx = k - lt.size() - 1;
            return eq[idx];
        } else {
            k -= lt.size() + eq.size();
            for (const MidItem& it : lt) rel_out[it.widx] = Rel::lt;
            for (const MidItem& it : eq) rel_out[it.widx] = Rel::lt;
            items.swap(gt);
        }
        if (items.size() * 4 > before * 3) ++bad_rounds;
    }
}

}  // namespace detail

// Middle element of a window of length L sits at 1-based offset ceil(L/2).
inline std::size_t middle_position(const Window& w) {
    return w.lo + (w.size() + 1) / 2 - 1;
}

// Lower median of the windows' middle elements; ties between equal middle
// values break toward the earlier window. Linear comparisons in the number
// of windows. `relations` reports, for free, how each window's middle
// compares to the selected value.
template <typename T>
MedianResult median_of_middles(const InstrumentedArray<T>& a, std::span<const Window> ws) {
    if (ws.empty()) throw std::invalid_argument("median_of_middles: no windows");
    MedianResult r;
    r.relations.assign(ws.size(), Rel::eq);
    std::vector<detail::MidItem> items;
    items.reserve(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (ws[i].empty()) throw std::invalid_argument("median_of_middles: empty window");
        items.push_back({middle_position(ws[i]), i});
    }
    const std::size_t k = (items.size() + 1) / 2;  // lower median, 1-based
    detail::MidItem sel = detail::select_kth(a, items, k, r.relations);
    r.middle_pos = sel.pos;
    r.owner = sel.widx;
    return r;
}

}  // namespace sms
