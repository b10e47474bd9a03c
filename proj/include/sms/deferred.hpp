#pragma once
// deferred.hpp - online rank/select structures that sort only as much as the
// queries force. Two variants share the partition machinery and differ in
// the index over resolved records: an ordered map with midpoint descent, and
// a finger list whose navigation cost tracks the distance between
// consecutive queries.
//
// Two meters are kept: key comparisons (the array's counter) and index
// steps (probes of the resolved-rank marks plus hops inside the record
// index). Only key comparisons involve element values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

#include "sms/core.hpp"
#include "sms/finger_list.hpp"
#include "sms/measures.hpp"
#include "sms/partition.hpp"

namespace sms {

// A resolved stretch of rank space. Separators have an empty rank interval:
// they resolve no rank but bound the unresolved gaps (pre-existing pivot
// positions and the two ends).
template <typename T>
struct DeferredRecord {
    std::size_t rank_lo = 1, rank_hi = 0;
    bool separator = false;
    bool has_value = false;  // separators at the ends carry no key value
    T sep_key{};             // largest value before the boundary
    BandContent<T> band;     // when !separator
    std::vector<RunCut> cuts;
    int prev = -1, next = -1;
    int left_gap = -1, right_gap = -1;

    bool empty_interval() const { return rank_hi < rank_lo; }
    bool covers(std::size_t r) const { return rank_lo <= r && r <= rank_hi; }
    std::int64_t rank_key() const {
        return static_cast<std::int64_t>(rank_lo) * 2 + (separator ? 0 : 1);
    }
};

struct DeferredGap {
    std::vector<Window> windows;
    std::size_t rank_lo = 0, rank_hi = 0;
    int left_rec = -1, right_rec = -1;
    bool alive = true;
};

namespace detail {

template <typename T>
struct DeferredData {
    const InstrumentedArray<T>* a = nullptr;
    std::size_t n = 0;
    std::uint64_t base_cmp = 0;
    std::vector<std::uint8_t> resolved;  // 1-based marks
    std::deque<DeferredRecord<T>> recs;
    std::deque<DeferredGap> gaps;
    int head_rec = -1, tail_rec = -1;
    std::uint64_t index_steps = 0;
    std::size_t resolved_count = 0;
    std::size_t partition_count = 0;
};

// Same comparison schedule as detect_pivot_positions, but also keeps the
// prefix maximum value at each reported position for the separator keys.
template <typename T>
void pivot_sweep(const InstrumentedArray<T>& a, std::vector<std::size_t>& positions,
                 std::vector<T>& keys) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    std::vector<std::size_t> pm(n), sm(n);
    pm[0] = 0;
    for (std::size_t i = 1; i < n; ++i)
        pm[i] = a.cmp_positions(pm[i - 1], i) > 0 ? pm[i - 1] : i;
    sm[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;)
        sm[i] = a.cmp_positions(i, sm[i + 1]) <= 0 ? i : sm[i + 1];
    for (std::size_t p = 2; p <= n; ++p) {
        const std::size_t s = p - 1;
        if (a.cmp_positions(pm[s - 1], sm[s]) <= 0) {
            positions.push_back(p);
            keys.push_back(a.value(pm[s - 1]));
        }
    }
}

template <typename T>
void mark_resolved(DeferredData<T>& st, const DeferredRecord<T>& rec) {
    for (std::size_t r = rec.rank_lo; r <= rec.rank_hi && !rec.empty_interval(); ++r) {
        st.resolved[r] = 1;
        ++st.resolved_count;
    }
}

// Resolve one gap step: a single-window gap becomes one record covering it;
// otherwise run the shared partition and split into up to two child gaps.
template <typename T, typename OnRecord>
int partition_gap(DeferredData<T>& st, int gid, OnRecord&& on_record) {
    DeferredGap g = std::move(st.gaps[gid]);
    st.gaps[gid].alive = false;
    const int L = g.left_rec, R = g.right_rec;
    const int rid = static_cast<int>(st.recs.size());
    DeferredRecord<T> rec;

    if (g.windows.size() == 1) {
        const Window& w = g.windows[0];
        rec.rank_lo = g.rank_lo;
        rec.rank_hi = g.rank_hi;
        rec.band = BandContent<T>{w.run, w.lo, w.hi, w.hi, 0, T{}};
        rec.cuts.push_back({w.run, w.lo, w.hi});
        rec.left_gap = rec.right_gap = -1;
        rec.prev = L;
        rec.next = R;
        st.recs.push_back(std::move(rec));
        st.recs[L].next = rid;
        st.recs[L].right_gap = -1;
        st.recs[R].prev = rid;
        st.recs[R].left_gap = -1;
    } else {
        ++st.partition_count;
        PartitionOutcome<T> po = partition_step(*st.a, std::span<const Window>(g.windows));
        std::size_t left_total = 0;
        for (const Window& w : po.left) left_total += w.size();
        rec.rank_lo = g.rank_lo + left_total;
        rec.rank_hi = rec.rank_lo + po.band.size() - 1;
        rec.band = po.band;
        rec.cuts = po.cuts;
        rec.prev = L;
        rec.next = R;
        st.recs.push_back(std::move(rec));
        st.recs[L].next = rid;
        st.recs[R].prev = rid;
        if (!po.left.empty()) {
            int lg = static_cast<int>(st.gaps.size());
            st.gaps.push_back({std::move(po.left), g.rank_lo, st.recs[rid].rank_lo - 1, L, rid, true});
            st.recs[L].right_gap = lg;
            st.recs[rid].left_gap = lg;
        } else {
            st.recs[L].right_gap = -1;
            st.recs[rid].left_gap = -1;
        }
        if (!po.right.empty()) {
            int rg = static_cast<int>(st.gaps.size());
            st.gaps.push_back(
                {std::move(po.right), st.recs[rid].rank_hi + 1, g.rank_hi, rid, R, true});
            st.recs[rid].right_gap = rg;
            st.recs[R].left_gap = rg;
        } else {
            st.recs[rid].right_gap = -1;
            st.recs[R].left_gap = -1;
        }
    }
    mark_resolved(st, st.recs[rid]);
    on_record(rid);
    return rid;
}

// Shared construction: runs, pre-existing pivot positions as separators,
// gaps between them; gaps of one rank resolve on the spot for free.
template <typename T, typename OnRecord>
void build_deferred(DeferredData<T>& st, const InstrumentedArray<T>& a, OnRecord&& on_record) {
    st.a = &a;
    st.n = a.size();
    st.resolved.assign(st.n + 2, 0);
    RunDecomposition rd = detect_runs(a);
    std::vector<std::size_t> pivots;
    std::vector<T> keys;
    pivot_sweep(a, pivots, keys);

    // sentinel separators at both ends
    DeferredRecord<T> head;
    head.rank_lo = 1;
    head.rank_hi = 0;
    head.separator = true;
    DeferredRecord<T> tail;
    tail.rank_lo = st.n + 1;
    tail.rank_hi = st.n;
    tail.separator = true;
    st.head_rec = 0;
    st.recs.push_back(std::move(head));
    int prev = st.head_rec;
    on_record(st.head_rec);

    std::size_t run_idx = 0;
    auto make_gap_then_separator = [&](std::size_t seg_lo, std::size_t seg_hi, int sep_rec) {
        // link first: an auto-resolved gap splices its record into the chain
        st.recs[prev].next = sep_rec;
        st.recs[sep_rec].prev = prev;
        // windows of the input segment [seg_lo, seg_hi)
        std::vector<Window> ws;
        while (run_idx < rd.count() && rd.run_end(run_idx) <= seg_lo) ++run_idx;
        for (std::size_t k = run_idx; k < rd.count() && rd.starts[k] < seg_hi; ++k) {
            Window w = rd.window(k);
            w.lo = std::max(w.lo, seg_lo);
            w.hi = std::min(w.hi, seg_hi);
            if (!w.empty()) ws.push_back(w);
        }
        if (!ws.empty()) {
            int gid = static_cast<int>(st.gaps.size());
            st.gaps.push_back({std::move(ws), seg_lo + 1, seg_hi, prev, sep_rec, true});
            st.recs[prev].right_gap = gid;
            st.recs[sep_rec].left_gap = gid;
            if (seg_hi - seg_lo == 1) partition_gap(st, gid, on_record);
        }
        prev = sep_rec;
    };

    std::size_t seg_lo = 0;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        DeferredRecord<T> sep;
        sep.rank_lo = pivots[k];
        sep.rank_hi = pivots[k] - 1;
        sep.separator = true;
        sep.has_value = true;
        sep.sep_key = keys[k];
        int sid = static_cast<int>(st.recs.size());
        st.recs.push_back(std::move(sep));
        make_gap_then_separator(seg_lo, pivots[k] - 1, sid);
        on_record(sid);
        seg_lo = pivots[k] - 1;
    }
    st.tail_rec = static_cast<int>(st.recs.size());
    st.recs.push_back(std::move(tail));
    make_gap_then_separator(seg_lo, st.n, st.tail_rec);
    on_record(st.tail_rec);
}

// Partition toward rank i inside the gap right of `pred_rec`.
template <typename T, typename OnRecord>
const DeferredRecord<T>* select_resolve(DeferredData<T>& st, int pred_rec, std::size_t i,
                                        OnRecord&& on_record) {
    int gid = st.recs[pred_rec].right_gap;
    while (true) {
        int rid = partition_gap(st, gid, on_record);
        const DeferredRecord<T>& r = st.recs[rid];
        if (i < r.rank_lo) gid = r.left_gap;
        else if (i > r.rank_hi) gid = r.right_gap;
        else return &st.recs[rid];
    }
}

// Midpoint descent over rank space: locate_pred(m) names the last record
// starting at or before rank m; gaps partition only when x provably falls
// strictly inside their value territory.
template <typename T, typename Locate, typename OnRecord>
std::size_t rank_descend(DeferredData<T>& st, const T& x, std::size_t lo, std::size_t hi,
                         Locate&& locate_pred, OnRecord&& on_record) {
    const InstrumentedArray<T>& a = *st.a;
    while (lo <= hi) {
        const std::size_t m = lo + (hi - lo) / 2;
        ++st.index_steps;  // mark probe
        const int rid = locate_pred(m);
        const DeferredRecord<T>& R = st.recs[rid];
        if (st.resolved[m]) {
            if (a.cmp_values(x, R.band.min_value(a)) <= 0) {
                hi = R.rank_lo - 1;
            } else if (a.cmp_values(x, R.band.max_value(a)) > 0) {
                lo = R.rank_hi + 1;
            } else {
                return R.rank_lo - 1 + R.band.count_less(x, a);
            }
            continue;
        }
        const int gid = R.right_gap;  // m unresolved: the pred's right gap holds it
        const DeferredRecord<T>& P = st.recs[st.gaps[gid].left_rec];
        bool narrowed = false;
        if (!P.separator || P.has_value) {
            const T& pv = P.separator ? P.sep_key : P.band.max_value(a);
            if (a.cmp_values(x, pv) <= 0) {
                hi = P.rank_hi;  // everything from the gap on is >= x
                narrowed = true;
            }
        }
        if (!narrowed) {
            const DeferredRecord<T>& Q = st.recs[st.gaps[gid].right_rec];
            if (!Q.separator || Q.has_value) {
                const T& qv = Q.separator ? Q.sep_key : Q.band.min_value(a);
                if (a.cmp_values(x, qv) > 0) {
                    lo = Q.rank_lo;  // the gap and everything before it is < x
                    narrowed = true;
                }
            }
        }
        if (!narrowed) partition_gap(st, gid, on_record);
    }
    return lo - 1;
}

template <typename T>
std::vector<T> resolved_sequence(const DeferredData<T>& st) {
    std::vector<T> out;
    out.reserve(st.resolved_count);
    for (int r = st.head_rec; r != -1; r = st.recs[r].next) {
        const DeferredRecord<T>& rec = st.recs[r];
        if (rec.separator || rec.empty_interval()) continue;
        for (std::size_t k = 0; k < rec.band.size(); ++k)
            out.push_back(rec.band.value_at(k, *st.a));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ordered-map variant
// ---------------------------------------------------------------------------

template <typename T = std::int64_t>
class RamDeferred {
public:
    explicit RamDeferred(const InstrumentedArray<T>& a)
        : index_(KeyLess{&st_.index_steps}) {
        st_.base_cmp = a.comparisons();
        detail::build_deferred(st_, a, [this](int rid) { on_record(rid); });
    }
    RamDeferred(const RamDeferred&) = delete;
    RamDeferred& operator=(const RamDeferred&) = delete;

    T select(std::size_t i) {
        if (i < 1 || i > st_.n) throw std::out_of_range("select rank outside [1..n]");
        ++st_.index_steps;
        const int pred = locate_pred(i);
        if (st_.resolved[i]) {
            const DeferredRecord<T>& r = st_.recs[pred];
            return r.band.value_at(i - r.rank_lo, *st_.a);
        }
        const DeferredRecord<T>* r =
            detail::select_resolve(st_, pred, i, [this](int rid) { on_record(rid); });
        return r->band.value_at(i - r->rank_lo, *st_.a);
    }

    // number of elements strictly smaller than x
    std::size_t rank(const T& x) {
        if (st_.n == 0) return 0;
        return detail::rank_descend(
            st_, x, std::size_t{1}, st_.n, [this](std::size_t m) { return locate_pred(m); },
            [this](int rid) { on_record(rid); });
    }

    std::uint64_t key_comparisons() const { return st_.a->comparisons() - st_.base_cmp; }
    std::uint64_t index_steps() const { return st_.index_steps; }
    std::size_t resolved_count() const { return st_.resolved_count; }
    std::size_t record_count() const { return st_.recs.size(); }
    std::size_t partition_count() const { return st_.partition_count; }
    std::vector<T> resolved_sequence() const { return detail::resolved_sequence(st_); }
    const std::deque<DeferredRecord<T>>& records() const { return st_.recs; }
    bool rank_resolved(std::size_t i) const { return st_.resolved[i] != 0; }

private:
    struct KeyLess {
        std::uint64_t* steps;
        bool operator()(std::int64_t a, std::int64_t b) const {
            ++*steps;
            return a < b;
        }
    };

    void on_record(int rid) { index_.emplace(st_.recs[rid].rank_key(), rid); }

    int locate_pred(std::size_t i) {
        auto it = index_.upper_bound(static_cast<std::int64_t>(i) * 2 + 1);
        --it;
        return it->second;
    }

    detail::DeferredData<T> st_;
    std::map<std::int64_t, int, KeyLess> index_;
};

// ---------------------------------------------------------------------------
// Finger variant
// ---------------------------------------------------------------------------

template <typename T = std::int64_t>
class FingerDeferred {
public:
    explicit FingerDeferred(const InstrumentedArray<T>& a)
        : list_(&a, &st_.index_steps) {
        st_.base_cmp = a.comparisons();
        bit_.assign(a.size() + 2, 0);
        detail::build_deferred(st_, a, [this](int rid) { on_record(rid); });
    }
    FingerDeferred(const FingerDeferred&) = delete;
    FingerDeferred& operator=(const FingerDeferred&) = delete;

    T select(std::size_t i) {
        if (i < 1 || i > st_.n) throw std::out_of_range("select rank outside [1..n]");
        ++st_.index_steps;
        auto* node = list_.search_rank(static_cast<std::int64_t>(i) * 2 + 1);
        const int pred = node->rec;
        const DeferredRecord<T>* r;
        if (st_.resolved[i]) {
            r = &st_.recs[pred];
        } else {
            // new records from one resolution are consecutive in the list;
            // inserting them in rank order keeps every splice at the finger
            std::vector<int> pending;
            r = detail::select_resolve(st_, pred, i, [this, &pending](int rid) {
                bit_add(st_.recs[rid].rank_lo, 1);
                pending.push_back(rid);
            });
            std::sort(pending.begin(), pending.end(), [this](int x, int y) {
                return st_.recs[x].rank_key() < st_.recs[y].rank_key();
            });
            for (int rid : pending) insert_into_list(rid);
        }
        note_access(r->rank_lo);
        return r->band.value_at(i - r->rank_lo, *st_.a);
    }

    std::size_t rank(const T& x) {
        if (st_.n == 0) return 0;
        std::size_t lo = 1, hi = st_.n;
        auto* f = list_.search_value(x);
        if (f) {
            const DeferredRecord<T>& R = st_.recs[f->rec];
            if (f->vkind == RecordFingerList<T>::val_keyed) {
                const T& key = R.separator ? R.sep_key : R.band.min_value(*st_.a);
                if (st_.a->cmp_values(x, key) > 0) lo = R.rank_lo;
            }
            auto* nx = RecordFingerList<T>::next_of(f);
            if (nx && nx->vkind == RecordFingerList<T>::val_keyed)
                hi = st_.recs[nx->rec].rank_lo - 1;
            note_access(R.rank_lo);
        }
        return detail::rank_descend(
            st_, x, lo, hi, [this](std::size_t m) { return locate_pred(m); },
            [this](int rid) { on_record(rid); });
    }

    std::uint64_t key_comparisons() const { return st_.a->comparisons() - st_.base_cmp; }
    std::uint64_t index_steps() const { return st_.index_steps; }
    std::size_t resolved_count() const { return st_.resolved_count; }
    std::size_t record_count() const { return st_.recs.size(); }
    std::size_t partition_count() const { return st_.partition_count; }
    std::vector<T> resolved_sequence() const { return detail::resolved_sequence(st_); }
    const std::deque<DeferredRecord<T>>& records() const { return st_.recs; }
    bool rank_resolved(std::size_t i) const { return st_.resolved[i] != 0; }
    // locality diagnostics: sum over queries of log2(blocks skipped + 2)
    double sum_log_gap_distance() const { return sum_log_d_; }

private:
    void on_record(int rid) {
        bit_add(st_.recs[rid].rank_lo, 1);
        insert_into_list(rid);
    }

    void insert_into_list(int rid) {
        const DeferredRecord<T>& rec = st_.recs[rid];
        typename RecordFingerList<T>::ValKind vk;
        const T* val = nullptr;
        if (rec.separator && !rec.has_value) {
            vk = rec.rank_lo == 1 ? RecordFingerList<T>::val_neg_inf
                                  : RecordFingerList<T>::val_pos_inf;
        } else {
            vk = RecordFingerList<T>::val_keyed;
            val = rec.separator ? &rec.sep_key : &st_.a->values()[rec.band.lo];
        }
        list_.insert(rid, rec.rank_key(), vk, val);
    }

    int locate_pred(std::size_t i) {
        auto* node = list_.search_rank(static_cast<std::int64_t>(i) * 2 + 1);
        return node->rec;
    }

    // measurement only: Fenwick counts of record starts per rank position
    void bit_add(std::size_t pos, long long delta) {
        for (std::size_t p = pos; p < bit_.size(); p += p & (~p + 1)) bit_[p] += delta;
    }
    long long bit_prefix(std::size_t pos) const {  // sum over [1..pos]
        long long s = 0;
        for (std::size_t p = std::min(pos, bit_.size() - 1); p > 0; p -= p & (~p + 1))
            s += bit_[p];
        return s;
    }
    void note_access(std::size_t rank_lo) {
        if (have_prev_) {
            std::size_t lo = std::min(prev_rank_lo_, rank_lo);
            std::size_t hi = std::max(prev_rank_lo_, rank_lo);
            long long between = hi > lo ? bit_prefix(hi - 1) - bit_prefix(lo) : 0;
            if (between < 0) between = 0;
            sum_log_d_ += std::log2(static_cast<double>(between) + 2.0);
        }
        have_prev_ = true;
        prev_rank_lo_ = rank_lo;
    }

    detail::DeferredData<T> st_;
    RecordFingerList<T> list_;
    std::vector<long long> bit_;
    bool have_prev_ = false;
    std::size_t prev_rank_lo_ = 0;
    double sum_log_d_ = 0.0;
};

}  // namespace sms
