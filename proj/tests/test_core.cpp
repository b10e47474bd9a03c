#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sms/core.hpp"

using namespace sms;
using Arr = InstrumentedArray<std::int64_t>;
using V = std::vector<std::int64_t>;

namespace {

std::vector<V> runs_of(const Arr& a, const RunDecomposition& rd) {
    std::vector<V> out;
    for (std::size_t k = 0; k < rd.count(); ++k) {
        Window w = rd.window(k);
        out.emplace_back(a.values().begin() + w.lo, a.values().begin() + w.hi);
    }
    return out;
}

// brute-force pivot-position oracle: O(n^2), raw values
std::vector<std::size_t> pivot_oracle(const V& v) {
    std::vector<std::size_t> out;
    for (std::size_t p = 2; p <= v.size(); ++p) {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < p && ok; ++i)
            for (std::size_t j = p - 1; j < v.size() && ok; ++j)
                if (v[i] > v[j]) ok = false;
        if (ok) out.push_back(p);
    }
    return out;
}

std::size_t ceil_log2(std::size_t x) {
    std::size_t l = 0;
    while ((std::size_t{1} << l) < x) ++l;
    return l;
}

}  // namespace

TEST_CASE("detect_runs on the running example") {
    Arr a(V{2, 3, 1, 3, 7, 8, 9, 4, 5, 6});
    RunDecomposition rd = detect_runs(a);
    CHECK(rd.count() == 3);
    CHECK(runs_of(a, rd) == std::vector<V>{{2, 3}, {1, 3, 7, 8, 9}, {4, 5, 6}});
    CHECK(a.comparisons() == 9);
}

TEST_CASE("detect_runs edge shapes") {
    {
        Arr a(V{1, 2, 3});
        RunDecomposition rd = detect_runs(a);
        CHECK(rd.count() == 1);
        CHECK(a.comparisons() == 2);
    }
    {
        Arr a(V{5, 4, 3, 2});
        RunDecomposition rd = detect_runs(a);
        CHECK(rd.count() == 4);
        CHECK(rd.sizes() == std::vector<std::size_t>{1, 1, 1, 1});
    }
    {
        Arr a{V{}};
        CHECK(detect_runs(a).count() == 0);
        CHECK(a.comparisons() == 0);
    }
}

TEST_CASE("detect_runs concatenation identity") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 500; ++it) {
        std::size_t n = rng() % 64;
        V v(n);
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % 16);
        Arr a(v);
        RunDecomposition rd = detect_runs(a);
        V cat;
        for (auto& seg : runs_of(a, rd)) cat.insert(cat.end(), seg.begin(), seg.end());
        CHECK(cat == v);
        CHECK(a.comparisons() == (n == 0 ? 0 : n - 1));
        // maximality: each internal boundary is a strict descent
        for (std::size_t k = 1; k < rd.count(); ++k)
            CHECK(v[rd.starts[k] - 1] > v[rd.starts[k]]);
    }
}

TEST_CASE("pivot positions: examples") {
    {
        Arr a(V{3, 2, 1, 6, 5, 4});
        CHECK(detect_pivot_positions(a).positions == std::vector<std::size_t>{4});
    }
    {
        // p=4 qualifies too: max(2,3,1) = 3 <= min(3,7,8,9,4,5,6) = 3
        Arr a(V{2, 3, 1, 3, 7, 8, 9, 4, 5, 6});
        CHECK(pivot_oracle(a.values()) == std::vector<std::size_t>{4, 5});
        CHECK(detect_pivot_positions(a).positions == std::vector<std::size_t>{4, 5});
    }
    {
        Arr a(V{1, 2, 3, 4});
        CHECK(detect_pivot_positions(a).positions == std::vector<std::size_t>{2, 3, 4});
    }
}

TEST_CASE("pivot positions match the quadratic oracle and cost bound") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 400; ++it) {
        std::size_t n = 1 + rng() % 40;
        V v(n);
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % 8);
        Arr a(v);
        PivotPositions pp = detect_pivot_positions(a);
        CHECK(pp.positions == pivot_oracle(v));
        CHECK(a.comparisons() <= 3 * (n - 1));
    }
}

TEST_CASE("split_by_pivot_positions") {
    Arr a(V{3, 2, 1, 6, 5, 4});
    auto segs = split_by_pivot_positions(6, detect_pivot_positions(a));
    CHECK(segs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {3, 6}});

    Arr b(V{1, 2, 3, 4});
    auto segs_b = split_by_pivot_positions(4, detect_pivot_positions(b));
    REQUIRE(segs_b.size() == 4);
    for (auto [lo, hi] : segs_b) CHECK(hi - lo == 1);

    Arr c(V{2, 1, 2, 1});
    PivotPositions none = detect_pivot_positions(c);
    CHECK(none.count() == 0);
    auto segs_c = split_by_pivot_positions(4, none);
    CHECK(segs_c == std::vector<std::pair<std::size_t, std::size_t>>{{0, 4}});
}

TEST_CASE("doubling_search spec examples (1-based window offsets)") {
    Arr a(V{1, 3, 7, 8, 9, /*window 2*/ 4, 5, 6, /*window 3*/ 1, 2});
    Window w1{0, 0, 5};  // (1,3,7,8,9)
    CHECK(doubling_search(a, w1, std::int64_t{6}, Anchor::left(), SearchMode::first_geq) - w1.lo + 1 == 3);
    Window w2{1, 5, 8};  // (4,5,6)
    CHECK(doubling_search(a, w2, std::int64_t{3}, Anchor::left(), SearchMode::first_geq) - w2.lo + 1 == 1);
    CHECK(doubling_search(a, w1, std::int64_t{3}, Anchor::left(), SearchMode::first_gt) - w1.lo + 1 == 3);
    CHECK(doubling_search(a, w1, std::int64_t{3}, Anchor::left(), SearchMode::first_geq) - w1.lo + 1 == 2);
}

TEST_CASE("doubling_search agrees with a linear scan and meets the cost bound") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 10000; ++it) {
        std::size_t len = 1 + rng() % 50;
        V v(len);
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % 30);
        std::sort(v.begin(), v.end());
        std::int64_t target = static_cast<std::int64_t>(rng() % 32) - 1;
        SearchMode mode = (rng() & 1) ? SearchMode::first_geq : SearchMode::first_gt;
        int anchor_kind = static_cast<int>(rng() % 3);
        std::size_t pos = rng() % len;

        // linear-scan oracle
        std::size_t expect = len;
        for (std::size_t i = 0; i < len; ++i) {
            bool sat = mode == SearchMode::first_geq ? v[i] >= target : v[i] > target;
            if (sat) {
                expect = i;
                break;
            }
        }

        Arr a(v);
        Window w{0, 0, len};
        Anchor anc = anchor_kind == 0 ? Anchor::left()
                     : anchor_kind == 1 ? Anchor::right()
                                        : Anchor::at(pos);
        std::uint64_t before = a.comparisons();
        std::size_t got = doubling_search(a, w, target, anc, mode);
        std::uint64_t used = a.comparisons() - before;
        REQUIRE(got == expect);

        std::size_t d;
        if (anchor_kind == 0) d = got;
        else if (anchor_kind == 1) d = len - got;
        else d = got > pos ? got - pos : pos - got;
        CHECK(used <= 2 * ceil_log2(d + 2) + 2);
    }
}

TEST_CASE("doubling_search_bidir spec examples (1-based)") {
    {
        Arr a(V{1, 3, 7, 8, 9});
        EqualRange er = doubling_search_bidir(a, Window{0, 0, 5}, std::int64_t{6});
        CHECK(er.first_geq + 1 == 3);
        CHECK(er.first_gt + 1 == 3);
    }
    {
        Arr a(V{3, 3, 3});
        EqualRange er = doubling_search_bidir(a, Window{0, 0, 3}, std::int64_t{3});
        CHECK(er.first_geq + 1 == 1);
        CHECK(er.first_gt + 1 == 4);
    }
    {
        Arr a(V{1, 2});
        EqualRange er = doubling_search_bidir(a, Window{0, 0, 2}, std::int64_t{0});
        CHECK(er.first_geq + 1 == 1);
        CHECK(er.first_gt + 1 == 1);
    }
}

TEST_CASE("doubling_search_bidir equal-range correctness and cost") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 10000; ++it) {
        std::size_t len = 1 + rng() % 60;
        V v(len);
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % 20);
        std::sort(v.begin(), v.end());
        std::int64_t target = static_cast<std::int64_t>(rng() % 22) - 1;

        auto lo_it = std::lower_bound(v.begin(), v.end(), target);
        auto hi_it = std::upper_bound(v.begin(), v.end(), target);
        std::size_t geq = static_cast<std::size_t>(lo_it - v.begin());
        std::size_t gt = static_cast<std::size_t>(hi_it - v.begin());

        Arr a(v);
        std::uint64_t before = a.comparisons();
        EqualRange er = doubling_search_bidir(a, target, 0, len);
        std::uint64_t used = a.comparisons() - before;
        REQUIRE(er.first_geq == geq);
        REQUIRE(er.first_gt == gt);

        std::size_t d_left = geq, d_right = len - gt, m = gt - geq;
        std::size_t dmin = std::min(d_left, d_right);
        if (m == 0) {
            CHECK(used <= 4 * ceil_log2(dmin + 2) + 8);
        } else {
            CHECK(used <= 4 * ceil_log2(dmin + 2) + 4 * ceil_log2(m + 2) + 12);
        }
    }
}

TEST_CASE("median_of_middles: examples") {
    Arr a(V{2, 3, 1, 3, 7, 8, 9, 4, 5, 6});
    std::vector<Window> ws{{0, 0, 2}, {1, 2, 7}, {2, 7, 10}};
    MedianResult r = median_of_middles(a, ws);
    CHECK(a.value(r.middle_pos) == 5);
    CHECK(r.owner == 2);
    CHECK(r.relations[0] == Rel::lt);  // middle 3 < 5
    CHECK(r.relations[1] == Rel::gt);  // middle 7 > 5
    CHECK(r.relations[2] == Rel::eq);

    std::vector<Window> single{{0, 2, 7}};
    MedianResult s = median_of_middles(a, single);
    CHECK(a.value(s.middle_pos) == 7);  // middle of (1,3,7,8,9)

    Arr b(V{1, 9});
    std::vector<Window> two{{0, 0, 1}, {1, 1, 2}};
    MedianResult t = median_of_middles(b, two);
    CHECK(b.value(t.middle_pos) == 1);  // lower median
    CHECK(t.owner == 0);
}

TEST_CASE("median_of_middles: rank property and linear cost") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 2000; ++it) {
        std::size_t m = 1 + rng() % 40;
        V v;
        std::vector<Window> ws;
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t len = 1 + rng() % 5;
            std::size_t lo = v.size();
            for (std::size_t j = 0; j < len; ++j) v.push_back(static_cast<std::int64_t>(rng() % 10));
            std::sort(v.begin() + lo, v.end());
            ws.push_back({static_cast<int>(k), lo, v.size()});
        }
        Arr a(v);
        std::uint64_t before = a.comparisons();
        MedianResult r = median_of_middles(a, ws);
        std::uint64_t used = a.comparisons() - before;

        // oracle: sort the middles by (value, window) and take the lower median
        std::vector<std::pair<std::int64_t, std::size_t>> mids;
        for (std::size_t k = 0; k < m; ++k)
            mids.emplace_back(v[middle_position(ws[k])], k);
        std::sort(mids.begin(), mids.end());
        auto expect = mids[(m + 1) / 2 - 1];
        CHECK(v[r.middle_pos] == expect.first);
        CHECK(r.owner == expect.second);
        CHECK(r.middle_pos == middle_position(ws[r.owner]));
        for (std::size_t k = 0; k < m; ++k) {
            std::int64_t mv = v[middle_position(ws[k])];
            Rel want = mv < expect.first ? Rel::lt : mv > expect.first ? Rel::gt : Rel::eq;
            CHECK(r.relations[k] == want);
        }
        CHECK(used <= 24 * m + 8);
    }
}

TEST_CASE("median_of_middles costs exactly m-1 on all-equal middles") {
    std::size_t m = 64;
    V v(m, 7);
    std::vector<Window> ws;
    for (std::size_t k = 0; k < m; ++k) ws.push_back({static_cast<int>(k), k, k + 1});
    Arr a(v);
    MedianResult r = median_of_middles(a, ws);
    CHECK(a.comparisons() == m - 1);
    CHECK(r.owner == (m + 1) / 2 - 1);  // lower median by window order
}
