#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sms/harness.hpp"

using namespace sms;
using V = std::vector<Value>;

TEST_CASE("instance templates") {
    {
        InstanceSpec s{Family::example1, 8};
        CHECK(gen_instance(s) == V{1, 2, 1, 2, 1, 2, 1, 2});
    }
    {
        InstanceSpec s{Family::example2, 5};
        CHECK(gen_instance(s) == V{1, 2, 3, 4, 5});
    }
    {
        InstanceSpec s{Family::example3, 6, 3, 2};
        CHECK(gen_instance(s) == V{1, 2, 3, 1, 2, 3});
        InstanceSpec bad{Family::example3, 7, 3, 2};
        CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
    }
    {
        InstanceSpec s{Family::example4, 9, 0, 3};
        CHECK(gen_instance(s) == V{7, 8, 9, 4, 5, 6, 1, 2, 3});
        InstanceSpec bad{Family::example4, 10, 0, 3};
        CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
    }
    {
        InstanceSpec s{Family::random_runs, 0};
        CHECK(gen_instance(s).empty());
    }
}

TEST_CASE("random family is deterministic and hits its targets") {
    InstanceSpec s{Family::random_runs, 500, 64, 10, 3, 77};
    V a = gen_instance(s), b = gen_instance(s);
    CHECK(a == b);
    CHECK(a.size() == 500);
    InstrumentedArray<Value> arr(a);
    InstanceProfile p = profile_instance(arr);
    CHECK(p.rho <= 10 + 3);  // chunk boundaries can merge, segments add runs
    CHECK(p.phi >= 3);       // value-disjoint segments force pivot positions
}

TEST_CASE("query generation shapes") {
    {
        QuerySpec s;
        s.q = 4;
        CHECK(gen_select_ranks(s, 100) == std::vector<std::size_t>{20, 40, 60, 80});
    }
    {
        QuerySpec s;
        s.gaps = GapProfile::single;
        CHECK(gen_select_ranks(s, 100) == std::vector<std::size_t>{50});
    }
    {
        QuerySpec s;
        s.q = 4;
        s.order = QueryOrder::ping_pong;
        CHECK(gen_select_ranks(s, 100) == std::vector<std::size_t>{20, 80, 40, 60});
    }
    {
        QuerySpec s;
        s.q = 4;
        s.order = QueryOrder::reverse;
        CHECK(gen_select_ranks(s, 100) == std::vector<std::size_t>{80, 60, 40, 20});
    }
    {
        QuerySpec s;
        s.gaps = GapProfile::all;
        auto r = gen_select_ranks(s, 8);
        CHECK(r.size() == 8);
        CHECK(r.front() == 1);
        CHECK(r.back() == 8);
    }
    {
        QuerySpec s;
        s.q = 200;
        CHECK_THROWS_AS(gen_select_ranks(s, 100), std::invalid_argument);
    }
    {
        QuerySpec s;
        s.q = 16;
        s.order = QueryOrder::random_order;
        s.seed = 5;
        auto r1 = gen_select_ranks(s, 64);
        auto r2 = gen_select_ranks(s, 64);
        CHECK(r1 == r2);
    }
}

TEST_CASE("oracles on the running example") {
    InstrumentedArray<Value> a(V{2, 3, 1, 3, 7, 8, 9, 4, 5, 6});
    CHECK(oracle_select(a, 4) == 3);
    CHECK(oracle_rank(a, Value{3}) == 2);
    CHECK(oracle_rank(a, Value{0}) == 0);
    CHECK_THROWS_AS(oracle_select(a, 0), std::out_of_range);
    CHECK_THROWS_AS(oracle_select(a, 11), std::out_of_range);
    CHECK(a.comparisons() == 0);  // oracles charge nothing
}

TEST_CASE("instance and trace files round-trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "sms_harness_test";
    fs::create_directories(dir);
    {
        V v{5, -3, 12, 0};
        write_instance_file((dir / "inst.txt").string(), v);
        CHECK(read_instance_file((dir / "inst.txt").string()) == v);
    }
    {
        std::vector<TraceOp> ops{{'S', 4}, {'R', 3}, {'S', 1}};
        write_trace_file((dir / "trace.txt").string(), ops);
        auto back = read_trace_file((dir / "trace.txt").string());
        REQUIRE(back.size() == 3);
        CHECK(back[0].kind == 'S');
        CHECK(back[1].kind == 'R');
        CHECK(back[1].arg == 3);
    }
    fs::remove_all(dir);
}

TEST_CASE("bench matrix: verified rows, exact schema, determinism") {
    BenchConfig cfg;
    cfg.instances = {InstanceSpec{Family::example1, 64},
                     InstanceSpec{Family::random_runs, 96, 16, 6, 0, 11}};
    cfg.algorithms = {"merge_sort_counters", "quick_synergy_sort", "multiselect", "defer_finger"};
    QuerySpec qs;
    qs.q = 8;
    cfg.query_specs = {qs};

    auto rows1 = bench_run(cfg);
    auto rows2 = bench_run(cfg);
    REQUIRE(rows1.size() == rows2.size());
    CHECK(rows1.size() == 2 * 2 + 2 * 2);  // two sorters + two query algos, per instance
    for (std::size_t k = 0; k < rows1.size(); ++k) {
        CHECK(rows1[k].verified);
        BenchRow x = rows1[k], y = rows2[k];
        x.wall_ns = y.wall_ns = 0;  // identical apart from wall time
        CHECK(bench_row_csv(x) == bench_row_csv(y));
    }
    std::string header(kBenchCsvHeader);
    CHECK(header ==
          "family,n,sigma,rho,phi,delta,chi,algorithm,qspec,comparisons,index_steps,wall_ns,"
          "pred_ms,pred_tk,pred_syn,pred_env");
    auto commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(commas(bench_row_csv(rows1[0])) == commas(header));
}

TEST_CASE("trace checksum is stable") {
    CHECK(fnv1a("S 4\nR 3\n") == fnv1a("S 4\nR 3\n"));
    CHECK(fnv1a("S 4\nR 3\n") != fnv1a("S 4\nR 2\n"));
}
