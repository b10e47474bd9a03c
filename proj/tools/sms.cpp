// sms - benchmark and inspection CLI for the multiset sorting, selection,
// and rank/select machinery in include/sms.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sms/sms.hpp"

using namespace sms;
using V = std::vector<Value>;

namespace {

struct InstanceArgs {
    std::string family = "random";
    std::size_t n = 1024;
    std::size_t sigma = 0;
    std::size_t rho = 16;
    std::size_t phi = 0;
    std::uint64_t seed = 1;
    std::string in_file;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& a) {
    cmd->add_option("--family", a.family, "example1|example2|example3|example4|random|file");
    cmd->add_option("--n", a.n, "instance size");
    cmd->add_option("--sigma", a.sigma, "value universe (random) / run length (example3)");
    cmd->add_option("--rho", a.rho, "requested runs (example3/example4/random)");
    cmd->add_option("--phi", a.phi, "requested pivot positions (random)");
    cmd->add_option("--seed", a.seed, "generator seed");
    cmd->add_option("--in", a.in_file, "instance file (one integer per line)");
}

V materialize(const InstanceArgs& a) {
    if (!a.in_file.empty() || a.family == "file") {
        if (a.in_file.empty()) throw std::invalid_argument("family 'file' requires --in");
        return read_instance_file(a.in_file);
    }
    InstanceSpec spec{family_from_name(a.family), a.n, a.sigma, a.rho, a.phi, a.seed};
    return gen_instance(spec);
}

void print_profile(const InstanceProfile& p) {
    std::printf("n=%zu rho=%zu sigma=%zu delta=%zu chi=%zu phi=%zu\n", p.n, p.rho, p.sigma,
                p.delta, p.chi, p.phi);
}

std::vector<std::size_t> parse_ranks(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    }
    return out;
}

QueryOrder order_from_name(const std::string& s) {
    if (s == "sorted") return QueryOrder::sorted;
    if (s == "reverse") return QueryOrder::reverse;
    if (s == "random") return QueryOrder::random_order;
    if (s == "pingpong") return QueryOrder::ping_pong;
    throw std::invalid_argument("unknown order: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiset sorting, multiselection, and deferred rank/select toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    InstanceArgs gen_args;
    std::string gen_out;
    add_instance_flags(gen, gen_args);
    gen->add_option("--out", gen_out, "output path")->required();
    gen->callback([&] {
        V v = materialize(gen_args);
        write_instance_file(gen_out, v);
        InstrumentedArray<Value> a(v);
        print_profile(profile_instance(a));
        std::printf("wrote %zu values to %s\n", v.size(), gen_out.c_str());
    });

    // ---- sort ----
    auto* sort_cmd = app.add_subcommand("sort", "run one sorter and print its cost report");
    InstanceArgs sort_args;
    std::string sort_algo = "quick_synergy_sort";
    add_instance_flags(sort_cmd, sort_args);
    sort_cmd->add_option("--algo", sort_algo,
                         "merge_sort_counters|minimal_merge_sort|small_vs_small_sort|"
                         "parallel_race|dlm_sort|quick_synergy_sort|global_sort");
    sort_cmd->callback([&] {
        V v = materialize(sort_args);
        InstrumentedArray<Value> probe(v);
        InstanceProfile prof = profile_instance(probe);
        BenchRow row = bench_one(v, prof, sort_args.family, sort_algo, nullptr);
        CostReport rep = make_report(sort_algo, prof, row.comparisons);
        std::fputs(rep.to_string().c_str(), stdout);
        std::printf("verified: %s\n", row.verified ? "OK" : "MISMATCH");
        if (!row.verified) std::exit(1);
    });

    // ---- multiselect ----
    auto* ms = app.add_subcommand("multiselect", "answer select ranks, partially sorting");
    InstanceArgs ms_args;
    std::string ms_queries, ms_queries_file, ms_order = "sorted";
    std::size_t ms_q = 8;
    bool ms_global = false;
    add_instance_flags(ms, ms_args);
    ms->add_option("--queries", ms_queries, "comma-separated ranks");
    ms->add_option("--queries-file", ms_queries_file, "file with one rank per line");
    ms->add_option("--qcount", ms_q, "generated query count (uniform gaps)");
    ms->add_option("--order", ms_order, "sorted|reverse|random|pingpong");
    ms->add_flag("--use-global", ms_global, "split at pre-existing pivot positions first");
    ms->callback([&] {
        V v = materialize(ms_args);
        std::vector<std::size_t> ranks;
        if (!ms_queries.empty()) {
            ranks = parse_ranks(ms_queries);
        } else if (!ms_queries_file.empty()) {
            for (Value x : read_instance_file(ms_queries_file))
                ranks.push_back(static_cast<std::size_t>(x));
        } else {
            QuerySpec qs;
            qs.q = ms_q;
            qs.order = order_from_name(ms_order);
            qs.seed = ms_args.seed;
            ranks = gen_select_ranks(qs, v.size());
        }
        InstrumentedArray<Value> a(v);
        auto res = ms_global ? multiselect_with_global(a, ranks) : multiselect(a, ranks);
        InstrumentedArray<Value> oracle_arr(v);
        bool ok = true;
        for (std::size_t k = 0; k < ranks.size(); ++k) {
            std::printf("select(%zu) = %lld\n", ranks[k],
                        static_cast<long long>(res.answers[k]));
            if (res.answers[k] != oracle_select(oracle_arr, ranks[k])) ok = false;
        }
        std::fputs(res.report.to_string().c_str(), stdout);
        std::printf("verified: %s\n", ok ? "OK" : "MISMATCH");
        if (!ok) std::exit(1);
    });

    // ---- defer ----
    auto* defer = app.add_subcommand("defer", "replay an online rank/select trace");
    InstanceArgs df_args;
    std::string df_structure = "finger", df_trace, df_order = "sorted", df_kind = "select";
    std::size_t df_q = 16;
    add_instance_flags(defer, df_args);
    defer->add_option("--structure", df_structure, "ram|finger");
    defer->add_option("--trace", df_trace, "trace file: lines 'S <i>' / 'R <x>'");
    defer->add_option("--qcount", df_q, "generated query count when no trace given");
    defer->add_option("--order", df_order, "sorted|reverse|random|pingpong");
    defer->add_option("--kind", df_kind, "select|rank|mixed (generated traces)");
    defer->callback([&] {
        V v = materialize(df_args);
        std::vector<TraceOp> ops;
        std::string tag;
        if (!df_trace.empty()) {
            ops = read_trace_file(df_trace);
            std::ifstream in(df_trace);
            std::stringstream buf;
            buf << in.rdbuf();
            char hex[32];
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(fnv1a(buf.str())));
            tag = std::string("trace:") + hex;
        } else {
            QuerySpec qs;
            qs.q = df_q;
            qs.order = order_from_name(df_order);
            qs.kind = df_kind == "select" ? QueryKind::select_only
                      : df_kind == "rank" ? QueryKind::rank_only
                                          : QueryKind::mixed;
            qs.seed = df_args.seed;
            ops = gen_trace(qs, v);
            tag = qs.label();
        }
        InstrumentedArray<Value> a(v);
        InstrumentedArray<Value> oracle_arr(v);
        bool ok = true;
        std::uint64_t cmps = 0, steps = 0;
        auto replay = [&](auto& d) {
            for (const TraceOp& op : ops) {
                if (op.kind == 'S') {
                    auto got = d.select(static_cast<std::size_t>(op.arg));
                    if (got != oracle_select(oracle_arr, static_cast<std::size_t>(op.arg)))
                        ok = false;
                } else {
                    if (d.rank(op.arg) != oracle_rank(oracle_arr, op.arg)) ok = false;
                }
            }
            cmps = d.key_comparisons();
            steps = d.index_steps();
        };
        if (df_structure == "ram") {
            RamDeferred<Value> d(a);
            replay(d);
        } else if (df_structure == "finger") {
            FingerDeferred<Value> d(a);
            replay(d);
        } else {
            throw std::invalid_argument("unknown structure: " + df_structure);
        }
        std::printf("%s over %zu queries (%s): key_comparisons=%llu index_steps=%llu\n",
                    df_structure.c_str(), ops.size(), tag.c_str(),
                    static_cast<unsigned long long>(cmps),
                    static_cast<unsigned long long>(steps));
        std::printf("verified: %s\n", ok ? "OK" : "MISMATCH");
        if (!ok) std::exit(1);
    });

    // ---- succinct ----
    auto* suc = app.add_subcommand("succinct", "build/query/serialize compressed multisets");
    InstanceArgs sc_args;
    std::string sc_kind = "rank", sc_out, sc_load;
    bool sc_space = false;
    std::size_t sc_select = 0, sc_rank_pos = 0;
    add_instance_flags(suc, sc_args);
    suc->add_option("--kind", sc_kind, "rank|select (which structure)");
    suc->add_option("--out", sc_out, "serialize to this path");
    suc->add_option("--load", sc_load, "load a serialized structure and verify round-trip");
    suc->add_flag("--space", sc_space, "print the space report");
    suc->add_option("--select", sc_select, "query: original position of the i-th smallest");
    suc->add_option("--rank-pos", sc_rank_pos, "query: elements before input position i");
    suc->callback([&] {
        auto run = [&](auto structure, const char* name) {
            if (sc_space) std::fputs(structure.space_report().to_string().c_str(), stdout);
            if (sc_select) std::printf("select(%zu) -> position %zu\n", sc_select,
                                       structure.select(sc_select));
            if (sc_rank_pos) std::printf("rank(position %zu) -> %zu\n", sc_rank_pos,
                                         structure.rank(sc_rank_pos));
            if (!sc_out.empty()) {
                auto bytes = structure.serialize();
                std::ofstream out(sc_out, std::ios::binary);
                out.write(reinterpret_cast<const char*>(bytes.data()),
                          static_cast<std::streamsize>(bytes.size()));
                std::printf("wrote %zu bytes to %s (%s)\n", bytes.size(), sc_out.c_str(), name);
            }
        };
        if (!sc_load.empty()) {
            std::ifstream in(sc_load, std::ios::binary);
            if (!in) throw std::runtime_error("cannot read " + sc_load);
            std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                            std::istreambuf_iterator<char>());
            if (sc_kind == "rank") {
                RankAwareCDS loaded = RankAwareCDS::deserialize(bytes);
                bool exact = loaded.serialize() == bytes;
                std::printf("loaded rank-aware: n=%zu blocks=%zu round-trip=%s\n", loaded.size(),
                            loaded.blocks(), exact ? "bit-exact" : "MISMATCH");
                if (!exact) std::exit(1);
                run(std::move(loaded), "rank-aware");
            } else {
                SelectAwareCDS loaded = SelectAwareCDS::deserialize(bytes);
                bool exact = loaded.serialize() == bytes;
                std::printf("loaded select-aware: n=%zu blocks=%zu round-trip=%s\n",
                            loaded.size(), loaded.blocks(),
                            exact ? "bit-exact" : "MISMATCH");
                if (!exact) std::exit(1);
                run(std::move(loaded), "select-aware");
            }
            return;
        }
        V v = materialize(sc_args);
        InstrumentedArray<Value> a(v);
        std::printf("built %s-aware structure over n=%zu\n", sc_kind.c_str(), v.size());
        if (sc_kind == "rank") run(RankAwareCDS(a), "rank-aware");
        else if (sc_kind == "select") run(SelectAwareCDS(a), "select-aware");
        else throw std::invalid_argument("unknown kind: " + sc_kind);
    });

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "run the benchmark matrix, emit CSV");
    std::vector<std::string> b_families{"example1", "example2", "example3", "example4"};
    std::vector<std::size_t> b_sizes{1 << 10, 1 << 12};
    std::vector<std::string> b_algos = bench_sorter_names();
    std::vector<std::size_t> b_qcounts{16};
    std::string b_out;
    std::size_t b_reps = 1;
    std::uint64_t b_seed = 1;
    bench->add_option("--families,--family", b_families, "instance families");
    bench->add_option("--sizes,--n", b_sizes, "instance sizes");
    bench->add_option("--algos,--algo", b_algos, "algorithms (see sort/defer subcommands)");
    bench->add_option("--qcounts", b_qcounts, "query counts for query-driven algorithms");
    bench->add_option("--reps", b_reps, "repetitions per cell");
    bench->add_option("--seed", b_seed, "base seed");
    bench->add_option("--out", b_out, "CSV path (stdout when omitted)");
    bench->callback([&] {
        BenchConfig cfg;
        for (const std::string& fam : b_families) {
            Family f = family_from_name(fam);
            for (std::size_t n : b_sizes) {
                InstanceSpec spec{f, n, 0, 16, 0, b_seed};
                if (f == Family::example3) {
                    std::size_t side = 1;
                    while (side * side < n) side *= 2;
                    spec.n = side * side;
                    spec.rho = spec.sigma = side;
                }
                if (f == Family::example4) spec.rho = 16;
                if (f == Family::random_runs) spec.sigma = n;
                cfg.instances.push_back(spec);
            }
        }
        cfg.algorithms = b_algos;
        for (std::size_t q : b_qcounts) {
            QuerySpec qs;
            qs.q = q;
            cfg.query_specs.push_back(qs);
        }
        cfg.repetitions = b_reps;
        auto rows = bench_run(cfg);
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!b_out.empty()) {
            file.open(b_out);
            if (!file) throw std::runtime_error("cannot write " + b_out);
            os = &file;
        }
        (*os) << kBenchCsvHeader << "\n";
        bool all_ok = true;
        for (const BenchRow& r : rows) {
            (*os) << bench_row_csv(r) << "\n";
            if (!r.verified) all_ok = false;
        }
        if (!all_ok) {
            std::fprintf(stderr, "answer mismatch against the oracle\n");
            std::exit(1);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
