#pragma once
// harness.hpp - instance and query generators, brute-force oracles, the
// benchmark matrix runner and its CSV emission. Generators are deterministic
// under their seed; oracles read raw values and charge nothing.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sms/baselines.hpp"
#include "sms/core.hpp"
#include "sms/deferred.hpp"
#include "sms/measures.hpp"
#include "sms/multiselect.hpp"
#include "sms/sort.hpp"

namespace sms {

using Value = std::int64_t;

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

enum class Family { example1, example2, example3, example4, random_runs, file };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::example1: return "example1";
        case Family::example2: return "example2";
        case Family::example3: return "example3";
        case Family::example4: return "example4";
        case Family::random_runs: return "random";
        default: return "file";
    }
}

inline Family family_from_name(const std::string& s) {
    if (s == "example1") return Family::example1;
    if (s == "example2") return Family::example2;
    if (s == "example3") return Family::example3;
    if (s == "example4") return Family::example4;
    if (s == "random") return Family::random_runs;
    if (s == "file") return Family::file;
    throw std::invalid_argument("unknown family: " + s);
}

struct InstanceSpec {
    Family family = Family::random_runs;
    std::size_t n = 0;
    std::size_t sigma = 0;  // random: value universe [1..sigma] (0: defaults to n)
    std::size_t rho = 0;    // example3/4 and random: requested runs
    std::size_t phi = 0;    // random: requested pre-existing pivot positions
    std::uint64_t seed = 1;
};

inline std::vector<Value> gen_instance(const InstanceSpec& spec) {
    std::vector<Value> v;
    v.reserve(spec.n);
    switch (spec.family) {
        case Family::example1:
            for (std::size_t i = 0; i < spec.n; ++i) v.push_back(i % 2 == 0 ? 1 : 2);
            break;
        case Family::example2:
            for (std::size_t i = 0; i < spec.n; ++i) v.push_back(static_cast<Value>(i + 1));
            break;
        case Family::example3: {
            if (spec.rho == 0 || spec.sigma == 0 || spec.rho * spec.sigma != spec.n)
                throw std::invalid_argument("example3 requires n = rho * sigma");
            for (std::size_t r = 0; r < spec.rho; ++r)
                for (std::size_t x = 1; x <= spec.sigma; ++x) v.push_back(static_cast<Value>(x));
            break;
        }
        case Family::example4: {
            if (spec.rho == 0 || spec.n % spec.rho != 0)
                throw std::invalid_argument("example4 requires rho dividing n");
            const std::size_t len = spec.n / spec.rho;
            for (std::size_t r = spec.rho; r-- > 0;)
                for (std::size_t x = 1; x <= len; ++x)
                    v.push_back(static_cast<Value>(r * len + x));
            break;
        }
        case Family::random_runs: {
            const std::size_t sigma = spec.sigma ? spec.sigma : std::max<std::size_t>(spec.n, 1);
            const std::size_t rho = std::max<std::size_t>(spec.rho, 1);
            const std::size_t segments = spec.phi + 1;
            std::mt19937_64 rng(spec.seed);
            // phi pivot targets: split into value-disjoint consecutive pieces
            for (std::size_t s = 0; s < segments && spec.n > 0; ++s) {
                std::size_t seg_lo = spec.n * s / segments;
                std::size_t seg_hi = spec.n * (s + 1) / segments;
                std::size_t seg_n = seg_hi - seg_lo;
                if (seg_n == 0) continue;
                Value base = static_cast<Value>(sigma * s);
                std::size_t chunks = std::max<std::size_t>(1, rho / segments);
                for (std::size_t c = 0; c < chunks && seg_n > 0; ++c) {
                    std::size_t chunk_lo = seg_n * c / chunks;
                    std::size_t chunk_hi = seg_n * (c + 1) / chunks;
                    std::vector<Value> chunk;
                    for (std::size_t k = chunk_lo; k < chunk_hi; ++k)
                        chunk.push_back(base + 1 +
                                        static_cast<Value>(rng() % std::max<std::size_t>(sigma, 1)));
                    std::sort(chunk.begin(), chunk.end());
                    v.insert(v.end(), chunk.begin(), chunk.end());
                }
            }
            break;
        }
        default:
            throw std::invalid_argument("gen_instance: family 'file' needs an explicit path");
    }
    return v;
}

// instance file format: one integer per line, decimal, newline-terminated
inline void write_instance_file(const std::string& path, const std::vector<Value>& v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    for (Value x : v) out << x << "\n";
}

inline std::vector<Value> read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read instance file: " + path);
    std::vector<Value> v;
    Value x;
    while (in >> x) v.push_back(x);
    return v;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

enum class QueryKind { select_only, rank_only, mixed };
enum class GapProfile { uniform, clustered, single, all };
enum class QueryOrder { sorted, reverse, random_order, ping_pong };

struct QuerySpec {
    QueryKind kind = QueryKind::select_only;
    std::size_t q = 1;
    GapProfile gaps = GapProfile::uniform;
    std::size_t clusters = 4;  // for GapProfile::clustered
    QueryOrder order = QueryOrder::sorted;
    double mix_rank_fraction = 0.5;  // for QueryKind::mixed
    std::uint64_t seed = 1;

    std::string label() const {
        std::string k = kind == QueryKind::select_only ? "select"
                        : kind == QueryKind::rank_only ? "rank"
                                                       : "mixed";
        std::string g = gaps == GapProfile::uniform   ? "uniform"
                        : gaps == GapProfile::clustered ? "clustered"
                        : gaps == GapProfile::single    ? "single"
                                                        : "all";
        std::string o = order == QueryOrder::sorted    ? "sorted"
                        : order == QueryOrder::reverse ? "reverse"
                        : order == QueryOrder::random_order ? "random"
                                                            : "pingpong";
        return k + ":" + g + ":q=" + std::to_string(q) + ":order=" + o;
    }
};

// ranks in requested order (1-based)
inline std::vector<std::size_t> gen_select_ranks(const QuerySpec& spec, std::size_t n) {
    if (n == 0) return {};
    std::vector<std::size_t> ranks;
    switch (spec.gaps) {
        case GapProfile::uniform: {
            if (spec.q > n) throw std::invalid_argument("q exceeds n for distinct select ranks");
            for (std::size_t i = 1; i <= spec.q; ++i) {
                std::size_t r = n * i / (spec.q + 1);
                ranks.push_back(std::max<std::size_t>(1, std::min(n, r)));
            }
            break;
        }
        case GapProfile::clustered: {
            if (spec.q > n) throw std::invalid_argument("q exceeds n for distinct select ranks");
            std::size_t k = std::max<std::size_t>(1, std::min(spec.clusters, spec.q));
            std::size_t per = spec.q / k, extra = spec.q % k;
            for (std::size_t c = 0; c < k; ++c) {
                std::size_t count = per + (c < extra ? 1 : 0);
                std::size_t center = n * (c + 1) / (k + 1);
                for (std::size_t j = 0; j < count; ++j) {
                    std::size_t r = center + j;
                    ranks.push_back(std::max<std::size_t>(1, std::min(n, r)));
                }
            }
            break;
        }
        case GapProfile::single: ranks.push_back(std::max<std::size_t>(1, n / 2)); break;
        case GapProfile::all:
            for (std::size_t r = 1; r <= n; ++r) ranks.push_back(r);
            break;
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    switch (spec.order) {
        case QueryOrder::sorted: break;
        case QueryOrder::reverse: std::reverse(ranks.begin(), ranks.end()); break;
        case QueryOrder::random_order: {
            std::mt19937_64 rng(spec.seed);
            std::shuffle(ranks.begin(), ranks.end(), rng);
            break;
        }
        case QueryOrder::ping_pong: {
            std::vector<std::size_t> out;
            std::size_t lo = 0, hi = ranks.size();
            while (lo < hi) {
                out.push_back(ranks[lo++]);
                if (lo < hi) out.push_back(ranks[--hi]);
            }
            ranks = std::move(out);
            break;
        }
    }
    return ranks;
}

struct TraceOp {
    char kind;  // 'S' or 'R'
    Value arg;  // rank for S, value for R
};

// online trace honoring kind mix and order; rank arguments are values at the
// generated positions, occasionally nudged to probe absent values
inline std::vector<TraceOp> gen_trace(const QuerySpec& spec, const std::vector<Value>& values) {
    std::vector<std::size_t> ranks = gen_select_ranks(spec, values.size());
    std::vector<Value> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::mt19937_64 rng(spec.seed ^ 0x5eedf00dULL);
    std::vector<TraceOp> ops;
    ops.reserve(ranks.size());
    for (std::size_t r : ranks) {
        bool as_rank = spec.kind == QueryKind::rank_only ||
                       (spec.kind == QueryKind::mixed &&
                        std::uniform_real_distribution<double>(0, 1)(rng) < spec.mix_rank_fraction);
        if (as_rank) {
            Value x = sorted[r - 1];
            if ((rng() & 3) == 0) x += 1;  // sometimes probe a possibly-absent value
            ops.push_back({'R', x});
        } else {
            ops.push_back({'S', static_cast<Value>(r)});
        }
    }
    return ops;
}

inline void write_trace_file(const std::string& path, const std::vector<TraceOp>& ops) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    for (const TraceOp& op : ops) out << op.kind << " " << op.arg << "\n";
}

inline std::vector<TraceOp> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read trace file: " + path);
    std::vector<TraceOp> ops;
    std::string kind;
    Value arg;
    while (in >> kind >> arg) {
        if (kind != "S" && kind != "R") throw std::runtime_error("bad trace line in " + path);
        ops.push_back({kind[0], arg});
    }
    return ops;
}

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Oracles (uncounted ground truth)
// ---------------------------------------------------------------------------

template <typename T>
std::vector<T> oracle_sort(const InstrumentedArray<T>& a) {
    std::vector<T> v = a.values();
    std::sort(v.begin(), v.end());
    return v;
}

template <typename T>
T oracle_select(const InstrumentedArray<T>& a, std::size_t i) {
    if (i < 1 || i > a.size()) throw std::out_of_range("oracle_select rank outside [1..n]");
    std::vector<T> v = oracle_sort(a);
    return v[i - 1];
}

template <typename T>
std::size_t oracle_rank(const InstrumentedArray<T>& a, const T& x) {
    std::size_t c = 0;
    for (const T& v : a.values())
        if (v < x) ++c;
    return c;
}

template <typename T>
BlockDecomposition oracle_blocks(const InstrumentedArray<T>& a) {
    return block_decomposition(a);
}

// ---------------------------------------------------------------------------
// Benchmark matrix
// ---------------------------------------------------------------------------

struct BenchRow {
    std::string family;
    std::size_t n = 0, sigma = 0, rho = 0, phi = 0, delta = 0, chi = 0;
    std::string algorithm;
    std::string qspec = "-";
    std::uint64_t comparisons = 0;
    std::uint64_t index_steps = 0;
    std::uint64_t wall_ns = 0;
    double pred_ms = 0, pred_tk = 0, pred_syn = 0, pred_env = 0;
    bool verified = true;
};

inline const char* kBenchCsvHeader =
    "family,n,sigma,rho,phi,delta,chi,algorithm,qspec,comparisons,index_steps,wall_ns,"
    "pred_ms,pred_tk,pred_syn,pred_env";

inline std::string bench_row_csv(const BenchRow& r) {
    std::ostringstream os;
    os << r.family << ',' << r.n << ',' << r.sigma << ',' << r.rho << ',' << r.phi << ','
       << r.delta << ',' << r.chi << ',' << r.algorithm << ',' << r.qspec << ','
       << r.comparisons << ',' << r.index_steps << ',' << r.wall_ns << ',';
    os.setf(std::ios::fixed);
    os.precision(3);
    os << r.pred_ms << ',' << r.pred_tk << ',' << r.pred_syn << ',' << r.pred_env;
    return os.str();
}

inline const std::vector<std::string>& bench_sorter_names() {
    static const std::vector<std::string> names{
        "merge_sort_counters", "minimal_merge_sort", "small_vs_small_sort", "parallel_race",
        "dlm_sort",            "quick_synergy_sort", "global_sort"};
    return names;
}

// Run one algorithm against one instance; fills measured fields and verifies
// the answers against the oracles.
inline BenchRow bench_one(const std::vector<Value>& values, const InstanceProfile& prof,
                          const std::string& family, const std::string& algo,
                          const QuerySpec* qspec) {
    BenchRow row;
    row.family = family;
    row.n = prof.n;
    row.sigma = prof.sigma;
    row.rho = prof.rho;
    row.phi = prof.phi;
    row.delta = prof.delta;
    row.chi = prof.chi;
    row.algorithm = algo;
    if (prof.n > 0) {
        row.pred_ms = predictor_munro_spira(prof.n, prof.multiplicities);
        row.pred_tk = predictor_takaoka(prof.n, prof.run_sizes);
        row.pred_syn = predictor_synergy(prof.n, prof.block_sizes, prof.pi_weights, prof.rho);
        std::vector<std::size_t> all(prof.n);
        for (std::size_t i = 0; i < prof.n; ++i) all[i] = i + 1;
        row.pred_env = predictor_envelope(prof.n, all);
    }

    InstrumentedArray<Value> a(values);
    std::vector<Value> expect = oracle_sort(a);
    auto t0 = std::chrono::steady_clock::now();

    auto verify_sorted = [&](const std::vector<Value>& got) { row.verified = got == expect; };

    if (algo == "merge_sort_counters") {
        verify_sorted(merge_sort_counters(a).expand());
        row.comparisons = a.comparisons();
    } else if (algo == "minimal_merge_sort") {
        verify_sorted(minimal_merge_sort(a));
        row.comparisons = a.comparisons();
    } else if (algo == "small_vs_small_sort") {
        verify_sorted(small_vs_small_sort(a).expand());
        row.comparisons = a.comparisons();
    } else if (algo == "parallel_race") {
        RaceOutcome<Value> rc = parallel_race(a);
        verify_sorted(rc.sorted);
        row.comparisons = rc.reported_cost;
    } else if (algo == "dlm_sort") {
        verify_sorted(dlm_sort(a).sorted.expand());
        row.comparisons = a.comparisons();
    } else if (algo == "quick_synergy_sort") {
        verify_sorted(quick_synergy_sort(a).sorted);
        row.comparisons = a.comparisons();
    } else if (algo == "global_sort") {
        verify_sorted(global_sort(a).sorted);
        row.comparisons = a.comparisons();
    } else if (algo == "multiselect" || algo == "multiselect_global") {
        QuerySpec qs = qspec ? *qspec : QuerySpec{};
        row.qspec = qs.label();
        std::vector<std::size_t> ranks = gen_select_ranks(qs, prof.n);
        auto res = algo == "multiselect" ? multiselect(a, ranks) : multiselect_with_global(a, ranks);
        row.comparisons = res.report.comparisons;
        row.pred_env = prof.n && !ranks.empty() ? predictor_envelope(prof.n, ranks) : 0.0;
        row.verified = true;
        for (std::size_t k = 0; k < ranks.size(); ++k)
            if (res.answers[k] != expect[ranks[k] - 1]) row.verified = false;
    } else if (algo == "defer_ram" || algo == "defer_finger") {
        QuerySpec qs = qspec ? *qspec : QuerySpec{};
        row.qspec = qs.label();
        std::vector<TraceOp> ops = gen_trace(qs, values);
        std::vector<std::size_t> env_ranks;
        for (const TraceOp& op : ops)
            if (op.kind == 'S') env_ranks.push_back(static_cast<std::size_t>(op.arg));
        row.pred_env = prof.n && !env_ranks.empty() ? predictor_envelope(prof.n, env_ranks) : 0.0;
        row.verified = true;
        auto replay = [&](auto& dds) {
            for (const TraceOp& op : ops) {
                if (op.kind == 'S') {
                    if (dds.select(static_cast<std::size_t>(op.arg)) !=
                        expect[static_cast<std::size_t>(op.arg) - 1])
                        row.verified = false;
                } else {
                    if (dds.rank(op.arg) != oracle_rank(a, op.arg)) row.verified = false;
                }
            }
            row.comparisons = dds.key_comparisons();
            row.index_steps = dds.index_steps();
        };
        if (algo == "defer_ram") {
            RamDeferred<Value> dds(a);
            replay(dds);
        } else {
            FingerDeferred<Value> dds(a);
            replay(dds);
        }
    } else {
        throw std::invalid_argument("unknown algorithm: " + algo);
    }
    row.wall_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    return row;
}

struct BenchConfig {
    std::vector<InstanceSpec> instances;
    std::vector<std::string> algorithms;
    std::vector<QuerySpec> query_specs;  // applied to query-driven algorithms
    std::size_t repetitions = 1;
};

inline bool algo_takes_queries(const std::string& algo) {
    return algo == "multiselect" || algo == "multiselect_global" || algo == "defer_ram" ||
           algo == "defer_finger";
}

inline std::size_t bench_worker_count() {
    if (const char* env = std::getenv("SMS_THREADS")) {
        long t = std::atol(env);
        if (t >= 1) return static_cast<std::size_t>(t);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Full matrix, one row per (instance, algorithm, qspec, repetition), rows
// emitted in deterministic cell order regardless of the worker pool.
inline std::vector<BenchRow> bench_run(const BenchConfig& cfg) {
    struct Cell {
        InstanceSpec inst;
        std::string algo;
        const QuerySpec* qs;
    };
    std::vector<Cell> cells;
    for (const InstanceSpec& inst : cfg.instances)
        for (const std::string& algo : cfg.algorithms) {
            if (algo_takes_queries(algo)) {
                for (const QuerySpec& qs : cfg.query_specs) {
                    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
                        cells.push_back({inst, algo, &qs});
                }
            } else {
                for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
                    cells.push_back({inst, algo, nullptr});
            }
        }

    std::vector<BenchRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) break;
            const Cell& c = cells[k];
            std::vector<Value> values = gen_instance(c.inst);
            InstrumentedArray<Value> probe(values);
            InstanceProfile prof = profile_instance(probe);
            rows[k] = bench_one(values, prof, family_name(c.inst.family), c.algo, c.qs);
        }
    };
    std::size_t workers = std::min(bench_worker_count(), std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace sms
