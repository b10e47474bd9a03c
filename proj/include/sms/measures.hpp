#pragma once
// measures.hpp - difficulty measures of an instance (entropies, block
// decomposition, partition pi) and evaluable versions of every cost
// predictor used by the benchmark and acceptance tests.
//
// Everything here is analysis machinery: it reads raw values and never
// touches the instrumented comparison counter, so it is never on any
// algorithm's comparison budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sms/core.hpp"

namespace sms {

// H(c_1..c_k) = sum (c_i/n) * log2(n/c_i), in bits.
inline double entropy(const std::vector<std::size_t>& counts) {
    if (counts.empty()) throw std::invalid_argument("entropy: empty count list");
    std::size_t n = 0;
    for (std::size_t c : counts) {
        if (c == 0) throw std::invalid_argument("entropy: zero count");
        n += c;
    }
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == n) continue;  // 1 * log(1) = 0
        double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log2(p);
    }
    return h;
}

// One block: a maximal stretch of a run that is contiguous in the sorted
// output; values of multiplicity >= 2 are exploded into size-1 blocks.
struct Block {
    int run = -1;
    std::size_t start = 0;   // absolute input index
    std::size_t length = 0;
};

struct PiMember {
    enum Kind { block, multiplicity_singleton } kind = block;
    std::size_t weight = 1;  // m_i: 1 for blocks, multiplicity for singletons
};

struct BlockDecomposition {
    std::vector<Block> blocks;        // in sorted-output order
    std::vector<PiMember> pi_members; // in sorted-output order
    std::size_t delta() const { return blocks.size(); }
    std::size_t chi() const { return pi_members.size(); }
    std::vector<std::size_t> block_sizes() const {
        std::vector<std::size_t> g(blocks.size());
        for (std::size_t i = 0; i < blocks.size(); ++i) g[i] = blocks[i].length;
        return g;
    }
    std::vector<std::size_t> pi_weights() const {
        std::vector<std::size_t> m(pi_members.size());
        for (std::size_t i = 0; i < pi_members.size(); ++i) m[i] = pi_members[i].weight;
        return m;
    }
};

// Oracle computation (sorts internally, uncounted): blocks in sorted-output
// order, ties between equal-valued size-1 blocks broken by run id.
template <typename T>
BlockDecomposition block_decomposition(const InstrumentedArray<T>& a) {
    BlockDecomposition bd;
    const std::size_t n = a.size();
    if (n == 0) return bd;
    const std::vector<T>& v = a.values();

    // runs, uncounted
    std::vector<int> run_of(n, 0);
    int runs = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i - 1] > v[i]) ++runs;
        run_of[i] = runs - 1;
    }

    // multiplicities
    std::vector<T> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto multiplicity = [&](const T& x) {
        auto r = std::equal_range(sorted.begin(), sorted.end(), x);
        return static_cast<std::size_t>(r.second - r.first);
    };
    auto next_distinct_is = [&](const T& x, const T& y) {
        // y is the successor value of x in the sorted distinct universe
        auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        return it != sorted.end() && *it == y;
    };

    // carve maximal blocks inside each run
    std::vector<Block> blocks;
    std::size_t i = 0;
    while (i < n) {
        if (multiplicity(v[i]) > 1) {
            blocks.push_back({run_of[i], i, 1});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && run_of[j + 1] == run_of[j] && multiplicity(v[j + 1]) == 1 &&
               next_distinct_is(v[j], v[j + 1]))
            ++j;
        blocks.push_back({run_of[i], i, j - i + 1});
        i = j + 1;
    }

    // sorted-output order: by first value, ties by run id then position
    std::stable_sort(blocks.begin(), blocks.end(), [&](const Block& x, const Block& y) {
        if (v[x.start] < v[y.start]) return true;
        if (v[y.start] < v[x.start]) return false;
        if (x.run != y.run) return x.run < y.run;
        return x.start < y.start;
    });
    bd.blocks = std::move(blocks);

    // partition pi: group exploded multiplicity singletons by value
    std::size_t k = 0;
    while (k < bd.blocks.size()) {
        const T& x = v[bd.blocks[k].start];
        std::size_t m = multiplicity(x);
        if (m > 1) {
            bd.pi_members.push_back({PiMember::multiplicity_singleton, m});
            k += m;  // its m size-1 blocks are consecutive in sorted order
        } else {
            bd.pi_members.push_back({PiMember::block, 1});
            ++k;
        }
    }
    return bd;
}

// ---------------------------------------------------------------------------
// Predictors (real-valued scales; acceptance fits constants over families)
// ---------------------------------------------------------------------------

inline double predictor_munro_spira(std::size_t n, const std::vector<std::size_t>& multiplicities) {
    if (n == 0) return 0.0;
    return static_cast<double>(n) * (1.0 + entropy(multiplicities));
}

inline double predictor_takaoka(std::size_t n, const std::vector<std::size_t>& run_sizes) {
    if (n == 0) return 0.0;
    return static_cast<double>(n) * (1.0 + entropy(run_sizes));
}

// log2 C(rho, m) via log-gamma; m > rho degenerates to C(rho, rho) = 1.
inline double log2_binomial(std::size_t rho, std::size_t m) {
    if (m >= rho) return 0.0;
    double r = static_cast<double>(rho), k = static_cast<double>(m);
    double ln = std::lgamma(r + 1.0) - std::lgamma(k + 1.0) - std::lgamma(r - k + 1.0);
    return ln / std::log(2.0);
}

inline double predictor_synergy(std::size_t n, const std::vector<std::size_t>& block_sizes,
                                const std::vector<std::size_t>& pi_weights, std::size_t rho) {
    double s = static_cast<double>(n);
    for (std::size_t g : block_sizes) s += std::log2(static_cast<double>(g));
    for (std::size_t m : pi_weights) s += log2_binomial(rho, m);
    return s;
}

inline double xlog2x(double x) { return x <= 1.0 ? 0.0 : x * std::log2(x); }

// n + sum log s_i + beta*log rho - sum m_i log m_i - sum rho_i log rho_i
inline double predictor_multiselect(std::size_t n, const std::vector<std::size_t>& selection_block_sizes,
                                    std::size_t beta, std::size_t rho,
                                    const std::vector<std::size_t>& pivot_block_counts,
                                    const std::vector<std::size_t>& segment_run_counts) {
    double s = static_cast<double>(n);
    for (std::size_t x : selection_block_sizes) s += std::log2(static_cast<double>(std::max<std::size_t>(x, 1)));
    if (rho > 1) s += static_cast<double>(beta) * std::log2(static_cast<double>(rho));
    for (std::size_t m : pivot_block_counts) s -= xlog2x(static_cast<double>(m));
    for (std::size_t r : segment_run_counts) s -= xlog2x(static_cast<double>(r));
    return s;
}

// n log n - sum Delta_i log Delta_i with r_0 = 0, r_{q+1} = n, 0 log 0 = 0.
inline double predictor_envelope(std::size_t n, const std::vector<std::size_t>& ranks) {
    for (std::size_t r : ranks)
        if (r < 1 || r > n) throw std::out_of_range("predictor_envelope: rank outside [1..n]");
    std::vector<std::size_t> rs = ranks;
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    double s = xlog2x(static_cast<double>(n));
    std::size_t prev = 0;
    for (std::size_t r : rs) {
        s -= xlog2x(static_cast<double>(r - prev));
        prev = r;
    }
    s -= xlog2x(static_cast<double>(n - prev));
    return s;
}

// ---------------------------------------------------------------------------
// Instance descriptors and cost reports
// ---------------------------------------------------------------------------

// Everything the predictors need about one instance, computed once by the
// uncounted oracle path.
struct InstanceProfile {
    std::size_t n = 0;
    std::size_t rho = 0;    // runs
    std::size_t sigma = 0;  // distinct values
    std::size_t delta = 0;  // blocks
    std::size_t chi = 0;    // pi members
    std::size_t phi = 0;    // pre-existing pivot positions
    std::vector<std::size_t> run_sizes;
    std::vector<std::size_t> multiplicities;
    std::vector<std::size_t> block_sizes;
    std::vector<std::size_t> pi_weights;
};

template <typename T>
InstanceProfile profile_instance(const InstrumentedArray<T>& a) {
    InstanceProfile p;
    p.n = a.size();
    const std::vector<T>& v = a.values();
    if (p.n == 0) return p;

    p.rho = 1;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i < p.n; ++i) {
        if (v[i - 1] > v[i]) {
            p.run_sizes.push_back(i - run_start);
            run_start = i;
            ++p.rho;
        }
    }
    p.run_sizes.push_back(p.n - run_start);

    std::vector<T> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < p.n) {
        std::size_t j = i;
        while (j + 1 < p.n && !(sorted[i] < sorted[j + 1])) ++j;
        p.multiplicities.push_back(j - i + 1);
        i = j + 1;
    }
    p.sigma = p.multiplicities.size();

    // pivot positions, uncounted
    std::vector<T> pre(p.n), suf(p.n);
    pre[0] = v[0];
    for (std::size_t k = 1; k < p.n; ++k) pre[k] = std::max(pre[k - 1], v[k]);
    suf[p.n - 1] = v[p.n - 1];
    for (std::size_t k = p.n - 1; k-- > 0;) suf[k] = std::min(suf[k + 1], v[k]);
    for (std::size_t pos = 2; pos <= p.n; ++pos)
        if (!(suf[pos - 1] < pre[pos - 2])) ++p.phi;

    BlockDecomposition bd = block_decomposition(a);
    p.delta = bd.delta();
    p.chi = bd.chi();
    p.block_sizes = bd.block_sizes();
    p.pi_weights = bd.pi_weights();
    return p;
}

// Measured cost of one algorithm run alongside the evaluated predictors.
struct CostReport {
    std::string algorithm;
    std::uint64_t comparisons = 0;
    std::uint64_t index_steps = 0;
    std::size_t n = 0, rho = 0, sigma = 0, delta = 0, chi = 0, phi = 0;
    std::map<std::string, double> predictors;

    std::string to_string() const {
        std::string s;
        s += "algorithm: " + algorithm + "\n";
        s += "n=" + std::to_string(n) + " rho=" + std::to_string(rho) +
             " sigma=" + std::to_string(sigma) + " delta=" + std::to_string(delta) +
             " chi=" + std::to_string(chi) + " phi=" + std::to_string(phi) + "\n";
        s += "comparisons: " + std::to_string(comparisons);
        if (index_steps) s += "  index_steps: " + std::to_string(index_steps);
        s += "\n";
        for (const auto& [k, val] : predictors) {
            s += "  predictor " + k + " = " + std::to_string(val);
            if (val > 0.0)
                s += "  (measured/predictor = " +
                     std::to_string(static_cast<double>(comparisons) / val) + ")";
            s += "\n";
        }
        return s;
    }
};

inline CostReport make_report(const std::string& algorithm, const InstanceProfile& p,
                              std::uint64_t comparisons, std::uint64_t index_steps = 0) {
    CostReport r;
    r.algorithm = algorithm;
    r.comparisons = comparisons;
    r.index_steps = index_steps;
    r.n = p.n;
    r.rho = p.rho;
    r.sigma = p.sigma;
    r.delta = p.delta;
    r.chi = p.chi;
    r.phi = p.phi;
    if (p.n > 0) {
        r.predictors["munro_spira"] = predictor_munro_spira(p.n, p.multiplicities);
        r.predictors["takaoka"] = predictor_takaoka(p.n, p.run_sizes);
        r.predictors["synergy"] = predictor_synergy(p.n, p.block_sizes, p.pi_weights, p.rho);
        std::vector<std::size_t> all(p.n);
        std::iota(all.begin(), all.end(), 1);
        r.predictors["envelope"] = predictor_envelope(p.n, all);
    }
    return r;
}

}  // namespace sms
