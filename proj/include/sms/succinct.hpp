#pragma once
// succinct.hpp - compressed multiset representations built from three
// primitives: a bitvector with rank/select, a sequence with
// rank/select/access (balanced alphabet decomposition), and a permutation
// with an inverse accelerated by cycle shortcuts. All positions and ranks in
// the public interfaces are 1-based.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "sms/core.hpp"
#include "sms/measures.hpp"

namespace sms {

struct SpaceReport {
    std::vector<std::pair<std::string, std::size_t>> components;  // (name, bits)
    std::size_t total_bits() const {
        std::size_t t = 0;
        for (const auto& c : components) t += c.second;
        return t;
    }
    std::string to_string() const {
        std::string s;
        for (const auto& c : components)
            s += c.first + ": " + std::to_string(c.second) + " bits\n";
        s += "total: " + std::to_string(total_bits()) + " bits\n";
        return s;
    }
};

// ---------------------------------------------------------------------------
// Bitvector with a two-level rank directory and sampled select
// ---------------------------------------------------------------------------

class BitVectorRS {
public:
    BitVectorRS() = default;
    BitVectorRS(std::vector<std::uint64_t> words, std::size_t nbits)
        : words_(std::move(words)), n_(nbits) {
        words_.resize((n_ + 63) / 64, 0);
        if (n_ % 64) words_.back() &= (~std::uint64_t{0}) >> (64 - n_ % 64);
        build_directory();
    }
    static BitVectorRS from_bools(const std::vector<bool>& bits) {
        std::vector<std::uint64_t> w((bits.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
        return BitVectorRS(std::move(w), bits.size());
    }

    std::size_t size() const { return n_; }
    std::size_t ones() const { return ones_; }
    bool bit(std::size_t i) const {  // 1-based
        return (words_[(i - 1) / 64] >> ((i - 1) % 64)) & 1u;
    }

    // number of ones among positions [1..i]; rank1(0) == 0
    std::size_t rank1(std::size_t i) const {
        if (i == 0) return 0;
        if (i > n_) i = n_;
        const std::size_t p = i;  // prefix of p bits
        std::size_t r = abs_[p / superblock_bits()] + rel_[p / block_bits()];
        const std::size_t wfirst = (p / block_bits()) * block_words();
        const std::size_t wlast = p / 64;
        for (std::size_t w = wfirst; w < wlast; ++w) r += std::popcount(words_[w]);
        if (p % 64)
            r += std::popcount(words_[wlast] & ((~std::uint64_t{0}) >> (64 - p % 64)));
        return r;
    }
    std::size_t rank0(std::size_t i) const { return std::min(i, n_) - rank1(i); }

    // position of the j-th one, 1-based
    std::size_t select1(std::size_t j) const {
        if (j == 0 || j > ones_) throw std::out_of_range("select1: out of range");
        // superblock range from the sample
        std::size_t sb_lo = samples_.empty() ? 0 : samples_[(j - 1) / kSelectSample];
        std::size_t sb_hi = ((j - 1) / kSelectSample + 1 < samples_.size())
                                ? samples_[(j - 1) / kSelectSample + 1] + 1
                                : abs_.size() - 1;
        while (sb_lo < sb_hi) {  // last superblock with abs < j
            std::size_t mid = sb_lo + (sb_hi - sb_lo + 1) / 2;
            if (abs_[mid] < j) sb_lo = mid;
            else sb_hi = mid - 1;
        }
        const std::size_t base = abs_[sb_lo];
        std::size_t blk_lo = sb_lo * blocks_per_superblock();
        // real blocks only: the final rel_ slot is a sentinel
        std::size_t blk_hi = std::min(blk_lo + blocks_per_superblock(), rel_.size() - 1) - 1;
        while (blk_lo < blk_hi) {  // last block with base+rel < j
            std::size_t mid = blk_lo + (blk_hi - blk_lo + 1) / 2;
            if (base + rel_[mid] < j) blk_lo = mid;
            else blk_hi = mid - 1;
        }
        std::size_t need = j - base - rel_[blk_lo];
        for (std::size_t w = blk_lo * block_words(); w < words_.size(); ++w) {
            std::size_t c = std::popcount(words_[w]);
            if (need > c) {
                need -= c;
                continue;
            }
            std::uint64_t word = words_[w];
            for (std::size_t b = 1; b < need; ++b) word &= word - 1;  // drop lowest ones
            return w * 64 + std::countr_zero(word) + 1;
        }
        throw std::logic_error("select1: directory inconsistent");
    }

    // position of the j-th zero, 1-based (binary search over rank0)
    std::size_t select0(std::size_t j) const {
        if (j == 0 || j > n_ - ones_) throw std::out_of_range("select0: out of range");
        std::size_t lo = 1, hi = n_;
        while (lo < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            if (rank0(mid) >= j) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    }

    std::size_t payload_bits() const { return n_; }
    std::size_t directory_bits() const {
        return abs_.size() * 32 + rel_.size() * 16 + samples_.size() * 32;
    }
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    // directory scale grows with the vector so overhead shrinks relative to n
    std::size_t scale() const {
        std::size_t lg = std::bit_width(std::max<std::size_t>(n_, 2) - 1);
        std::size_t k = lg / 6;
        return k < 1 ? 1 : (k > 7 ? 7 : k);
    }
    std::size_t block_words() const { return scale(); }
    std::size_t block_bits() const { return 64 * block_words(); }
    std::size_t blocks_per_superblock() const { return 128; }
    std::size_t superblock_bits() const { return block_bits() * blocks_per_superblock(); }
    static constexpr std::size_t kSelectSample = 8192;

    void build_directory() {
        const std::size_t nb = n_ / block_bits() + 1;
        const std::size_t nsb = n_ / superblock_bits() + 1;
        rel_.assign(nb + 1, 0);
        abs_.assign(nsb + 1, 0);
        std::size_t total = 0, sb_base = 0;
        for (std::size_t blk = 0; blk < nb; ++blk) {
            if (blk % blocks_per_superblock() == 0) {
                abs_[blk / blocks_per_superblock()] = total;
                sb_base = total;
            }
            rel_[blk] = static_cast<std::uint16_t>(total - sb_base);
            for (std::size_t w = blk * block_words();
                 w < std::min((blk + 1) * block_words(), words_.size()); ++w)
                total += std::popcount(words_[w]);
        }
        abs_[nsb] = total;
        ones_ = total;
        // superblock index holding every kSelectSample-th one
        samples_.clear();
        std::size_t next_sample = 0;  // 0-based index of the sampled one
        for (std::size_t sb = 0; sb + 1 < abs_.size() && next_sample < ones_; ++sb) {
            while (next_sample < ones_ && abs_[sb] <= next_sample && next_sample < abs_[sb + 1]) {
                samples_.push_back(static_cast<std::uint32_t>(sb));
                next_sample += kSelectSample;
            }
        }
    }

    std::vector<std::uint64_t> words_;
    std::size_t n_ = 0;
    std::size_t ones_ = 0;
    std::vector<std::uint32_t> abs_;
    std::vector<std::uint16_t> rel_;
    std::vector<std::uint32_t> samples_;
};

// ---------------------------------------------------------------------------
// Sequence over [1..rho] with rank/select/access
// ---------------------------------------------------------------------------

class SequenceRS {
public:
    SequenceRS() = default;
    // symbols are 1-based in [1..alphabet]
    SequenceRS(const std::vector<std::uint32_t>& syms, std::size_t alphabet)
        : n_(syms.size()), alphabet_(std::max<std::size_t>(alphabet, 1)) {
        if (alphabet_ > 1) build(syms);
    }

    std::size_t size() const { return n_; }
    std::size_t alphabet() const { return alphabet_; }

    std::uint32_t access(std::size_t j) const {  // 1-based position
        if (j == 0 || j > n_) throw std::out_of_range("sequence access");
        if (alphabet_ == 1) return 1;
        std::size_t node = 0, lo = 1, hi = alphabet_;
        while (lo < hi) {
            const Node& nd = nodes_[node];
            std::size_t mid = lo + (hi - lo) / 2;
            if (nd.bits.bit(j)) {
                j = nd.bits.rank1(j);
                node = nd.right;
                lo = mid + 1;
            } else {
                j = nd.bits.rank0(j);
                node = nd.left;
                hi = mid;
            }
        }
        return static_cast<std::uint32_t>(lo);
    }

    // occurrences of c in positions [1..j]
    std::size_t rank(std::uint32_t c, std::size_t j) const {
        if (c < 1 || c > alphabet_) return 0;
        if (j > n_) j = n_;
        if (j == 0) return 0;
        if (alphabet_ == 1) return j;
        std::size_t node = 0, lo = 1, hi = alphabet_;
        while (lo < hi && j > 0) {
            const Node& nd = nodes_[node];
            std::size_t mid = lo + (hi - lo) / 2;
            if (c > mid) {
                j = nd.bits.rank1(j);
                node = nd.right;
                lo = mid + 1;
            } else {
                j = nd.bits.rank0(j);
                node = nd.left;
                hi = mid;
            }
        }
        return j;
    }

    // position of the i-th occurrence of c, 1-based
    std::size_t select(std::uint32_t c, std::size_t i) const {
        if (c < 1 || c > alphabet_) throw std::out_of_range("sequence select: symbol");
        if (alphabet_ == 1) {
            if (i == 0 || i > n_) throw std::out_of_range("sequence select");
            return i;
        }
        return select_rec(0, 1, alphabet_, c, i);
    }

    std::size_t space_bits() const {
        std::size_t s = 0;
        for (const Node& nd : nodes_) s += nd.bits.payload_bits() + nd.bits.directory_bits();
        return s;
    }
    std::size_t payload_bits() const {
        std::size_t s = 0;
        for (const Node& nd : nodes_) s += nd.bits.payload_bits();
        return s;
    }

private:
    struct Node {
        BitVectorRS bits;
        int left = -1, right = -1;
    };

    void build(const std::vector<std::uint32_t>& syms) {
        build_rec(syms, 1, alphabet_);
    }
    int build_rec(const std::vector<std::uint32_t>& syms, std::size_t lo, std::size_t hi) {
        if (lo >= hi) return -1;
        const std::size_t mid = lo + (hi - lo) / 2;
        std::vector<bool> bits(syms.size());
        std::vector<std::uint32_t> ls, rs;
        for (std::size_t k = 0; k < syms.size(); ++k) {
            if (syms[k] > mid) {
                bits[k] = true;
                rs.push_back(syms[k]);
            } else {
                ls.push_back(syms[k]);
            }
        }
        int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].bits = BitVectorRS::from_bools(bits);
        int l = build_rec(ls, lo, mid);
        int r = build_rec(rs, mid + 1, hi);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }
    std::size_t select_rec(int node, std::size_t lo, std::size_t hi, std::uint32_t c,
                           std::size_t i) const {
        if (lo >= hi) return i;  // leaf: i-th occurrence is at offset i
        const Node& nd = nodes_[node];
        std::size_t mid = lo + (hi - lo) / 2;
        if (c > mid) {
            std::size_t p = select_rec(nd.right, mid + 1, hi, c, i);
            return nd.bits.select1(p);
        }
        std::size_t p = select_rec(nd.left, lo, mid, c, i);
        return nd.bits.select0(p);
    }

    std::size_t n_ = 0;
    std::size_t alphabet_ = 1;
    std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Packed fixed-width integer array
// ---------------------------------------------------------------------------

class PackedArray {
public:
    PackedArray() = default;
    PackedArray(std::size_t count, unsigned width)
        : count_(count), width_(width == 0 ? 1 : width),
          words_((count * width_ + 63) / 64 + 1, 0) {}

    std::size_t size() const { return count_; }
    unsigned width() const { return width_; }
    void set(std::size_t i, std::uint64_t v) {
        const std::size_t bit = i * width_;
        const std::size_t w = bit / 64, off = bit % 64;
        const std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0}
                                                : ((std::uint64_t{1} << width_) - 1);
        words_[w] = (words_[w] & ~(mask << off)) | ((v & mask) << off);
        if (off + width_ > 64) {
            const unsigned spill = static_cast<unsigned>(off + width_ - 64);
            const std::uint64_t hi_mask = (std::uint64_t{1} << spill) - 1;
            words_[w + 1] = (words_[w + 1] & ~hi_mask) | ((v & mask) >> (width_ - spill));
        }
    }
    std::uint64_t get(std::size_t i) const {
        const std::size_t bit = i * width_;
        const std::size_t w = bit / 64, off = bit % 64;
        const std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0}
                                                : ((std::uint64_t{1} << width_) - 1);
        std::uint64_t v = words_[w] >> off;
        if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
        return v & mask;
    }
    std::size_t space_bits() const { return count_ * width_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

private:
    std::size_t count_ = 0;
    unsigned width_ = 1;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Permutation with cycle-shortcut inverse
// ---------------------------------------------------------------------------

class PermutationRS {
public:
    PermutationRS() = default;
    // pi is 1-based: pi[i-1] = image of i
    explicit PermutationRS(const std::vector<std::size_t>& pi) { build(pi); }

    std::size_t size() const { return n_; }
    std::size_t shortcut_period() const { return t_; }

    std::size_t apply(std::size_t i) const {  // pi(i)
        return static_cast<std::size_t>(perm_.get(i - 1)) + 1;
    }
    std::size_t inverse(std::size_t i) const {
        std::size_t visits = 0;
        return inverse_with_stats(i, visits);
    }
    // walks at most t+1 elements: forward to the first shortcut, one jump
    // back, forward to the predecessor
    std::size_t inverse_with_stats(std::size_t i, std::size_t& visits) const {
        std::size_t cur = i;
        visits = 1;
        bool jumped = false;
        while (apply(cur) != i) {
            if (!jumped && has_shortcut_.size() > 0 && has_shortcut_.bit(cur)) {
                std::size_t idx = has_shortcut_.rank1(cur);
                cur = static_cast<std::size_t>(shortcuts_.get(idx - 1)) + 1;
                jumped = true;
            } else {
                cur = apply(cur);
            }
            ++visits;
        }
        return cur;
    }

    std::size_t space_bits() const {
        return perm_.space_bits() + has_shortcut_.payload_bits() +
               has_shortcut_.directory_bits() + shortcuts_.space_bits();
    }
    const PackedArray& packed() const { return perm_; }

private:
    void build(const std::vector<std::size_t>& pi) {
        n_ = pi.size();
        const unsigned w =
            static_cast<unsigned>(std::bit_width(std::max<std::size_t>(n_, 2) - 1));
        perm_ = PackedArray(n_, w);
        for (std::size_t i = 0; i < n_; ++i) perm_.set(i, pi[i] - 1);

        const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n_, 2)));
        const double lglg = std::log2(std::max(lg, 2.0));
        t_ = static_cast<std::size_t>(std::ceil(lg / lglg));
        if (t_ < 1) t_ = 1;

        std::vector<bool> mark(n_ + 1, false);
        std::vector<std::pair<std::size_t, std::size_t>> shortcut_list;  // (node, target)
        std::vector<bool> visited(n_ + 1, false);
        for (std::size_t s = 1; s <= n_; ++s) {
            if (visited[s]) continue;
            std::vector<std::size_t> cycle;
            std::size_t cur = s;
            while (!visited[cur]) {
                visited[cur] = true;
                cycle.push_back(cur);
                cur = pi[cur - 1];
            }
            if (cycle.size() > t_) {
                for (std::size_t off = 0; off < cycle.size(); off += t_) {
                    std::size_t back = (off + cycle.size() - t_) % cycle.size();
                    mark[cycle[off]] = true;
                    shortcut_list.emplace_back(cycle[off], cycle[back]);
                }
            }
        }
        std::vector<bool> bits(n_);
        for (std::size_t i = 1; i <= n_; ++i) bits[i - 1] = mark[i];
        has_shortcut_ = BitVectorRS::from_bools(bits);
        std::sort(shortcut_list.begin(), shortcut_list.end());
        shortcuts_ = PackedArray(shortcut_list.size(), perm_.width());
        for (std::size_t k = 0; k < shortcut_list.size(); ++k)
            shortcuts_.set(k, shortcut_list[k].second - 1);
    }

    std::size_t n_ = 0;
    std::size_t t_ = 1;
    PackedArray perm_;
    BitVectorRS has_shortcut_;
    PackedArray shortcuts_;
};

// ---------------------------------------------------------------------------
// The two compressed multiset representations
// ---------------------------------------------------------------------------

namespace detail {

struct CdsLayout {
    std::size_t n = 0, delta = 0, rho = 0;
    std::vector<bool> a_bits;               // block starts in rank space
    std::vector<bool> b_bits;               // block starts in input order
    std::vector<bool> c_bits;               // run starts in input order
    std::vector<std::uint32_t> run_of_sorted_block;  // 1-based run ids
    std::vector<std::size_t> sorted_to_original;     // 1-based block ordinals
};

template <typename T>
CdsLayout cds_layout(const InstrumentedArray<T>& a) {
    CdsLayout L;
    L.n = a.size();
    BlockDecomposition bd = block_decomposition(a);
    L.delta = bd.delta();
    L.a_bits.assign(L.n, false);
    L.b_bits.assign(L.n, false);
    L.c_bits.assign(L.n, false);

    if (L.n == 0) return L;
    const auto& v = a.values();
    L.c_bits[0] = true;
    L.rho = 1;
    for (std::size_t i = 1; i < L.n; ++i)
        if (v[i - 1] > v[i]) {
            L.c_bits[i] = true;
            ++L.rho;
        }

    std::size_t rank_cursor = 0;
    for (const Block& b : bd.blocks) {
        L.a_bits[rank_cursor] = true;
        rank_cursor += b.length;
        L.b_bits[b.start] = true;
        L.run_of_sorted_block.push_back(static_cast<std::uint32_t>(b.run) + 1);
    }
    // original block ordinals by start position
    std::vector<std::size_t> starts;
    for (const Block& b : bd.blocks) starts.push_back(b.start);
    std::vector<std::size_t> sorted_starts = starts;
    std::sort(sorted_starts.begin(), sorted_starts.end());
    for (std::size_t s : starts) {
        std::size_t ord = std::lower_bound(sorted_starts.begin(), sorted_starts.end(), s) -
                          sorted_starts.begin();
        L.sorted_to_original.push_back(ord + 1);
    }
    return L;
}

}  // namespace detail

// Bitvectors over rank space (A), input order (B) and run starts (C), plus
// the run id of each sorted block: rank by position chases C->B->S->A,
// select chases A->S->B.
class RankAwareCDS {
public:
    RankAwareCDS() = default;
    template <typename T>
    explicit RankAwareCDS(const InstrumentedArray<T>& arr) {
        detail::CdsLayout L = detail::cds_layout(arr);
        n_ = L.n;
        delta_ = L.delta;
        rho_ = L.rho;
        a_ = BitVectorRS::from_bools(L.a_bits);
        b_ = BitVectorRS::from_bools(L.b_bits);
        c_ = BitVectorRS::from_bools(L.c_bits);
        s_ = SequenceRS(L.run_of_sorted_block, rho_);
    }

    std::size_t size() const { return n_; }
    std::size_t blocks() const { return delta_; }
    std::size_t runs() const { return rho_; }

    // original position (1-based) of the i-th smallest element
    std::size_t select(std::size_t i) const {
        check_range(i);
        const std::size_t j = a_.rank1(i);              // sorted block holding rank i
        const std::uint32_t r = s_.access(j);           // its run
        const std::size_t p = s_.rank(r, j);            // ordinal within the run
        const std::size_t q = c_.select1(r);            // run start position
        const std::size_t before = b_.rank1(q - 1);     // blocks before the run
        const std::size_t start = b_.select1(before + p);
        return start + (i - a_.select1(j));
    }
    // elements placed before input position i's element in the canonical
    // sorted order (for distinct values: the strictly-smaller count)
    std::size_t rank(std::size_t i) const {
        check_range(i);
        return block_first_rank(i) + (i - block_start(i)) - 1;
    }
    // rank (1-based) of the first element of i's block
    std::size_t block_first_rank(std::size_t i) const {
        check_range(i);
        const std::size_t r = c_.rank1(i);               // run containing i
        const std::size_t q = c_.select1(r);             // run start
        const std::size_t p = b_.rank1(i) - b_.rank1(q - 1);  // block ordinal in run
        const std::size_t j = s_.select(static_cast<std::uint32_t>(r), p);
        return a_.select1(j);
    }
    std::size_t block_start(std::size_t i) const { return b_.select1(b_.rank1(i)); }

    SpaceReport space_report() const {
        SpaceReport sr;
        sr.components.push_back({"A payload", a_.payload_bits()});
        sr.components.push_back({"A directory", a_.directory_bits()});
        sr.components.push_back({"B payload", b_.payload_bits()});
        sr.components.push_back({"B directory", b_.directory_bits()});
        sr.components.push_back({"C payload", c_.payload_bits()});
        sr.components.push_back({"C directory", c_.directory_bits()});
        sr.components.push_back({"S payload", s_.payload_bits()});
        sr.components.push_back({"S directory", s_.space_bits() - s_.payload_bits()});
        return sr;
    }

    std::vector<std::uint8_t> serialize() const;
    static RankAwareCDS deserialize(const std::vector<std::uint8_t>& bytes);

private:
    void check_range(std::size_t i) const {
        if (i < 1 || i > n_) throw std::out_of_range("cds index outside [1..n]");
    }
    friend struct CdsSerde;
    std::size_t n_ = 0, delta_ = 0, rho_ = 0;
    BitVectorRS a_, b_, c_;
    SequenceRS s_;
};

// Bitvectors A and B plus the permutation mapping sorted block ordinals to
// original block ordinals: select chases A->pi->B, rank chases B->pi^-1->A.
class SelectAwareCDS {
public:
    SelectAwareCDS() = default;
    template <typename T>
    explicit SelectAwareCDS(const InstrumentedArray<T>& arr) {
        detail::CdsLayout L = detail::cds_layout(arr);
        n_ = L.n;
        delta_ = L.delta;
        rho_ = L.rho;
        a_ = BitVectorRS::from_bools(L.a_bits);
        b_ = BitVectorRS::from_bools(L.b_bits);
        pi_ = PermutationRS(L.sorted_to_original);
    }

    std::size_t size() const { return n_; }
    std::size_t blocks() const { return delta_; }
    std::size_t runs() const { return rho_; }

    std::size_t select(std::size_t i) const {
        check_range(i);
        const std::size_t j = a_.rank1(i);
        const std::size_t p = pi_.apply(j);
        return b_.select1(p) + (i - a_.select1(j));
    }
    std::size_t rank(std::size_t i) const {
        check_range(i);
        return block_first_rank(i) + (i - block_start(i)) - 1;
    }
    std::size_t block_first_rank(std::size_t i) const {
        check_range(i);
        const std::size_t jb = b_.rank1(i);
        const std::size_t s = pi_.inverse(jb);
        return a_.select1(s);
    }
    std::size_t block_start(std::size_t i) const { return b_.select1(b_.rank1(i)); }
    const PermutationRS& permutation() const { return pi_; }

    SpaceReport space_report() const {
        SpaceReport sr;
        sr.components.push_back({"A payload", a_.payload_bits()});
        sr.components.push_back({"A directory", a_.directory_bits()});
        sr.components.push_back({"B payload", b_.payload_bits()});
        sr.components.push_back({"B directory", b_.directory_bits()});
        sr.components.push_back({"pi", pi_.space_bits()});
        return sr;
    }

    std::vector<std::uint8_t> serialize() const;
    static SelectAwareCDS deserialize(const std::vector<std::uint8_t>& bytes);

private:
    void check_range(std::size_t i) const {
        if (i < 1 || i > n_) throw std::out_of_range("cds index outside [1..n]");
    }
    friend struct CdsSerde;
    std::size_t n_ = 0, delta_ = 0, rho_ = 0;
    BitVectorRS a_, b_;
    PermutationRS pi_;
};

// ---------------------------------------------------------------------------
// Serialization: little-endian, length-prefixed components, "SMCDS1" magic
// ---------------------------------------------------------------------------

struct CdsSerde {
    static void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    static std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t& at) {
        if (at + 8 > in.size()) throw std::runtime_error("cds deserialize: truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{in[at + i]} << (8 * i);
        at += 8;
        return v;
    }
    static void put_bits(std::vector<std::uint8_t>& out, const BitVectorRS& bv) {
        put_u64(out, bv.size());
        put_u64(out, bv.words().size());
        for (std::uint64_t w : bv.words()) put_u64(out, w);
    }
    static BitVectorRS get_bits(const std::vector<std::uint8_t>& in, std::size_t& at) {
        std::uint64_t n = get_u64(in, at);
        std::uint64_t nw = get_u64(in, at);
        std::vector<std::uint64_t> words(nw);
        for (auto& w : words) w = get_u64(in, at);
        return BitVectorRS(std::move(words), n);
    }
    static void put_header(std::vector<std::uint8_t>& out, std::uint8_t kind) {
        const char magic[6] = {'S', 'M', 'C', 'D', 'S', '1'};
        out.insert(out.end(), magic, magic + 6);
        out.push_back(kind);
    }
    static std::uint8_t check_header(const std::vector<std::uint8_t>& in, std::size_t& at) {
        const char magic[6] = {'S', 'M', 'C', 'D', 'S', '1'};
        if (in.size() < 7 || std::memcmp(in.data(), magic, 6) != 0)
            throw std::runtime_error("cds deserialize: bad magic");
        at = 7;
        return in[6];
    }
};

inline std::vector<std::uint8_t> RankAwareCDS::serialize() const {
    std::vector<std::uint8_t> out;
    CdsSerde::put_header(out, 1);
    CdsSerde::put_u64(out, n_);
    CdsSerde::put_u64(out, delta_);
    CdsSerde::put_u64(out, rho_);
    CdsSerde::put_bits(out, a_);
    CdsSerde::put_bits(out, b_);
    CdsSerde::put_bits(out, c_);
    // sequence payload: packed symbols, rebuilt into the tree on load
    const unsigned w =
        static_cast<unsigned>(std::bit_width(std::max<std::size_t>(rho_, 2) - 1));
    PackedArray syms(delta_, w);
    for (std::size_t j = 1; j <= delta_; ++j) syms.set(j - 1, s_.access(j) - 1);
    CdsSerde::put_u64(out, syms.words().size());
    for (std::uint64_t x : syms.words()) CdsSerde::put_u64(out, x);
    return out;
}

inline RankAwareCDS RankAwareCDS::deserialize(const std::vector<std::uint8_t>& bytes) {
    RankAwareCDS c;
    std::size_t at = 0;
    if (CdsSerde::check_header(bytes, at) != 1)
        throw std::runtime_error("cds deserialize: wrong kind");
    c.n_ = CdsSerde::get_u64(bytes, at);
    c.delta_ = CdsSerde::get_u64(bytes, at);
    c.rho_ = CdsSerde::get_u64(bytes, at);
    c.a_ = CdsSerde::get_bits(bytes, at);
    c.b_ = CdsSerde::get_bits(bytes, at);
    c.c_ = CdsSerde::get_bits(bytes, at);
    const unsigned w =
        static_cast<unsigned>(std::bit_width(std::max<std::size_t>(c.rho_, 2) - 1));
    PackedArray syms(c.delta_, w);
    std::uint64_t nw = CdsSerde::get_u64(bytes, at);
    if (nw != syms.words().size()) throw std::runtime_error("cds deserialize: bad payload");
    for (auto& x : syms.words()) x = CdsSerde::get_u64(bytes, at);
    std::vector<std::uint32_t> ss(c.delta_);
    for (std::size_t j = 0; j < c.delta_; ++j)
        ss[j] = static_cast<std::uint32_t>(syms.get(j)) + 1;
    c.s_ = SequenceRS(ss, c.rho_);
    return c;
}

inline std::vector<std::uint8_t> SelectAwareCDS::serialize() const {
    std::vector<std::uint8_t> out;
    CdsSerde::put_header(out, 2);
    CdsSerde::put_u64(out, n_);
    CdsSerde::put_u64(out, delta_);
    CdsSerde::put_u64(out, rho_);
    CdsSerde::put_bits(out, a_);
    CdsSerde::put_bits(out, b_);
    CdsSerde::put_u64(out, pi_.packed().words().size());
    for (std::uint64_t x : pi_.packed().words()) CdsSerde::put_u64(out, x);
    return out;
}

inline SelectAwareCDS SelectAwareCDS::deserialize(const std::vector<std::uint8_t>& bytes) {
    SelectAwareCDS c;
    std::size_t at = 0;
    if (CdsSerde::check_header(bytes, at) != 2)
        throw std::runtime_error("cds deserialize: wrong kind");
    c.n_ = CdsSerde::get_u64(bytes, at);
    c.delta_ = CdsSerde::get_u64(bytes, at);
    c.rho_ = CdsSerde::get_u64(bytes, at);
    c.a_ = CdsSerde::get_bits(bytes, at);
    c.b_ = CdsSerde::get_bits(bytes, at);
    const unsigned w =
        static_cast<unsigned>(std::bit_width(std::max<std::size_t>(c.delta_, 2) - 1));
    PackedArray perm(c.delta_, w);
    std::uint64_t nw = CdsSerde::get_u64(bytes, at);
    if (nw != perm.words().size()) throw std::runtime_error("cds deserialize: bad payload");
    for (auto& x : perm.words()) x = CdsSerde::get_u64(bytes, at);
    std::vector<std::size_t> pi(c.delta_);
    for (std::size_t j = 0; j < c.delta_; ++j)
        pi[j] = static_cast<std::size_t>(perm.get(j)) + 1;
    c.pi_ = PermutationRS(pi);
    return c;
}

// convenience builders matching the rest of the library's style
template <typename T>
RankAwareCDS build_rank_aware(const InstrumentedArray<T>& a) {
    return RankAwareCDS(a);
}
template <typename T>
SelectAwareCDS build_select_aware(const InstrumentedArray<T>& a) {
    return SelectAwareCDS(a);
}

}  // namespace sms
