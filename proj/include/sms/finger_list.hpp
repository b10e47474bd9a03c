#pragma once
// finger_list.hpp - a skip list over the resolved-record sequence supporting
// finger searches: each lookup starts from the previously accessed position
// and costs hops logarithmic in the entry distance. Entries are ordered by
// rank interval, which coincides with value order, so the same list serves
// rank-keyed lookups (free integer tests) and value-keyed lookups (charged
// key comparisons).

#include <bit>
#include <cstdint>
#include <vector>

#include "sms/core.hpp"

namespace sms {

template <typename T>
class RecordFingerList {
public:
    enum ValKind { val_neg_inf, val_keyed, val_pos_inf };

    struct Node {
        int rec = -1;
        std::int64_t rank_key = 0;
        ValKind vkind = val_keyed;
        const T* val = nullptr;
        std::vector<Node*> next;
    };

    RecordFingerList(const InstrumentedArray<T>* a, std::uint64_t* hops)
        : a_(a), hops_(hops) {
        head_ = new Node;
        head_->rank_key = INT64_MIN;
        head_->vkind = val_neg_inf;
        head_->next.assign(kMaxLevel, nullptr);
        path_.assign(kMaxLevel, head_);
    }
    ~RecordFingerList() {
        Node* n = head_;
        while (n) {
            Node* nx = n->next[0];
            delete n;
            n = nx;
        }
    }
    RecordFingerList(const RecordFingerList&) = delete;
    RecordFingerList& operator=(const RecordFingerList&) = delete;

    std::size_t size() const { return size_; }
    Node* first() const { return head_->next[0]; }
    static Node* next_of(Node* n) { return n->next[0]; }

    // Last node with rank_key <= k (nullptr if none). Integer tests are
    // structural navigation only.
    Node* search_rank(std::int64_t k) {
        auto leq = [k](const Node* n) { return n->rank_key <= k; };
        Node* r = finger_search(leq);
        return r == head_ ? nullptr : r;
    }

    // Last node whose value key is <= x; charges one key comparison per
    // keyed node tested.
    Node* search_value(const T& x) {
        const InstrumentedArray<T>* a = a_;
        auto leq = [a, &x](const Node* n) {
            if (n->vkind == val_neg_inf) return true;
            if (n->vkind == val_pos_inf) return false;
            return a->cmp_values(x, *n->val) >= 0;  // node value <= x
        };
        Node* r = finger_search(leq);
        return r == head_ ? nullptr : r;
    }

    // Insert a record; repositions by rank key, then splices a tower of
    // random height. Insertion right at the finger costs one peek.
    Node* insert(int rec, std::int64_t rank_key, ValKind vk, const T* val) {
        Node* nx = path_[0]->next[0];
        bool at_finger = path_[0]->rank_key <= rank_key && (!nx || nx->rank_key > rank_key);
        ++*hops_;  // the successor peek
        if (!at_finger) {
            auto leq = [rank_key](const Node* n) { return n->rank_key <= rank_key; };
            finger_search(leq);
        }
        int h = random_height();
        if (h > level_) {
            level_ = h;
        }
        Node* node = new Node;
        node->rec = rec;
        node->rank_key = rank_key;
        node->vkind = vk;
        node->val = val;
        node->next.assign(static_cast<std::size_t>(h) + 1, nullptr);
        for (int l = 0; l <= h; ++l) {
            node->next[l] = path_[l]->next[l];
            path_[l]->next[l] = node;
            path_[l] = node;
        }
        ++size_;
        return node;
    }

private:
    static constexpr int kMaxLevel = 40;

    // Finger search for the last node satisfying the monotone `leq`
    // predicate. The stored path holds, per level, a node known to satisfy
    // it for the previous target; path nodes are positionally monotone, so
    // one predicate test per level decides how far to climb.
    template <typename Leq>
    Node* finger_search(Leq leq) {
        int level;
        if (test(leq, path_[0])) {
            // target is at or right of the finger: climb while the stored
            // upper levels can still advance toward it
            level = 0;
            while (level < level_) {
                Node* nx = path_[level + 1]->next[level + 1];
                if (nx && test(leq, nx)) ++level;
                else break;
            }
        } else {
            // target is left of the finger: climb to the first stored node
            // that is not past it. Path nodes are positionally monotone
            // going up and the top entries stay at the head, so this stops.
            level = 0;
            do {
                ++level;
            } while (!test(leq, path_[level]));
        }
        Node* cur = path_[level];
        for (int l = level; l >= 0; --l) {
            while (cur->next[l] && test(leq, cur->next[l])) cur = cur->next[l];
            path_[l] = cur;
        }
        return cur;
    }

    template <typename Leq>
    bool test(Leq& leq, const Node* n) {
        ++*hops_;
        return leq(n);
    }

    int random_height() {
        // xorshift64, fixed seed: deterministic structure
        rng_ ^= rng_ << 13;
        rng_ ^= rng_ >> 7;
        rng_ ^= rng_ << 17;
        int h = std::countr_one(rng_);
        return h >= kMaxLevel - 1 ? kMaxLevel - 2 : h;  // top slot stays at head
    }

    const InstrumentedArray<T>* a_;
    std::uint64_t* hops_;
    Node* head_;
    std::vector<Node*> path_;
    int level_ = 0;
    std::size_t size_ = 0;
    std::uint64_t rng_ = 0x9e3779b97f4a7c15ull;
};

}  // namespace sms
