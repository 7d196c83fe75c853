#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace glgp {

using Vertex = std::uint32_t;

inline constexpr int kMaxUniformity = 8;

/// Sorted set of at most kMaxUniformity distinct vertices. Used for hyperedges,
/// candidate cliques and the smaller m-sets.
class RSet {
public:
    RSet() = default;
    RSet(std::initializer_list<Vertex> vs);
    explicit RSet(std::span<const Vertex> vs);

    /// Validates distinctness and range; sorts. Throws InvalidParams.
    static RSet make(std::span<const Vertex> vs, std::size_t n);

    int size() const { return size_; }
    bool empty() const { return size_ == 0; }
    Vertex operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    const Vertex* begin() const { return v_.data(); }
    const Vertex* end() const { return v_.data() + size_; }

    bool contains(Vertex x) const;
    int intersection_size(const RSet& o) const;
    RSet without(Vertex x) const;
    RSet with(Vertex x) const;

    std::string str() const;

    friend bool operator==(const RSet& a, const RSet& b) {
        return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
    }
    friend std::strong_ordering operator<=>(const RSet& a, const RSet& b) {
        return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
    }

private:
    std::array<Vertex, kMaxUniformity> v_{};
    std::uint8_t size_ = 0;
};

struct RSetHash {
    std::size_t operator()(const RSet& s) const noexcept;
};

/// Exact binomial coefficient; saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Falling factorial (n)_k as a double (may be large).
double falling_factorial(double n, int k);

/// Colex ranking of r-subsets of [0, n): rank(S) = sum_j C(s_j, j+1).
class Colex {
public:
    Colex() = default;
    Colex(std::size_t n, int r);

    std::size_t n() const { return n_; }
    int r() const { return r_; }
    std::uint64_t total() const { return total_; }

    std::uint64_t rank(const RSet& s) const;
    RSet unrank(std::uint64_t rank) const;

    std::uint64_t c(std::size_t a, int b) const { return table_[a * (r_ + 1) + b]; }

private:
    std::size_t n_ = 0;
    int r_ = 0;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> table_;
};

/// Dense set of r-sets with O(1) membership, uniform sampling and removal.
/// Members are stored as colex ranks; removal swaps with the last slot.
class RSetPool {
public:
    static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

    RSetPool() = default;
    RSetPool(std::size_t n, int r);

    const Colex& colex() const { return colex_; }
    std::size_t size() const { return dense_.size(); }
    bool empty() const { return dense_.empty(); }

    bool contains(const RSet& s) const { return contains_rank(colex_.rank(s)); }
    bool contains_rank(std::uint64_t rk) const { return pos_[rk] != kAbsent; }

    void insert(const RSet& s);
    /// Inserts every r-set, in colex order.
    void fill_all();
    bool erase(const RSet& s);
    bool erase_rank(std::uint64_t rk);

    RSet at(std::size_t idx) const { return colex_.unrank(dense_[idx]); }
    std::uint64_t rank_at(std::size_t idx) const { return dense_[idx]; }

    /// Members in lexicographic order.
    std::vector<RSet> sorted() const;

private:
    Colex colex_;
    std::vector<std::uint32_t> dense_;
    std::vector<std::uint32_t> pos_;
};

/// Calls fn(subset) for every k-subset of s, in lexicographic order.
void for_each_subset(const RSet& s, int k, const std::function<void(const RSet&)>& fn);

/// Calls fn(subset) for every k-subset of [0, n), in lexicographic order.
void for_each_kset(std::size_t n, int k, const std::function<void(const RSet&)>& fn);

} // namespace glgp
