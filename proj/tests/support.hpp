#pragma once

#include "glgp/hypergraph.hpp"
#include "glgp/process.hpp"
#include "glgp/rng.hpp"
#include "glgp/rset.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace testsupport {

using glgp::RSet;
using glgp::Vertex;

inline RSet random_rset(std::size_t n, int r, glgp::Rng& rng) {
    std::vector<Vertex> vs;
    while (static_cast<int>(vs.size()) < r) {
        const auto x = static_cast<Vertex>(rng.uniform_below(n));
        if (std::find(vs.begin(), vs.end(), x) == vs.end()) vs.push_back(x);
    }
    return RSet(std::span<const Vertex>(vs));
}

/// Random linear hypergraph built by rejection; no girth constraint.
inline glgp::LinearHypergraph random_linear(std::size_t n, int r, std::size_t edges, glgp::Rng& rng) {
    glgp::LinearHypergraph H(n, r);
    for (int attempt = 0; attempt < 2000 && H.size() < edges; ++attempt) {
        const RSet f = random_rset(n, r, rng);
        if (H.can_add(f)) H.add_edge(f);
    }
    return H;
}

/// Process state after `steps` steps (or termination).
inline glgp::ProcessState state_after(std::size_t n, int r, int ell, std::uint64_t seed, std::size_t steps) {
    glgp::ProcessState st(n, r, ell, seed);
    while (st.i() < steps && !st.Q().empty()) st.step();
    return st;
}

/// Cycle test straight from the definition: cyclically consecutive edges share
/// exactly one vertex, the others are disjoint, and the shared vertices are distinct.
inline bool is_cycle_in_order(const std::vector<RSet>& es) {
    const std::size_t L = es.size();
    if (L < 3) return false;
    std::set<Vertex> joints;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = a + 1; b < L; ++b) {
            std::vector<Vertex> common;
            std::set_intersection(es[a].begin(), es[a].end(), es[b].begin(), es[b].end(),
                                  std::back_inserter(common));
            const bool adjacent = b == a + 1 || (a == 0 && b == L - 1);
            if (adjacent) {
                if (common.size() != 1) return false;
                joints.insert(common[0]);
            } else if (!common.empty()) {
                return false;
            }
        }
    return joints.size() == L;
}

/// True iff some ordering of the edge set is a linear cycle.
inline bool is_cycle_set(std::vector<RSet> es) {
    std::sort(es.begin() + 1, es.end());
    do {
        if (is_cycle_in_order(es)) return true;
    } while (std::next_permutation(es.begin() + 1, es.end()));
    return false;
}

/// Calls fn on every k-subset of items (by index).
inline void for_each_combination(std::size_t size, int k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int depth) {
        if (depth == k) {
            fn(idx);
            return;
        }
        for (std::size_t j = from; j + static_cast<std::size_t>(k - depth) <= size; ++j) {
            idx[static_cast<std::size_t>(depth)] = j;
            rec(j + 1, depth + 1);
        }
    };
    rec(0, 0);
}

/// Smallest j in [3, cap] such that some j edges form a linear cycle; 0 if none.
inline int brute_girth(const std::vector<RSet>& edges, int cap) {
    for (int j = 3; j <= cap; ++j) {
        bool found = false;
        for_each_combination(edges.size(), j, [&](const std::vector<std::size_t>& idx) {
            if (found) return;
            std::vector<RSet> es;
            for (auto k : idx) es.push_back(edges[k]);
            found = is_cycle_set(es);
        });
        if (found) return j;
    }
    return 0;
}

/// True iff f together with some j-1 edges of H forms a C_j, 3 <= j <= ell.
inline bool brute_closes_cycle(const std::vector<RSet>& edges, const RSet& f, int ell) {
    for (int j = 3; j <= ell; ++j) {
        bool found = false;
        for_each_combination(edges.size(), j - 1, [&](const std::vector<std::size_t>& idx) {
            if (found) return;
            std::vector<RSet> es{f};
            for (auto k : idx) es.push_back(edges[k]);
            found = is_cycle_set(es);
        });
        if (found) return true;
    }
    return false;
}

inline bool pairs_uncovered(const std::vector<RSet>& edges, const RSet& f) {
    for (const RSet& e : edges)
        if (e.intersection_size(f) >= 2) return false;
    return true;
}

/// Available r-sets by the definition: uncovered pairs and no short cycle through f.
inline std::vector<RSet> brute_Q(const std::vector<RSet>& edges, std::size_t n, int r, int ell) {
    std::vector<RSet> out;
    glgp::for_each_kset(n, r, [&](const RSet& f) {
        if (pairs_uncovered(edges, f) && !brute_closes_cycle(edges, f, ell)) out.push_back(f);
    });
    return out;
}

/// Every r-set of [0, n).
inline std::vector<RSet> all_rsets(std::size_t n, int r) {
    std::vector<RSet> out;
    glgp::for_each_kset(n, r, [&](const RSet& f) { out.push_back(f); });
    return out;
}

/// Copies of C_len (as edge sets) containing f among the r-sets of [0, n), each
/// passed to fn once.
inline void for_each_cycle_through(std::size_t n, int r, const RSet& f, int len,
                                   const std::function<void(const std::vector<RSet>&)>& fn) {
    std::vector<RSet> others;
    for (const RSet& g : all_rsets(n, r))
        if (g != f && g.intersection_size(f) <= 1) others.push_back(g);
    for_each_combination(others.size(), len - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<RSet> es{f};
        for (auto k : idx) es.push_back(others[k]);
        if (is_cycle_set(es)) fn(es);
    });
}

} // namespace testsupport
