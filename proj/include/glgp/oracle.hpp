#pragma once

#include "glgp/availability.hpp"
#include "glgp/hypergraph.hpp"
#include "glgp/rset.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace glgp {

/// Available r-sets, lexicographically sorted. Independent of enumerate_Q: reverse
/// colex scan, clique test through the pair cover of H, and cycle test by explicit
/// edge sequences checked against a standalone cycle predicate.
std::vector<RSet> naive_Q(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam);

/// Standalone check that the edges, in order, form a linear cycle.
bool oracle_is_linear_cycle(const std::vector<RSet>& edges);

enum class DestroyerMethod { Direct, InclusionExclusion };

/// Number of available r-sets sharing at least two vertices with the clique f.
/// Throws NotAClique.
std::int64_t count_Q_destroyers(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                                const RSet& f, DestroyerMethod method);

/// sum_{j=2}^{s} (-1)^{s-j} C(s, j)
std::int64_t alternating_binomial_sum(int s);

enum class OverlapKind { Upsilon, Psi, Lambda };

struct OverlapAnchors {
    RSet f;
    std::vector<RSet> cycle; // Psi: the copy L' (must contain f)
    int len = 0;             // Lambda: cycle length
    int k_minus_1 = 0;       // Lambda: H-edge count of the copies
};

/// Brute-force size of an overcount set:
///  Upsilon: g in Q \ {f} such that H + {f, g} has at least two forbidden cycles through f and g.
///  Psi: h in Q \ {f} such that at least two r-sets of (L' & Q) \ {h} are unavailable in H + h.
///  Lambda: h in L' & Q \ {f}, over L' counted by W(f, len, k-1), such that some r-set of
///          (L' & Q) \ {h} is unavailable in H + h.
/// Throws InvalidAnchor.
std::uint64_t count_overlap_sets(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                                 OverlapKind kind, const OverlapAnchors& anchors);

/// Number of linear cycles of length in [3, ell] among `edges` that contain both
/// edges[a] and edges[b] (a == b allowed).
std::uint64_t count_cycles_containing(const std::vector<RSet>& edges, std::size_t a, std::size_t b, int ell);

enum class SearchOrder { ColexAscending, ColexDescending };

struct TuranResult {
    std::size_t n = 0;
    int r = 0;
    int ell = 0;
    std::size_t max_edges = 0;
    LinearHypergraph witness;
    std::uint64_t node_count = 0;
};

struct ForbCount {
    std::size_t n = 0;
    int r = 0;
    int ell = 0;
    std::uint64_t count = 0;
    std::uint64_t node_count = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 200'000'000;

/// Maximum edge count of a linear r-graph on [n] with linear girth > ell.
/// Throws BudgetExceeded (message carries the incumbent lower bound).
TuranResult ex_L_exact(std::size_t n, int r, int ell, SearchOrder order = SearchOrder::ColexAscending,
                       std::uint64_t node_budget = kDefaultNodeBudget);

/// Number of labeled linear r-graphs on [n] with linear girth > ell. Throws BudgetExceeded.
ForbCount forb_count_exact(std::size_t n, int r, int ell, SearchOrder order = SearchOrder::ColexAscending,
                           std::uint64_t node_budget = kDefaultNodeBudget);

/// Random greedy maximal linear packing (no girth constraint).
LinearHypergraph greedy_linear_packing(std::size_t n, int r, std::uint64_t seed);

/// Every linear cycle of length in [3, ell], each as its sorted edge list.
std::vector<std::vector<RSet>> enumerate_short_cycles(const LinearHypergraph& H, int ell);

struct DeletionReport {
    std::size_t base_edges = 0;
    double keep_probability = 0;
    std::size_t retained = 0;       // after thinning
    std::size_t cycles_hit = 0;     // short cycles that cost an edge
    std::size_t final_edges = 0;
    LinearHypergraph result;
};

/// Thins a random greedy linear packing at rate n^{-(1-1/ell)}, then deletes the
/// lexicographically smallest edge of each short cycle until none is left.
DeletionReport deletion_construct(std::size_t n, int r, int ell, std::uint64_t seed);

} // namespace glgp
