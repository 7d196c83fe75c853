#pragma once

#include "glgp/bitset.hpp"
#include "glgp/rset.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace glgp {

using EdgeId = std::uint32_t;
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Linear r-uniform hypergraph on [0, n). Any pair of vertices lies in at most one edge.
class LinearHypergraph {
public:
    LinearHypergraph() = default;
    LinearHypergraph(std::size_t n, int r);

    std::size_t n() const { return n_; }
    int r() const { return r_; }
    std::size_t size() const { return edges_.size(); }
    const std::vector<RSet>& edges() const { return edges_; }
    const RSet& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<EdgeId>& incident(Vertex x) const { return incidence_[x]; }

    /// Edge covering the pair {x, y}, or kNoEdge.
    EdgeId cover(Vertex x, Vertex y) const { return pair_cover_[x * n_ + y]; }
    bool covered(Vertex x, Vertex y) const { return cover(x, y) != kNoEdge; }
    std::size_t covered_pairs() const { return covered_pairs_; }

    /// True iff f has the right size, is in range and none of its pairs is covered.
    bool can_add(const RSet& f) const;

    /// Appends f. Throws LinearityViolation if a pair of f is already covered.
    EdgeId add_edge(const RSet& f);

    /// Removes the most recently added edge.
    void pop_edge();

    bool has_edge(const RSet& f) const;

private:
    std::size_t n_ = 0;
    int r_ = 0;
    std::vector<RSet> edges_;
    std::vector<std::vector<EdgeId>> incidence_;
    std::vector<EdgeId> pair_cover_;
    std::size_t covered_pairs_ = 0;
};

/// Graph of vertex pairs not covered by any hyperedge.
class HostGraph {
public:
    HostGraph() = default;
    explicit HostGraph(std::size_t n);

    std::size_t n() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }
    bool adjacent(Vertex x, Vertex y) const { return x != y && rows_[x].test(y); }
    const VertexBits& neighbors(Vertex x) const { return rows_[x]; }

    void remove_pair(Vertex x, Vertex y);
    /// Removes every pair of f.
    void remove_clique(const RSet& f);
    bool is_clique(const RSet& f) const;

private:
    std::size_t n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<VertexBits> rows_;
};

HostGraph host_graph(const LinearHypergraph& H);

/// Loose path: edges e_1..e_s with consecutive edges sharing exactly one vertex
/// and non-consecutive edges disjoint.
struct LinearPath {
    std::vector<EdgeId> edges;
};

/// Every loose path from u to v of length in [min_len, max_len] whose vertices other
/// than u and v avoid `avoid`. u lies only in the first edge and v only in the last.
/// Edge `skip` (if given) is treated as absent.
std::vector<LinearPath> find_linear_paths(const LinearHypergraph& H, Vertex u, Vertex v, int min_len,
                                          int max_len, const std::vector<Vertex>& avoid,
                                          EdgeId skip = kNoEdge);

bool has_linear_path(const LinearHypergraph& H, Vertex u, Vertex v, int min_len, int max_len,
                     const std::vector<Vertex>& avoid, EdgeId skip = kNoEdge);

/// Linear girth truncated at a cap; zero encodes "no cycle of length <= cap".
class Girth {
public:
    static Girth infinite() { return Girth(0); }
    static Girth finite(int v) { return Girth(v); }

    bool is_infinite() const { return value_ == 0; }
    int value() const { return value_; }
    bool operator==(const Girth&) const = default;

private:
    explicit Girth(int v) : value_(v) {}
    int value_ = 0;
};

Girth linear_girth(const LinearHypergraph& H, int cap);

/// True iff the given edges, in order, form a linear cycle.
bool is_linear_cycle(const std::vector<RSet>& edges);

void write_hypergraph(std::ostream& os, const LinearHypergraph& H);
LinearHypergraph read_hypergraph(std::istream& is);

} // namespace glgp
