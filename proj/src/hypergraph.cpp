#include "glgp/hypergraph.hpp"

#include "glgp/errors.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace glgp {

LinearHypergraph::LinearHypergraph(std::size_t n, int r) : n_(n), r_(r) {
    if (r < 3 || r > kMaxUniformity) throw InvalidParams("uniformity must be in [3, 8]");
    if (n < static_cast<std::size_t>(r)) throw InvalidParams("need n >= r");
    incidence_.resize(n);
    pair_cover_.assign(n * n, kNoEdge);
}

bool LinearHypergraph::can_add(const RSet& f) const {
    if (f.size() != r_ || f[r_ - 1] >= n_) return false;
    for (int a = 0; a < r_; ++a)
        for (int b = a + 1; b < r_; ++b)
            if (covered(f[a], f[b])) return false;
    return true;
}

EdgeId LinearHypergraph::add_edge(const RSet& f) {
    if (f.size() != r_) throw InvalidParams("edge has wrong size");
    if (f[r_ - 1] >= n_) throw InvalidParams("edge vertex out of range");
    for (int a = 0; a < r_; ++a)
        for (int b = a + 1; b < r_; ++b)
            if (covered(f[a], f[b]))
                throw LinearityViolation("pair {" + std::to_string(f[a]) + "," + std::to_string(f[b]) +
                                         "} already covered");
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(f);
    for (int a = 0; a < r_; ++a) {
        incidence_[f[a]].push_back(id);
        for (int b = a + 1; b < r_; ++b) {
            pair_cover_[f[a] * n_ + f[b]] = id;
            pair_cover_[f[b] * n_ + f[a]] = id;
            ++covered_pairs_;
        }
    }
    return id;
}

void LinearHypergraph::pop_edge() {
    if (edges_.empty()) return;
    const RSet f = edges_.back();
    edges_.pop_back();
    for (int a = 0; a < r_; ++a) {
        incidence_[f[a]].pop_back();
        for (int b = a + 1; b < r_; ++b) {
            pair_cover_[f[a] * n_ + f[b]] = kNoEdge;
            pair_cover_[f[b] * n_ + f[a]] = kNoEdge;
            --covered_pairs_;
        }
    }
}

bool LinearHypergraph::has_edge(const RSet& f) const {
    if (f.size() != r_ || f[r_ - 1] >= n_) return false;
    const EdgeId e = cover(f[0], f[1]);
    return e != kNoEdge && edges_[e] == f;
}

HostGraph::HostGraph(std::size_t n) : n_(n), edge_count_(n * (n - 1) / 2), rows_(n, VertexBits(n, true)) {
    for (std::size_t x = 0; x < n; ++x) rows_[x].reset(x);
}

void HostGraph::remove_pair(Vertex x, Vertex y) {
    if (!adjacent(x, y)) return;
    rows_[x].reset(y);
    rows_[y].reset(x);
    --edge_count_;
}

void HostGraph::remove_clique(const RSet& f) {
    for (int a = 0; a < f.size(); ++a)
        for (int b = a + 1; b < f.size(); ++b) remove_pair(f[a], f[b]);
}

bool HostGraph::is_clique(const RSet& f) const {
    for (int a = 0; a < f.size(); ++a)
        for (int b = a + 1; b < f.size(); ++b)
            if (!adjacent(f[a], f[b])) return false;
    return true;
}

HostGraph host_graph(const LinearHypergraph& H) {
    HostGraph G(H.n());
    for (const RSet& e : H.edges()) G.remove_clique(e);
    return G;
}

namespace {

// Depth-first enumeration of loose u-v paths. The callback returns true to stop.
template <class Visit>
class PathWalker {
public:
    PathWalker(const LinearHypergraph& H, Vertex u, Vertex v, int min_len, int max_len,
               const std::vector<Vertex>& avoid, EdgeId skip, Visit visit)
        : H_(H), u_(u), v_(v), min_len_(min_len), max_len_(max_len), skip_(skip),
          avoid_(H.n(), 0), used_(H.n(), 0), visit_(visit) {
        for (Vertex x : avoid) avoid_[x] = 1;
    }

    void run() {
        if (u_ == v_ || max_len_ < 1) return;
        used_[u_] = 1;
        for (EdgeId e : H_.incident(u_)) {
            if (stop_) return;
            step(e, u_);
        }
    }

private:
    bool edge_ok(EdgeId e, Vertex join) const {
        if (e == skip_) return false;
        for (Vertex x : H_.edge(e)) {
            if (x == join) continue;
            if (used_[x]) return false;
            if (x != v_ && avoid_[x]) return false;
        }
        return true;
    }

    void step(EdgeId e, Vertex join) {
        if (!edge_ok(e, join)) return;
        const RSet& f = H_.edge(e);
        path_.push_back(e);
        const int len = static_cast<int>(path_.size());
        if (f.contains(v_)) {
            if (len >= min_len_ && visit_(path_)) stop_ = true;
            path_.pop_back();
            return;
        }
        if (len < max_len_) {
            for (Vertex x : f) used_[x] = 1;
            for (Vertex y : f) {
                if (y == join) continue;
                for (EdgeId e2 : H_.incident(y)) {
                    if (stop_) break;
                    if (e2 != e) step(e2, y);
                }
            }
            for (Vertex x : f)
                if (x != join) used_[x] = 0;
        }
        path_.pop_back();
    }

    const LinearHypergraph& H_;
    Vertex u_, v_;
    int min_len_, max_len_;
    EdgeId skip_;
    std::vector<std::uint8_t> avoid_;
    std::vector<std::uint8_t> used_;
    std::vector<EdgeId> path_;
    Visit visit_;
    bool stop_ = false;
};

} // namespace

std::vector<LinearPath> find_linear_paths(const LinearHypergraph& H, Vertex u, Vertex v, int min_len,
                                          int max_len, const std::vector<Vertex>& avoid, EdgeId skip) {
    std::vector<LinearPath> out;
    if (H.size() == 0) return out;
    auto visit = [&](const std::vector<EdgeId>& p) {
        out.push_back(LinearPath{p});
        return false;
    };
    PathWalker<decltype(visit)> w(H, u, v, min_len, max_len, avoid, skip, visit);
    w.run();
    return out;
}

bool has_linear_path(const LinearHypergraph& H, Vertex u, Vertex v, int min_len, int max_len,
                     const std::vector<Vertex>& avoid, EdgeId skip) {
    bool found = false;
    auto visit = [&](const std::vector<EdgeId>&) {
        found = true;
        return true;
    };
    PathWalker<decltype(visit)> w(H, u, v, min_len, max_len, avoid, skip, visit);
    w.run();
    return found;
}

Girth linear_girth(const LinearHypergraph& H, int cap) {
    if (cap < 3) throw InvalidParams("girth cap must be at least 3");
    const int r = H.r();
    std::vector<Vertex> avoid;
    for (int j = 3; j <= cap; ++j) {
        for (EdgeId e = 0; e < H.size(); ++e) {
            const RSet& f = H.edge(e);
            for (int a = 0; a < r; ++a) {
                for (int b = a + 1; b < r; ++b) {
                    avoid.clear();
                    for (int c = 0; c < r; ++c)
                        if (c != a && c != b) avoid.push_back(f[c]);
                    if (has_linear_path(H, f[a], f[b], j - 1, j - 1, avoid, e)) return Girth::finite(j);
                }
            }
        }
    }
    return Girth::infinite();
}

bool is_linear_cycle(const std::vector<RSet>& edges) {
    const std::size_t L = edges.size();
    if (L < 3) return false;
    for (std::size_t i = 0; i < L; ++i) {
        if (edges[i].size() != edges[0].size()) return false;
        for (std::size_t j = i + 1; j < L; ++j) {
            const bool consecutive = (j == i + 1) || (i == 0 && j == L - 1);
            if (edges[i].intersection_size(edges[j]) != (consecutive ? 1 : 0)) return false;
        }
    }
    // With L = 3 all three edges could share one vertex; connecting vertices must differ.
    if (L == 3) {
        for (Vertex x : edges[0])
            if (edges[1].contains(x) && edges[2].contains(x)) return false;
    }
    return true;
}

void write_hypergraph(std::ostream& os, const LinearHypergraph& H) {
    os << H.n() << ' ' << H.r() << '\n';
    for (const RSet& e : H.edges()) os << e.str() << '\n';
}

LinearHypergraph read_hypergraph(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("missing header line");
    std::istringstream head(line);
    long long n = 0, r = 0;
    if (!(head >> n >> r) || n <= 0 || r <= 0) throw ParseError("bad header: " + line);
    LinearHypergraph H(static_cast<std::size_t>(n), static_cast<int>(r));
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<Vertex> vs;
        long long x;
        while (ls >> x) {
            if (x < 0) throw ParseError("negative vertex on line " + std::to_string(lineno));
            vs.push_back(static_cast<Vertex>(x));
        }
        if (!ls.eof()) throw ParseError("bad token on line " + std::to_string(lineno));
        if (static_cast<long long>(vs.size()) != r)
            throw ParseError("wrong edge size on line " + std::to_string(lineno));
        H.add_edge(RSet::make(vs, H.n()));
    }
    return H;
}

} // namespace glgp
