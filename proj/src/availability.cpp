#include "glgp/availability.hpp"

#include "glgp/errors.hpp"

#include <algorithm>
#include <limits>

namespace glgp {

ForbiddenFamily::ForbiddenFamily(int ell) : ell_(ell) {
    if (ell < 3) throw InvalidParams("forbidden cycle length must be at least 3");
}

std::vector<int> ForbiddenFamily::members() const {
    std::vector<int> out;
    for (int j = 3; j <= ell_; ++j) out.push_back(j);
    return out;
}

bool closes_forbidden_cycle(const LinearHypergraph& H, const RSet& f, const ForbiddenFamily& fam) {
    if (H.size() < 2) return false;
    std::vector<Vertex> avoid;
    for (int a = 0; a < f.size(); ++a) {
        for (int b = a + 1; b < f.size(); ++b) {
            avoid.clear();
            for (int c = 0; c < f.size(); ++c)
                if (c != a && c != b) avoid.push_back(f[c]);
            if (has_linear_path(H, f[a], f[b], 2, fam.ell() - 1, avoid)) return true;
        }
    }
    return false;
}

bool is_available(const LinearHypergraph& H, const HostGraph& G, const RSet& f, const ForbiddenFamily& fam) {
    if (f.size() != H.r()) return false;
    return G.is_clique(f) && !closes_forbidden_cycle(H, f, fam);
}

namespace {

// Lexicographic enumeration of t-subsets of `cands` (sorted) that are cliques of G
// when `need_clique` is set.
template <class Fn>
void choose_cliques(const HostGraph& G, const std::vector<Vertex>& cands, int t, bool need_clique, Fn&& fn) {
    std::vector<Vertex> pick;
    pick.reserve(static_cast<std::size_t>(t));
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (static_cast<int>(pick.size()) == t) {
            fn(pick);
            return;
        }
        const std::size_t need = static_cast<std::size_t>(t) - pick.size();
        for (std::size_t i = from; i + need <= cands.size(); ++i) {
            const Vertex x = cands[i];
            bool ok = true;
            if (need_clique)
                for (Vertex y : pick)
                    if (!G.adjacent(x, y)) {
                        ok = false;
                        break;
                    }
            if (!ok) continue;
            pick.push_back(x);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
}

RSet join_set(const RSet& base, const std::vector<Vertex>& extra) {
    std::array<Vertex, kMaxUniformity> buf{};
    std::size_t k = 0;
    for (Vertex x : base) buf[k++] = x;
    for (Vertex x : extra) buf[k++] = x;
    return RSet(std::span<const Vertex>(buf.data(), k));
}

} // namespace

std::vector<RSet> enumerate_K_m(const HostGraph& G, int m) {
    if (m < 1 || m > kMaxUniformity) throw InvalidParams("clique size out of range");
    std::vector<Vertex> all(G.n());
    for (std::size_t x = 0; x < G.n(); ++x) all[x] = static_cast<Vertex>(x);
    std::vector<RSet> out;
    choose_cliques(G, all, m, true, [&](const std::vector<Vertex>& s) { out.emplace_back(s); });
    return out;
}

std::vector<RSet> enumerate_Q(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam) {
    std::vector<RSet> out;
    for (const RSet& f : enumerate_K_m(G, H.r()))
        if (!closes_forbidden_cycle(H, f, fam)) out.push_back(f);
    return out;
}

YCount count_Y(const LinearHypergraph& H, const HostGraph& G, const RSet& f_m, const QMembership& in_q,
               bool want_witnesses) {
    const int m = f_m.size();
    const int r = H.r();
    if (m < 2 || m > r) throw InvalidParams("codegree set size must be in [2, r]");
    if (!G.is_clique(f_m)) throw NotAClique("set " + f_m.str() + " is not a clique of the host graph");
    YCount out;
    if (m == r) {
        if (in_q(f_m)) {
            out.count = 1;
            if (want_witnesses) out.witnesses.push_back(f_m);
        }
        return out;
    }
    VertexBits common = G.neighbors(f_m[0]);
    for (int i = 1; i < m; ++i) common &= G.neighbors(f_m[i]);
    std::vector<Vertex> cands;
    common.for_each([&](std::size_t x) { cands.push_back(static_cast<Vertex>(x)); });
    choose_cliques(G, cands, r - m, true, [&](const std::vector<Vertex>& s) {
        const RSet g = join_set(f_m, s);
        if (in_q(g)) {
            ++out.count;
            if (want_witnesses) out.witnesses.push_back(g);
        }
    });
    return out;
}

YCount count_Y(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam, const RSet& f_m,
               bool want_witnesses) {
    return count_Y(H, G, f_m, [&](const RSet& g) { return !closes_forbidden_cycle(H, g, fam); },
                   want_witnesses);
}

std::string CycleCopy::str() const {
    std::string s = std::to_string(edges.size()) + ";";
    for (std::size_t i = 0; i < edges.size(); ++i) s += (i ? " | " : " ") + edges[i].str();
    s += "; ";
    for (EdgeStatus st : status) s += st == EdgeStatus::InH ? 'H' : st == EdgeStatus::InQ ? 'Q' : 'O';
    return s;
}

namespace {

struct Candidate {
    RSet edge;
    EdgeStatus status;
};

// Walks every linear cycle c_0 = start, c_1, ..., c_{len-1} in both directions.
// gen(join, close_with, fresh_needed, used, emit) lists candidate edges through `join`
// (and `close_with` for the closing edge) whose other vertices are unused.
// leaf(cycle, statuses) is invoked once per cycle (orientation fixed by c_1 < c_{len-1}).
template <class Gen, class Prune, class Leaf>
void walk_cycles(std::size_t n, int r, const RSet& start, int len, Gen&& gen, Prune&& prune, Leaf&& leaf) {
    std::vector<std::uint8_t> used(n, 0);
    for (Vertex x : start) used[x] = 1;
    std::vector<RSet> cyc{start};
    std::vector<EdgeStatus> st{EdgeStatus::InQ};

    auto rec = [&](auto&& self, Vertex a, Vertex join, int level) -> void {
        const bool closing = level == len - 1;
        const int fresh = closing ? r - 2 : r - 1;
        gen(join, closing ? a : join, fresh, used, [&](const Candidate& c) {
            cyc.push_back(c.edge);
            st.push_back(c.status);
            if (!prune(st, level)) {
                if (closing) {
                    if (cyc[1] < cyc[static_cast<std::size_t>(len - 1)]) leaf(cyc, st);
                } else {
                    for (Vertex x : c.edge) used[x] = 1;
                    for (Vertex z : c.edge)
                        if (z != join) self(self, a, z, level + 1);
                    for (Vertex x : c.edge)
                        if (x != join) used[x] = 0;
                }
            }
            cyc.pop_back();
            st.pop_back();
        });
    };

    for (Vertex a : start)
        for (Vertex b : start)
            if (a != b) rec(rec, a, b, 1);
}

} // namespace

WCount count_W(const LinearHypergraph& H, const HostGraph& G, const RSet& f, int len, int k,
               const QMembership& in_q, bool want_witnesses) {
    const int r = H.r();
    if (len < 3) throw InvalidParams("cycle length must be at least 3");
    if (k < 0 || k > len - 2) throw InvalidParams("k must be in [0, len - 2]");
    if (f.size() != r || !G.is_clique(f) || !in_q(f)) throw NotAvailable("set " + f.str() + " is not available");

    auto gen = [&](Vertex join, Vertex other, int fresh, const std::vector<std::uint8_t>& used, auto&& emit) {
        const bool closing = other != join;
        // edges of H through join (and other)
        auto h_ok = [&](const RSet& e) {
            int extra = 0;
            for (Vertex x : e) {
                if (x == join || x == other) continue;
                if (used[x]) return false;
                ++extra;
            }
            return extra == fresh;
        };
        if (closing) {
            const EdgeId e = H.cover(join, other);
            if (e != kNoEdge && h_ok(H.edge(e))) emit(Candidate{H.edge(e), EdgeStatus::InH});
        } else {
            for (EdgeId e : H.incident(join))
                if (h_ok(H.edge(e))) emit(Candidate{H.edge(e), EdgeStatus::InH});
        }
        // available r-sets through join (and other)
        if (closing && !G.adjacent(join, other)) return;
        VertexBits nb = G.neighbors(join);
        if (closing) nb &= G.neighbors(other);
        std::vector<Vertex> cands;
        nb.for_each([&](std::size_t x) {
            if (!used[x]) cands.push_back(static_cast<Vertex>(x));
        });
        RSet base = closing ? RSet{join, other} : RSet{join};
        choose_cliques(G, cands, fresh, true, [&](const std::vector<Vertex>& s) {
            RSet g = join_set(base, s);
            if (in_q(g)) emit(Candidate{g, EdgeStatus::InQ});
        });
    };
    auto prune = [&](const std::vector<EdgeStatus>& st, int level) {
        int h = 0;
        for (EdgeStatus s : st) h += s == EdgeStatus::InH;
        return h > k || h + (len - 1 - level) < k;
    };
    WCount out;
    walk_cycles(H.n(), r, f, len, gen, prune, [&](const std::vector<RSet>& cyc, const std::vector<EdgeStatus>& st) {
        int h = 0;
        for (EdgeStatus s : st) h += s == EdgeStatus::InH;
        if (h != k) return;
        ++out.count;
        if (want_witnesses) out.witnesses.push_back(CycleCopy{cyc, st});
    });
    return out;
}

WCount count_W(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam, const RSet& f, int len,
               int k, bool want_witnesses) {
    if (len > fam.ell()) throw InvalidParams("cycle length exceeds the forbidden family");
    return count_W(H, G, f, len, k, [&](const RSet& g) { return is_available(H, G, g, fam); }, want_witnesses);
}

std::uint64_t count_N_fL(std::uint64_t n, int r, int len) {
    if (r < 3 || len < 3) throw InvalidParams("need r >= 3 and len >= 3");
    const std::uint64_t span = static_cast<std::uint64_t>(r - 1) * static_cast<std::uint64_t>(len);
    if (n < span) return 0;
    // Pick the two connecting vertices of the fixed edge, then place the remaining
    // (r-1)len - r vertices; each of the other len-1 edges is unordered internally
    // apart from its connecting vertices.
    const int free_vertices = (r - 1) * len - r;
    unsigned __int128 acc = static_cast<unsigned __int128>(r) * static_cast<unsigned>(r - 1) / 2;
    const unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t inner_perm = 1;
    for (int i = 2; i <= r - 2; ++i) inner_perm *= static_cast<std::uint64_t>(i);
    unsigned __int128 denom = 1;
    for (int i = 0; i < len - 1; ++i) denom *= inner_perm;
    for (int i = 0; i < free_vertices; ++i) {
        acc *= (n - static_cast<std::uint64_t>(r) - static_cast<std::uint64_t>(i));
        if (acc / denom > cap * 8) return std::numeric_limits<std::uint64_t>::max();
    }
    acc /= denom;
    return acc > cap ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(acc);
}

std::uint64_t count_gamma(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                          const std::vector<RSet>& U, const RSet& f_m, int len, int k) {
    const int r = H.r();
    if (U.empty()) throw PreconditionViolated("U must be non-empty");
    if (len < 3) throw InvalidParams("cycle length must be at least 3");
    const int m = f_m.size();
    if (static_cast<int>(U.size()) + (m >= 1 ? 1 : 0) > len - k)
        throw PreconditionViolated("|U| + [m >= 1] must not exceed len - k");
    for (const RSet& u : U)
        if (!is_available(H, G, u, fam)) throw PreconditionViolated("member of U is not available");
    if (m >= 1) {
        bool found = false;
        std::vector<Vertex> rest;
        for (std::size_t x = 0; x < H.n(); ++x)
            if (!f_m.contains(static_cast<Vertex>(x))) rest.push_back(static_cast<Vertex>(x));
        choose_cliques(G, rest, r - m, false, [&](const std::vector<Vertex>& s) {
            if (found) return;
            const RSet g = join_set(f_m, s);
            if (std::find(U.begin(), U.end(), g) == U.end() && is_available(H, G, g, fam)) found = true;
        });
        if (!found) throw PreconditionViolated("f_m is not inside an available r-set outside U");
    }

    auto gen = [&](Vertex join, Vertex other, int fresh, const std::vector<std::uint8_t>& used, auto&& emit) {
        std::vector<Vertex> cands;
        for (std::size_t x = 0; x < H.n(); ++x)
            if (!used[x]) cands.push_back(static_cast<Vertex>(x));
        RSet base = other != join ? RSet{join, other} : RSet{join};
        choose_cliques(G, cands, fresh, false, [&](const std::vector<Vertex>& s) {
            RSet g = join_set(base, s);
            emit(Candidate{g, H.has_edge(g) ? EdgeStatus::InH : EdgeStatus::Other});
        });
    };
    auto no_prune = [](const std::vector<EdgeStatus>&, int) { return false; };
    std::uint64_t count = 0;
    walk_cycles(H.n(), r, U.front(), len, gen, no_prune,
                [&](const std::vector<RSet>& cyc, const std::vector<EdgeStatus>& st) {
                    int h = 0;
                    for (EdgeStatus s : st) h += s == EdgeStatus::InH;
                    if (h < k) return;
                    for (const RSet& u : U)
                        if (std::find(cyc.begin(), cyc.end(), u) == cyc.end()) return;
                    for (Vertex x : f_m) {
                        bool in = false;
                        for (const RSet& e : cyc)
                            if (e.contains(x)) {
                                in = true;
                                break;
                            }
                        if (!in) return;
                    }
                    ++count;
                });
    return count;
}

std::uint64_t count_extensions(const LinearHypergraph& H, const ExtensionPattern& pattern,
                               const std::map<int, Vertex>& theta) {
    const int P = pattern.vertex_count;
    std::vector<std::int64_t> img(static_cast<std::size_t>(P), -1);
    std::vector<std::uint8_t> taken(H.n(), 0);
    std::vector<std::uint8_t> anchored(static_cast<std::size_t>(P), 0);
    for (auto [pv, hv] : theta) {
        if (pv < 0 || pv >= P) throw InvalidParams("anchored vertex outside the pattern");
        if (hv >= H.n() || taken[hv]) throw InvalidParams("anchor map is not an injection into [n]");
        img[static_cast<std::size_t>(pv)] = hv;
        taken[hv] = 1;
        anchored[static_cast<std::size_t>(pv)] = 1;
    }
    std::vector<const std::vector<int>*> loose;
    std::vector<std::uint8_t> in_loose(static_cast<std::size_t>(P), 0);
    for (const auto& e : pattern.edges) {
        if (static_cast<int>(e.size()) != H.r()) throw InvalidParams("pattern edge has wrong size");
        bool has_free = false;
        for (int x : e) {
            if (x < 0 || x >= P) throw InvalidParams("pattern edge vertex out of range");
            if (!anchored[static_cast<std::size_t>(x)]) has_free = true;
        }
        if (has_free) {
            loose.push_back(&e);
            for (int x : e) in_loose[static_cast<std::size_t>(x)] = 1;
        }
    }
    int isolated = 0;
    for (int x = 0; x < P; ++x)
        if (!anchored[static_cast<std::size_t>(x)] && !in_loose[static_cast<std::size_t>(x)]) ++isolated;

    std::uint64_t leaves = 0;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == loose.size()) {
            ++leaves;
            return;
        }
        const std::vector<int>& pe = *loose[idx];
        auto try_edge = [&](const RSet& he) {
            for (int x : pe) {
                const std::int64_t im = img[static_cast<std::size_t>(x)];
                if (im >= 0 && !he.contains(static_cast<Vertex>(im))) return;
            }
            std::vector<int> unmapped;
            std::vector<Vertex> targets;
            for (int x : pe)
                if (img[static_cast<std::size_t>(x)] < 0) unmapped.push_back(x);
            for (Vertex y : he)
                if (!taken[y]) targets.push_back(y);
            if (targets.size() != unmapped.size()) return;
            std::sort(targets.begin(), targets.end());
            do {
                for (std::size_t i = 0; i < unmapped.size(); ++i) {
                    img[static_cast<std::size_t>(unmapped[i])] = targets[i];
                    taken[targets[i]] = 1;
                }
                self(self, idx + 1);
                for (std::size_t i = 0; i < unmapped.size(); ++i) {
                    img[static_cast<std::size_t>(unmapped[i])] = -1;
                    taken[targets[i]] = 0;
                }
            } while (std::next_permutation(targets.begin(), targets.end()));
        };
        std::int64_t pivot = -1;
        for (int x : pe)
            if (img[static_cast<std::size_t>(x)] >= 0) {
                pivot = img[static_cast<std::size_t>(x)];
                break;
            }
        if (pivot >= 0) {
            for (EdgeId e : H.incident(static_cast<Vertex>(pivot))) try_edge(H.edge(e));
        } else {
            for (const RSet& e : H.edges()) try_edge(e);
        }
    };
    if (loose.empty())
        leaves = 1;
    else
        rec(rec, 0);
    // Isolated free vertices go anywhere unused; they do not interact with the edges.
    std::uint64_t slots = H.n() - static_cast<std::uint64_t>(P - isolated);
    std::uint64_t total = leaves;
    for (int i = 0; i < isolated; ++i) total *= slots--;
    return total;
}

} // namespace glgp
