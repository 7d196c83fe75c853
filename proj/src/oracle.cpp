#include "glgp/oracle.hpp"

#include "glgp/errors.hpp"
#include "glgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace glgp {

bool oracle_is_linear_cycle(const std::vector<RSet>& edges) {
    const std::size_t L = edges.size();
    if (L < 3) return false;
    const int r = edges[0].size();
    std::set<Vertex> span;
    for (std::size_t i = 0; i < L; ++i) {
        if (edges[i].size() != r) return false;
        span.insert(edges[i].begin(), edges[i].end());
        for (std::size_t j = 0; j < L; ++j) {
            if (i == j) continue;
            const std::size_t d = (i > j ? i - j : j - i);
            const bool adjacent = d == 1 || d == L - 1;
            const int common = edges[i].intersection_size(edges[j]);
            if (adjacent ? common != 1 : common != 0) return false;
        }
    }
    return span.size() == static_cast<std::size_t>(r - 1) * L;
}

namespace {

// Does some sequence of H edges close a linear cycle of length <= ell with f?
bool naive_closes(const LinearHypergraph& H, const RSet& f, int ell) {
    std::vector<RSet> seq{f};
    std::vector<EdgeId> ids;
    auto dfs = [&](auto&& self, int target) -> bool {
        if (static_cast<int>(seq.size()) == target) return oracle_is_linear_cycle(seq);
        std::set<EdgeId> cands;
        for (Vertex x : seq.back())
            for (EdgeId e : H.incident(x)) cands.insert(e);
        for (EdgeId e : cands) {
            if (std::find(ids.begin(), ids.end(), e) != ids.end()) continue;
            const RSet& c = H.edge(e);
            if (c.intersection_size(seq.back()) != 1) continue;
            bool clash = false;
            for (std::size_t j = 1; j + 1 < seq.size(); ++j)
                if (c.intersection_size(seq[j]) != 0) clash = true;
            if (clash) continue;
            seq.push_back(c);
            ids.push_back(e);
            const bool hit = self(self, target);
            seq.pop_back();
            ids.pop_back();
            if (hit) return true;
        }
        return false;
    };
    for (int L = 3; L <= ell; ++L)
        if (dfs(dfs, L)) return true;
    return false;
}

bool pairs_uncovered(const LinearHypergraph& H, const RSet& f) {
    for (int a = 0; a < f.size(); ++a)
        for (int b = a + 1; b < f.size(); ++b)
            if (H.covered(f[a], f[b])) return false;
    return true;
}

} // namespace

std::vector<RSet> naive_Q(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam) {
    (void)G; // the host graph is re-derived from the pair cover of H
    const Colex cx(H.n(), H.r());
    std::vector<RSet> out;
    for (std::uint64_t rk = cx.total(); rk-- > 0;) {
        const RSet f = cx.unrank(rk);
        if (pairs_uncovered(H, f) && !naive_closes(H, f, fam.ell())) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t alternating_binomial_sum(int s) {
    std::int64_t total = 0;
    for (int j = 2; j <= s; ++j) {
        const auto c = static_cast<std::int64_t>(binomial(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(j)));
        total += ((s - j) % 2 == 0 ? c : -c);
    }
    return total;
}

std::int64_t count_Q_destroyers(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                                const RSet& f, DestroyerMethod method) {
    if (f.size() != H.r() || !G.is_clique(f)) throw NotAClique("set " + f.str() + " is not an r-clique");
    const int r = H.r();
    if (method == DestroyerMethod::Direct) {
        std::int64_t c = 0;
        for (const RSet& g : enumerate_Q(H, G, fam))
            if (g.intersection_size(f) >= 2) ++c;
        return c;
    }
    std::int64_t total = 0;
    for (int s = 2; s <= r; ++s) {
        const std::int64_t coeff = (s % 2 == 0 ? 1 : -1) * (s - 1);
        for_each_subset(f, s, [&](const RSet& sub) {
            total += coeff * static_cast<std::int64_t>(count_Y(H, G, fam, sub).count);
        });
    }
    return total;
}

std::uint64_t count_cycles_containing(const std::vector<RSet>& edges, std::size_t a, std::size_t b, int ell) {
    std::uint64_t count = 0;
    std::vector<std::size_t> seq{a};
    std::vector<RSet> cyc{edges[a]};
    auto dfs = [&](auto&& self) -> void {
        const std::size_t d = seq.size();
        if (d >= 3 && oracle_is_linear_cycle(cyc) && seq[1] < seq[d - 1] &&
            std::find(seq.begin(), seq.end(), b) != seq.end())
            ++count;
        if (static_cast<int>(d) == ell) return;
        for (std::size_t j = 0; j < edges.size(); ++j) {
            if (std::find(seq.begin(), seq.end(), j) != seq.end()) continue;
            if (edges[j].intersection_size(cyc.back()) != 1) continue;
            seq.push_back(j);
            cyc.push_back(edges[j]);
            self(self);
            seq.pop_back();
            cyc.pop_back();
        }
    };
    dfs(dfs);
    return count;
}

namespace {

struct Extended {
    LinearHypergraph H;
    HostGraph G;
};

Extended with_edge(const LinearHypergraph& H, const HostGraph& G, const RSet& h) {
    Extended x{H, G};
    x.H.add_edge(h);
    x.G.remove_clique(h);
    return x;
}

} // namespace

std::uint64_t count_overlap_sets(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                                 OverlapKind kind, const OverlapAnchors& anchors) {
    const RSet& f = anchors.f;
    if (f.size() != H.r() || f[f.size() - 1] >= H.n() || !is_available(H, G, f, fam))
        throw InvalidAnchor("anchor f must be an available r-set");
    const std::vector<RSet> Q = enumerate_Q(H, G, fam);
    std::uint64_t count = 0;

    if (kind == OverlapKind::Upsilon) {
        for (const RSet& g : Q) {
            if (g == f) continue;
            std::vector<RSet> edges = H.edges();
            edges.push_back(f);
            edges.push_back(g);
            if (count_cycles_containing(edges, edges.size() - 2, edges.size() - 1, fam.ell()) >= 2) ++count;
        }
        return count;
    }

    auto available_part = [&](const std::vector<RSet>& cyc) {
        std::vector<RSet> part;
        for (const RSet& e : cyc)
            if (std::binary_search(Q.begin(), Q.end(), e)) part.push_back(e);
        return part;
    };

    if (kind == OverlapKind::Psi) {
        const auto& cyc = anchors.cycle;
        if (!oracle_is_linear_cycle(cyc) || std::find(cyc.begin(), cyc.end(), f) == cyc.end())
            throw InvalidAnchor("anchor cycle must be a linear cycle through f");
        if (static_cast<int>(cyc.size()) > fam.ell()) throw InvalidAnchor("anchor cycle longer than ell");
        const std::vector<RSet> part = available_part(cyc);
        for (const RSet& h : Q) {
            if (h == f) continue;
            const Extended x = with_edge(H, G, h);
            int lost = 0;
            for (const RSet& s : part)
                if (s != h && !is_available(x.H, x.G, s, fam)) ++lost;
            if (lost >= 2) ++count;
        }
        return count;
    }

    if (anchors.len < 3 || anchors.len > fam.ell()) throw InvalidAnchor("cycle length outside [3, ell]");
    if (anchors.k_minus_1 < 0 || anchors.k_minus_1 > anchors.len - 3)
        throw InvalidAnchor("k - 1 must be in [0, len - 3]");
    const WCount W = count_W(H, G, fam, f, anchors.len, anchors.k_minus_1, true);
    std::set<RSet> members;
    for (const CycleCopy& copy : W.witnesses) {
        const std::vector<RSet> part = available_part(copy.edges);
        for (const RSet& h : part) {
            if (h == f || members.count(h)) continue;
            const Extended x = with_edge(H, G, h);
            for (const RSet& s : part)
                if (s != h && !is_available(x.H, x.G, s, fam)) {
                    members.insert(h);
                    break;
                }
        }
    }
    return members.size();
}

namespace {

std::vector<RSet> colex_candidates(std::size_t n, int r, SearchOrder order) {
    const Colex cx(n, r);
    std::vector<RSet> out;
    out.reserve(cx.total());
    for (std::uint64_t rk = 0; rk < cx.total(); ++rk) out.push_back(cx.unrank(rk));
    if (order == SearchOrder::ColexDescending) std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

TuranResult ex_L_exact(std::size_t n, int r, int ell, SearchOrder order, std::uint64_t node_budget) {
    const ForbiddenFamily fam(ell);
    LinearHypergraph H(n, r);
    const std::vector<RSet> cands = colex_candidates(n, r, order);
    const std::size_t pairs_total = n * (n - 1) / 2;
    const std::size_t per_edge = static_cast<std::size_t>(r) * (r - 1) / 2;
    TuranResult res;
    res.n = n;
    res.r = r;
    res.ell = ell;
    res.witness = H;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (++res.node_count > node_budget)
            throw BudgetExceeded("node budget exhausted; lower bound " + std::to_string(res.max_edges));
        if (H.size() > res.max_edges) {
            res.max_edges = H.size();
            res.witness = H;
        }
        const std::size_t room = std::min((pairs_total - H.covered_pairs()) / per_edge, cands.size() - start);
        if (H.size() + room <= res.max_edges) return;
        for (std::size_t j = start; j < cands.size(); ++j) {
            const RSet& c = cands[j];
            if (!H.can_add(c) || closes_forbidden_cycle(H, c, fam)) continue;
            H.add_edge(c);
            self(self, j + 1);
            H.pop_edge();
            const std::size_t left = std::min((pairs_total - H.covered_pairs()) / per_edge, cands.size() - j - 1);
            if (H.size() + left <= res.max_edges) return;
        }
    };
    rec(rec, 0);
    return res;
}

ForbCount forb_count_exact(std::size_t n, int r, int ell, SearchOrder order, std::uint64_t node_budget) {
    const ForbiddenFamily fam(ell);
    LinearHypergraph H(n, r);
    const std::vector<RSet> cands = colex_candidates(n, r, order);
    ForbCount res;
    res.n = n;
    res.r = r;
    res.ell = ell;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (++res.node_count > node_budget) throw BudgetExceeded("node budget exhausted while counting");
        ++res.count;
        for (std::size_t j = start; j < cands.size(); ++j) {
            const RSet& c = cands[j];
            if (!H.can_add(c) || closes_forbidden_cycle(H, c, fam)) continue;
            H.add_edge(c);
            self(self, j + 1);
            H.pop_edge();
        }
    };
    rec(rec, 0);
    return res;
}

LinearHypergraph greedy_linear_packing(std::size_t n, int r, std::uint64_t seed) {
    Rng rng(seed);
    LinearHypergraph H(n, r);
    HostGraph G(n);
    std::array<Vertex, kMaxUniformity> buf{};
    // Rejection phase: each accepted set is uniform among the still-addable ones.
    int misses = 0;
    while (misses < 256) {
        int k = 0;
        while (k < r) {
            const auto x = static_cast<Vertex>(rng.uniform_below(n));
            if (std::find(buf.begin(), buf.begin() + k, x) == buf.begin() + k) buf[k++] = x;
        }
        const RSet f(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(r)));
        if (H.can_add(f)) {
            H.add_edge(f);
            G.remove_clique(f);
            misses = 0;
        } else {
            ++misses;
        }
    }
    // Explicit phase: random order over the remaining addable sets.
    std::vector<RSet> rest = enumerate_K_m(G, r);
    for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[rng.uniform_below(i)]);
    for (const RSet& f : rest)
        if (H.can_add(f)) H.add_edge(f);
    return H;
}

std::vector<std::vector<RSet>> enumerate_short_cycles(const LinearHypergraph& H, int ell) {
    std::set<std::vector<RSet>> found;
    const int r = H.r();
    std::vector<Vertex> avoid;
    for (EdgeId e = 0; e < H.size(); ++e) {
        const RSet& f = H.edge(e);
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b) {
                avoid.clear();
                for (int c = 0; c < r; ++c)
                    if (c != a && c != b) avoid.push_back(f[c]);
                for (const LinearPath& p : find_linear_paths(H, f[a], f[b], 2, ell - 1, avoid, e)) {
                    std::vector<RSet> cyc{f};
                    for (EdgeId x : p.edges) cyc.push_back(H.edge(x));
                    std::sort(cyc.begin(), cyc.end());
                    found.insert(cyc);
                }
            }
    }
    return {found.begin(), found.end()};
}

DeletionReport deletion_construct(std::size_t n, int r, int ell, std::uint64_t seed) {
    if (ell < 3) throw InvalidParams("ell must be at least 3");
    DeletionReport rep;
    const LinearHypergraph base = greedy_linear_packing(n, r, seed);
    rep.base_edges = base.size();
    rep.keep_probability = std::pow(static_cast<double>(n), -(1.0 - 1.0 / ell));
    Rng rng(mix64(seed ^ 0x7468696eULL));
    std::vector<RSet> kept;
    for (const RSet& e : base.edges())
        if (rng.uniform01() < rep.keep_probability) kept.push_back(e);
    rep.retained = kept.size();
    std::sort(kept.begin(), kept.end());
    while (true) {
        LinearHypergraph cur(n, r);
        for (const RSet& e : kept) cur.add_edge(e);
        const auto cycles = enumerate_short_cycles(cur, ell);
        if (cycles.empty()) {
            rep.result = cur;
            break;
        }
        std::set<RSet> gone;
        for (const auto& cyc : cycles) {
            bool intact = true;
            for (const RSet& e : cyc) intact = intact && !gone.count(e);
            if (!intact) continue;
            gone.insert(cyc.front()); // edges are sorted, front is the smallest
            ++rep.cycles_hit;
        }
        std::vector<RSet> next;
        for (const RSet& e : kept)
            if (!gone.count(e)) next.push_back(e);
        kept.swap(next);
    }
    rep.final_edges = rep.result.size();
    return rep;
}

} // namespace glgp
