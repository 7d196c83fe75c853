#include "glgp/process.hpp"

#include "glgp/errors.hpp"
#include "glgp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace glgp {

namespace {

void sort_unique(std::vector<RSet>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Loose path hanging off the new edge: edges[0] meets the new edge in `attach`.
struct HalfPath {
    Vertex attach = 0;
    std::vector<EdgeId> edges;
    std::vector<Vertex> verts; // vertices outside the new edge
    Vertex last_entry = 0;     // vertex the last edge shares with its predecessor
};

bool disjoint(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    for (Vertex x : a)
        for (Vertex y : b)
            if (x == y) return false;
    return true;
}

} // namespace

ProcessState::ProcessState(std::size_t n, int r, int ell, std::uint64_t seed, EngineOptions opts)
    : n_(n), r_(r), fam_(ell), opts_(opts), H_(n, r), G_(n), pool_(n, r), rng_(seed) {
    pool_.fill_all();
    if (r_ == 3) {
        words_ = VertexBits::word_count(n);
        third_.assign(n * n * words_, 0);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = 0; v < n; ++v) {
                if (u == v) continue;
                std::uint64_t* row = &third_[(u * n + v) * words_];
                for (std::size_t w = 0; w < n; ++w)
                    if (w != u && w != v) row[w / 64] |= std::uint64_t{1} << (w % 64);
            }
        }
    }
}

void ProcessState::erase_from_q(const RSet& g) {
    if (!pool_.erase(g)) return;
    if (r_ == 3) {
        auto clear = [&](Vertex a, Vertex b, Vertex c) {
            third_[(a * n_ + b) * words_ + c / 64] &= ~(std::uint64_t{1} << (c % 64));
            third_[(b * n_ + a) * words_ + c / 64] &= ~(std::uint64_t{1} << (c % 64));
        };
        clear(g[0], g[1], g[2]);
        clear(g[0], g[2], g[1]);
        clear(g[1], g[2], g[0]);
    }
}

template <class Fn>
void ProcessState::for_each_q_through(Vertex u, Vertex v, const std::vector<std::uint8_t>& blocked, Fn&& fn) const {
    if (r_ == 3) {
        const std::uint64_t* row = &third_[(u * n_ + v) * words_];
        for (std::size_t k = 0; k < words_; ++k) {
            std::uint64_t w = row[k];
            while (w) {
                const Vertex x = static_cast<Vertex>(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
                if (!blocked.empty() && blocked[x]) continue;
                fn(RSet{u, v, x});
            }
        }
        return;
    }
    VertexBits common = G_.neighbors(u);
    common &= G_.neighbors(v);
    std::vector<Vertex> cands;
    common.for_each([&](std::size_t x) {
        if (blocked.empty() || !blocked[x]) cands.push_back(static_cast<Vertex>(x));
    });
    const int need = r_ - 2;
    std::vector<Vertex> pick;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (static_cast<int>(pick.size()) == need) {
            std::array<Vertex, kMaxUniformity> buf{};
            buf[0] = u;
            buf[1] = v;
            std::copy(pick.begin(), pick.end(), buf.begin() + 2);
            RSet g(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(r_)));
            if (pool_.contains(g)) fn(g);
            return;
        }
        for (std::size_t i = from; i < cands.size(); ++i) {
            bool ok = true;
            for (Vertex y : pick)
                if (!G_.adjacent(cands[i], y)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            pick.push_back(cands[i]);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
}

void ProcessState::collect_destroyed(const RSet& chosen, std::vector<RSet>& out) const {
    static const std::vector<std::uint8_t> none;
    for (int a = 0; a < r_; ++a)
        for (int b = a + 1; b < r_; ++b)
            for_each_q_through(chosen[a], chosen[b], none, [&](const RSet& g) {
                if (g != chosen) out.push_back(g);
            });
    sort_unique(out);
}

void ProcessState::collect_path_closures(const RSet& chosen, std::vector<RSet>& out) const {
    const int max_extra = fam_.ell() - 2; // edges besides the new one
    if (max_extra < 1) return;
    std::vector<HalfPath> halves;
    std::vector<std::uint8_t> used(n_, 0);
    for (Vertex x : chosen) used[x] = 1;

    HalfPath cur;
    auto grow = [&](auto&& self, EdgeId e, Vertex entry) -> void {
        const RSet& f = H_.edge(e);
        for (Vertex x : f)
            if (x != entry && used[x]) return;
        cur.edges.push_back(e);
        for (Vertex x : f)
            if (x != entry) {
                used[x] = 1;
                cur.verts.push_back(x);
            }
        const Vertex saved_entry = cur.last_entry;
        cur.last_entry = entry;
        halves.push_back(cur);
        if (static_cast<int>(cur.edges.size()) < max_extra) {
            for (Vertex z : f) {
                if (z == entry) continue;
                for (EdgeId e2 : H_.incident(z))
                    if (e2 != e) self(self, e2, z);
            }
        }
        cur.last_entry = saved_entry;
        for (Vertex x : f)
            if (x != entry) {
                used[x] = 0;
                cur.verts.pop_back();
            }
        cur.edges.pop_back();
    };
    for (Vertex x : chosen) {
        cur = HalfPath{};
        cur.attach = x;
        for (EdgeId e : H_.incident(x)) grow(grow, e, x);
    }

    std::vector<std::uint8_t> blocked(n_, 0);
    auto close = [&](const std::vector<Vertex>& us, const std::vector<Vertex>& vs, const HalfPath* A,
                     const HalfPath& B) {
        for (Vertex x : chosen) blocked[x] = 1;
        if (A)
            for (Vertex x : A->verts) blocked[x] = 1;
        for (Vertex x : B.verts) blocked[x] = 1;
        for (Vertex u : us)
            for (Vertex v : vs)
                for_each_q_through(u, v, blocked, [&](const RSet& g) { out.push_back(g); });
        for (Vertex x : chosen) blocked[x] = 0;
        if (A)
            for (Vertex x : A->verts) blocked[x] = 0;
        for (Vertex x : B.verts) blocked[x] = 0;
    };
    auto far_ends = [&](const HalfPath& h) {
        std::vector<Vertex> ends;
        for (Vertex x : H_.edge(h.edges.back()))
            if (x != h.last_entry) ends.push_back(x);
        return ends;
    };

    for (const HalfPath& B : halves) {
        std::vector<Vertex> us;
        for (Vertex x : chosen)
            if (x != B.attach) us.push_back(x);
        close(us, far_ends(B), nullptr, B);
    }
    for (std::size_t a = 0; a < halves.size(); ++a) {
        const HalfPath& A = halves[a];
        for (std::size_t b = a + 1; b < halves.size(); ++b) {
            const HalfPath& B = halves[b];
            if (A.attach == B.attach) continue;
            if (static_cast<int>(A.edges.size() + B.edges.size()) > max_extra) continue;
            if (!disjoint(A.verts, B.verts)) continue;
            close(far_ends(A), far_ends(B), &A, B);
        }
    }
    sort_unique(out);
}

void ProcessState::collect_ball(const RSet& chosen, int radius, std::vector<RSet>& out) const {
    LinearHypergraph next = H_;
    next.add_edge(chosen);
    std::vector<std::uint8_t> in_ball(n_, 0);
    if (radius >= 1) {
        std::vector<Vertex> frontier(chosen.begin(), chosen.end());
        for (Vertex x : frontier) in_ball[x] = 1;
        for (int step = 1; step < radius; ++step) {
            std::vector<Vertex> grown;
            for (Vertex x : frontier)
                for (EdgeId e : next.incident(x))
                    for (Vertex y : next.edge(e))
                        if (!in_ball[y]) {
                            in_ball[y] = 1;
                            grown.push_back(y);
                        }
            frontier.swap(grown);
        }
    }
    for (std::size_t idx = 0; idx < pool_.size(); ++idx) {
        const RSet g = pool_.at(idx);
        if (g.intersection_size(chosen) >= 2) continue;
        bool meets = false;
        for (Vertex x : g) meets = meets || in_ball[x];
        if (meets && closes_forbidden_cycle(next, g, fam_)) out.push_back(g);
    }
    sort_unique(out);
}

void ProcessState::collect_naive(const RSet& chosen, std::vector<RSet>& out) const {
    LinearHypergraph next = H_;
    next.add_edge(chosen);
    HostGraph g_next = G_;
    g_next.remove_clique(chosen);
    const std::vector<RSet> fresh = enumerate_Q(next, g_next, fam_);
    for (const RSet& g : pool_.sorted()) {
        if (g == chosen || g.intersection_size(chosen) >= 2) continue;
        if (!std::binary_search(fresh.begin(), fresh.end(), g)) out.push_back(g);
    }
}

RemovalReport ProcessState::classify_removals(const RSet& chosen) const {
    if (!q_contains(chosen)) throw PreconditionViolated("chosen set " + chosen.str() + " is not available");
    RemovalReport rep;
    rep.chosen = chosen;
    collect_destroyed(chosen, rep.destroyed_clique);
    switch (opts_.mode) {
    case UpdateMode::PathClosure:
        collect_path_closures(chosen, rep.cycle_blocked);
        break;
    case UpdateMode::BallRecheck:
        collect_ball(chosen, opts_.ball_radius < 0 ? fam_.ell() - 1 : opts_.ball_radius, rep.cycle_blocked);
        break;
    case UpdateMode::Naive:
        collect_naive(chosen, rep.cycle_blocked);
        break;
    }
    return rep;
}

void ProcessState::incremental_update(const RemovalReport& rep) {
    if (!q_contains(rep.chosen)) throw PreconditionViolated("report does not match the current state");
    H_.add_edge(rep.chosen);
    G_.remove_clique(rep.chosen);
    erase_from_q(rep.chosen);
    for (const RSet& g : rep.destroyed_clique) erase_from_q(g);
    for (const RSet& g : rep.cycle_blocked) erase_from_q(g);
    if (opts_.verify) {
        const std::vector<RSet> expect = naive_Q(H_, G_, fam_);
        const std::vector<RSet> got = pool_.sorted();
        if (expect != got) {
            std::vector<RSet> missing, extra;
            std::set_difference(expect.begin(), expect.end(), got.begin(), got.end(), std::back_inserter(missing));
            std::set_difference(got.begin(), got.end(), expect.begin(), expect.end(), std::back_inserter(extra));
            throw ConsistencyFailure("available set diverged at step " + std::to_string(H_.size()) + ": " +
                                     std::to_string(extra.size()) + " stale, " + std::to_string(missing.size()) +
                                     " missing" + (extra.empty() ? "" : " (first stale " + extra[0].str() + ")"));
        }
    }
}

RemovalReport ProcessState::step() {
    if (pool_.empty()) throw Terminated("no available r-set at step " + std::to_string(H_.size()));
    const RSet chosen = pool_.at(rng_.uniform_below(pool_.size()));
    RemovalReport rep = classify_removals(chosen);
    incremental_update(rep);
    return rep;
}

std::vector<std::size_t> geometric_schedule(std::size_t limit, double c, double ratio) {
    if (!(c > 0) || !(ratio > 1)) throw InvalidParams("schedule needs c > 0 and ratio > 1");
    std::set<std::size_t> s{0};
    for (double x = c; x <= static_cast<double>(limit); x *= ratio) s.insert(static_cast<std::size_t>(std::ceil(x)));
    std::vector<std::size_t> out;
    for (std::size_t v : s)
        if (v <= limit) out.push_back(v);
    return out;
}

namespace {

// Uniform m-clique of G by rejection over m-sets; empty RSet if none was found.
RSet sample_clique(const HostGraph& G, int m, Rng& rng) {
    const std::size_t n = G.n();
    std::array<Vertex, kMaxUniformity> buf{};
    for (int attempt = 0; attempt < 20000; ++attempt) {
        int k = 0;
        while (k < m) {
            const auto x = static_cast<Vertex>(rng.uniform_below(n));
            if (std::find(buf.begin(), buf.begin() + k, x) == buf.begin() + k) buf[k++] = x;
        }
        RSet s(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(m)));
        if (G.is_clique(s)) return s;
    }
    return RSet{};
}

} // namespace

Trace run_trial(const ModelParams& params, std::uint64_t seed, const std::vector<std::size_t>& schedule, StopRule stop,
                SamplingConfig sampling, EngineOptions opts) {
    ProcessState st(params.n, params.r, params.ell, seed, opts);
    Rng meas(mix64(seed ^ 0x6d656173757265ULL));
    Trace tr;
    tr.params = params;
    tr.seed = seed;
    std::size_t next_sched = 0;
    auto in_q = [&](const RSet& g) { return st.q_contains(g); };

    while (true) {
        const std::size_t i = st.i();
        const bool final = st.Q().empty() || (stop.kind == StopKind::StepCap && i >= stop.cap);
        while (next_sched < schedule.size() && schedule[next_sched] < i) ++next_sched;
        const bool scheduled = next_sched < schedule.size() && schedule[next_sched] == i;
        if (!scheduled && !final) {
            st.step();
            continue;
        }
        Checkpoint cp;
        cp.i = i;
        cp.q = st.Q().size();
        for (int m = 2; m <= params.r - 1; ++m) {
            for (int s = 0; s < sampling.y_samples; ++s) {
                const RSet f_m = sample_clique(st.G(), m, meas);
                if (f_m.empty()) break;
                cp.y.push_back(YSample{m, f_m, count_Y(st.H(), st.G(), f_m, in_q).count, -1});
            }
        }
        if (!st.Q().empty()) {
            for (int s = 0; s < sampling.w_samples; ++s) {
                const RSet f = st.Q().at(meas.uniform_below(st.Q().size()));
                for (int L = 3; L <= params.ell; ++L)
                    for (int k = 0; k <= L - 2; ++k)
                        cp.w.push_back(WSample{L, k, f, count_W(st.H(), st.G(), f, L, k, in_q).count});
            }
        }
        if (final) {
            cp.q_next = cp.q;
            tr.checkpoints.push_back(std::move(cp));
            break;
        }
        st.step();
        cp.q_next = st.Q().size();
        for (YSample& ys : cp.y)
            if (st.G().is_clique(ys.f_m))
                ys.next = static_cast<std::int64_t>(count_Y(st.H(), st.G(), ys.f_m, in_q).count);
        tr.checkpoints.push_back(std::move(cp));
    }
    tr.M = st.i();
    tr.terminated = st.Q().empty();
    tr.edges = st.H().edges();
    return tr;
}

} // namespace glgp
