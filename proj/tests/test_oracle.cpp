#include "glgp/availability.hpp"
#include "glgp/errors.hpp"
#include "glgp/oracle.hpp"
#include "glgp/process.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

using namespace glgp;
using namespace testsupport;

namespace {

struct Exhaustive {
    std::size_t ex = 0;
    std::uint64_t count = 0;
};

// Every family of r-sets on [n], by bitmask; only for C(n, r) <= 20.
Exhaustive exhaustive_forb(std::size_t n, int r, int ell) {
    const auto all = all_rsets(n, r);
    REQUIRE(all.size() <= 20);
    Exhaustive res;
    for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
        std::vector<RSet> es;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (mask >> j & 1u) es.push_back(all[j]);
        bool linear = true;
        for (std::size_t a = 0; a < es.size() && linear; ++a)
            for (std::size_t b = a + 1; b < es.size() && linear; ++b) linear = es[a].intersection_size(es[b]) <= 1;
        if (!linear || brute_girth(es, ell) != 0) continue;
        ++res.count;
        res.ex = std::max(res.ex, es.size());
    }
    return res;
}

std::uint64_t brute_destroyers(const std::vector<RSet>& Q, const RSet& f) {
    std::uint64_t c = 0;
    for (const RSet& g : Q) c += g.intersection_size(f) >= 2;
    return c;
}

std::uint64_t brute_cycles_containing(const std::vector<RSet>& edges, const RSet& a, const RSet& b, int ell) {
    std::vector<RSet> rest;
    for (const RSet& e : edges)
        if (e != a && e != b) rest.push_back(e);
    std::uint64_t c = 0;
    for (int len = 3; len <= ell; ++len)
        for_each_combination(rest.size(), len - 2, [&](const std::vector<std::size_t>& idx) {
            std::vector<RSet> es{a, b};
            for (auto k : idx) es.push_back(rest[k]);
            c += is_cycle_set(es);
        });
    return c;
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("naive_Q examples") {
    const ForbiddenFamily fam(4);
    const LinearHypergraph E(9, 3);
    CHECK(naive_Q(E, host_graph(E), fam).size() == 84);
    ProcessState st = state_after(15, 3, 4, 8, 100000);
    CHECK(naive_Q(st.H(), st.G(), st.family()).empty());
}

TEST_CASE("property: naive_Q agrees with enumerate_Q on 1000 random states") {
    Rng rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 7 + rng.uniform_below(9);
        const int r = n >= 10 && rng.uniform_below(3) == 0 ? 4 : 3;
        const int ell = 3 + static_cast<int>(rng.uniform_below(3));
        LinearHypergraph H(n, r);
        if (trial % 2 == 0) {
            // arbitrary linear hypergraph, short cycles allowed
            H = random_linear(n, r, rng.uniform_below(8), rng);
        } else {
            ProcessState st = state_after(n, r, ell, rng.next(), rng.uniform_below(12));
            H = st.H();
        }
        const HostGraph G = host_graph(H);
        const ForbiddenFamily fam(ell);
        REQUIRE(naive_Q(H, G, fam) == enumerate_Q(H, G, fam));
    }
}

TEST_CASE("oracle cycle predicate agrees with the definition") {
    Rng rng(5);
    int yes = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const int len = 3 + static_cast<int>(rng.uniform_below(3));
        std::vector<RSet> es;
        for (int j = 0; j < len; ++j) es.push_back(random_rset(9, 3, rng));
        if (trial % 3 == 0) {
            // plant a real cycle with shuffled vertex labels
            std::vector<Vertex> perm(12);
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t j = perm.size(); j > 1; --j) std::swap(perm[j - 1], perm[rng.uniform_below(j)]);
            es.clear();
            for (int j = 0; j < len; ++j) {
                const Vertex a = perm[static_cast<std::size_t>(2 * j)];
                const Vertex b = perm[static_cast<std::size_t>(2 * j + 1)];
                const Vertex c = perm[static_cast<std::size_t>((2 * j + 2) % (2 * len))];
                es.push_back(RSet{a, b, c});
            }
        }
        const bool expect = is_cycle_in_order(es);
        CHECK(oracle_is_linear_cycle(es) == expect);
        CHECK(is_linear_cycle(es) == expect);
        yes += expect;
    }
    CHECK(yes > 500);
}

TEST_CASE("alternating binomial identity") {
    for (int s = 2; s <= 10; ++s) CHECK(alternating_binomial_sum(s) == (s % 2 ? -1 : 1) * (s - 1));
}

TEST_CASE("Q destroyers at the empty state") {
    const LinearHypergraph E(5, 3);
    const HostGraph G = host_graph(E);
    const ForbiddenFamily fam(3);
    const RSet f{0, 1, 2};
    const auto direct = count_Q_destroyers(E, G, fam, f, DestroyerMethod::Direct);
    CHECK(direct == count_Q_destroyers(E, G, fam, f, DestroyerMethod::InclusionExclusion));
    CHECK(direct == 7); // f itself and the 3 * 2 sets sharing a pair with it
    LinearHypergraph H(5, 3);
    H.add_edge({0, 1, 3});
    CHECK_THROWS_AS(count_Q_destroyers(H, host_graph(H), fam, f, DestroyerMethod::Direct), NotAClique);
}

TEST_CASE("property: destroyer counts agree on random states") {
    Rng rng(42);
    int states = 0;
    while (states < 50) {
        const std::size_t n = 9 + rng.uniform_below(7);
        const int r = 3 + static_cast<int>(rng.uniform_below(2));
        ProcessState st = state_after(n, r, 4, rng.next(), 1 + rng.uniform_below(10));
        const auto cliques = enumerate_K_m(st.G(), r);
        if (cliques.empty()) continue;
        const RSet f = cliques[rng.uniform_below(cliques.size())];
        const auto Q = st.q_sorted();
        const auto direct = count_Q_destroyers(st.H(), st.G(), st.family(), f, DestroyerMethod::Direct);
        CHECK(direct == count_Q_destroyers(st.H(), st.G(), st.family(), f, DestroyerMethod::InclusionExclusion));
        CHECK(direct == static_cast<std::int64_t>(brute_destroyers(Q, f)));
        ++states;
    }
}

TEST_CASE("cycles containing two edges") {
    Rng rng(6);
    for (int trial = 0; trial < 60; ++trial) {
        const LinearHypergraph H = random_linear(10, 3, 9, rng);
        if (H.size() < 2) continue;
        const auto& es = H.edges();
        const std::size_t a = rng.uniform_below(es.size()), b = rng.uniform_below(es.size());
        if (a == b) continue;
        CHECK(count_cycles_containing(es, a, b, 5) == brute_cycles_containing(es, es[a], es[b], 5));
    }
}

TEST_CASE("overlap sets at the empty state") {
    const LinearHypergraph E(12, 3);
    const HostGraph G = host_graph(E);
    const ForbiddenFamily fam(4);
    const RSet f{0, 1, 2};
    CHECK(count_overlap_sets(E, G, fam, OverlapKind::Upsilon, {f, {}, 0, 0}) == 0);
    CHECK(count_overlap_sets(E, G, fam, OverlapKind::Lambda, {f, {}, 3, 0}) == 0);
    CHECK(count_overlap_sets(E, G, fam, OverlapKind::Lambda, {f, {}, 4, 1}) == 0);
    // a joint of L' plus one vertex from each edge through it destroys two cliques;
    // in a triangle {0, 2, 4} arises at all three joints
    const std::vector<RSet> tri{f, RSet{2, 3, 4}, RSet{4, 5, 0}};
    CHECK(count_overlap_sets(E, G, fam, OverlapKind::Psi, {f, tri, 0, 0}) == 10);
    const std::vector<RSet> quad{f, RSet{2, 3, 4}, RSet{4, 5, 6}, RSet{6, 7, 0}};
    CHECK(count_overlap_sets(E, G, fam, OverlapKind::Psi, {f, quad, 0, 0}) == 16);
}

TEST_CASE("overlap set anchors are validated") {
    const LinearHypergraph E(12, 3);
    const HostGraph G = host_graph(E);
    const ForbiddenFamily fam(4);
    const RSet f{0, 1, 2};
    CHECK_THROWS_AS(count_overlap_sets(E, G, fam, OverlapKind::Psi, {f, {f, RSet{2, 3, 4}}, 0, 0}), InvalidAnchor);
    CHECK_THROWS_AS(count_overlap_sets(E, G, fam, OverlapKind::Lambda, {f, {}, 5, 0}), InvalidAnchor);
    CHECK_THROWS_AS(count_overlap_sets(E, G, fam, OverlapKind::Lambda, {f, {}, 4, 2}), InvalidAnchor);
    LinearHypergraph H(12, 3);
    H.add_edge({0, 1, 5});
    CHECK_THROWS_AS(count_overlap_sets(H, host_graph(H), fam, OverlapKind::Upsilon, {f, {}, 0, 0}), InvalidAnchor);
}

TEST_CASE("upsilon on a handcrafted state") {
    // two disjoint H edges leaving f from 0 and 1; every g through 2 that meets both
    // closes two triangles through f and g
    LinearHypergraph H(9, 3);
    H.add_edge({0, 3, 5});
    H.add_edge({1, 4, 6});
    const HostGraph G = host_graph(H);
    const ForbiddenFamily fam(3);
    const RSet f{0, 1, 2};
    REQUIRE(is_available(H, G, f, fam));
    const auto Q = brute_Q(H.edges(), 9, 3, 3);
    std::uint64_t brute = 0;
    for (const RSet& g : Q) {
        if (g == f) continue;
        std::vector<RSet> es = H.edges();
        es.push_back(f);
        es.push_back(g);
        brute += brute_cycles_containing(es, f, g, 3) >= 2;
    }
    CHECK(brute == 4);
    CHECK(count_overlap_sets(H, G, fam, OverlapKind::Upsilon, {f, {}, 0, 0}) == brute);
}

TEST_CASE("property: psi and lambda against brute force") {
    int nonzero_lambda = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ProcessState st = state_after(10, 3, 4, seed, 3 + seed % 4);
        const auto Q = brute_Q(st.H().edges(), 10, 3, 4);
        if (Q.empty()) continue;
        const RSet f = Q[seed * 7 % Q.size()];
        auto unavailable_after = [&](const RSet& h, const RSet& s) {
            std::vector<RSet> es = st.H().edges();
            es.push_back(h);
            return !pairs_uncovered(es, s) || brute_closes_cycle(es, s, 4);
        };
        for (int len = 3; len <= 4; ++len) {
            std::vector<std::vector<RSet>> cycles;
            for_each_cycle_through(10, 3, f, len, [&](const std::vector<RSet>& es) { cycles.push_back(es); });
            // psi on the first cycle through f
            if (!cycles.empty()) {
                std::vector<RSet> ordered = cycles.front();
                // put the cycle in cyclic order
                std::sort(ordered.begin() + 1, ordered.end());
                while (!is_cycle_in_order(ordered)) std::next_permutation(ordered.begin() + 1, ordered.end());
                std::uint64_t brute = 0;
                for (const RSet& h : Q) {
                    if (h == f) continue;
                    int lost = 0;
                    for (const RSet& s : ordered)
                        if (s != h && std::binary_search(Q.begin(), Q.end(), s) && unavailable_after(h, s)) ++lost;
                    brute += lost >= 2;
                }
                CHECK(count_overlap_sets(st.H(), st.G(), st.family(), OverlapKind::Psi, {f, ordered, 0, 0}) == brute);
            }
            for (int km1 = 0; km1 <= len - 3; ++km1) {
                std::set<RSet> members;
                for (const auto& es : cycles) {
                    int inH = 0;
                    bool ok = true;
                    for (std::size_t j = 1; j < es.size(); ++j) {
                        if (st.H().has_edge(es[j]))
                            ++inH;
                        else if (!std::binary_search(Q.begin(), Q.end(), es[j]))
                            ok = false;
                    }
                    if (!ok || inH != km1) continue;
                    for (const RSet& h : es) {
                        if (h == f || !std::binary_search(Q.begin(), Q.end(), h)) continue;
                        for (const RSet& s : es)
                            if (s != h && std::binary_search(Q.begin(), Q.end(), s) && unavailable_after(h, s)) {
                                members.insert(h);
                                break;
                            }
                    }
                }
                const auto got = count_overlap_sets(st.H(), st.G(), st.family(), OverlapKind::Lambda, {f, {}, len, km1});
                CHECK(got == members.size());
                nonzero_lambda += got > 0;
            }
        }
    }
    CHECK(nonzero_lambda > 0);
}

TEST_CASE("exact Turan numbers: trivial cases and two search orders") {
    CHECK(ex_L_exact(3, 3, 3).max_edges == 1);
    CHECK(ex_L_exact(4, 4, 4).max_edges == 1);
    // C_3 needs 6 vertices, so below that the girth constraint is vacuous
    CHECK(ex_L_exact(5, 3, 3).max_edges == 2);
    CHECK(ex_L_exact(5, 3, 3).max_edges == exhaustive_forb(5, 3, 3).ex);
    for (std::size_t n = 3; n <= 7; ++n)
        for (int ell = 3; ell <= 4; ++ell) {
            const auto a = ex_L_exact(n, 3, ell, SearchOrder::ColexAscending);
            const auto d = ex_L_exact(n, 3, ell, SearchOrder::ColexDescending);
            CHECK(a.max_edges == d.max_edges);
            CHECK(a.witness.size() == a.max_edges);
            CHECK(linear_girth(a.witness, ell).is_infinite());
            CHECK(brute_girth(d.witness.edges(), ell) == 0);
        }
}

TEST_CASE("Forb counts against exhaustive enumeration") {
    CHECK(forb_count_exact(3, 3, 3).count == 2);
    CHECK(forb_count_exact(4, 4, 3).count == 2);
    for (std::size_t n = 4; n <= 6; ++n)
        for (int ell = 3; ell <= 4; ++ell) {
            const auto ex = exhaustive_forb(n, 3, ell);
            const auto a = forb_count_exact(n, 3, ell, SearchOrder::ColexAscending);
            const auto d = forb_count_exact(n, 3, ell, SearchOrder::ColexDescending);
            CHECK(a.count == ex.count);
            CHECK(d.count == ex.count);
            CHECK(ex_L_exact(n, 3, ell).max_edges == ex.ex);
            CHECK((std::uint64_t{1} << ex.ex) <= a.count);
        }
    const auto r4 = exhaustive_forb(6, 4, 3);
    CHECK(forb_count_exact(6, 4, 3).count == r4.count);
    CHECK(ex_L_exact(6, 4, 3).max_edges == r4.ex);
}

TEST_CASE("Forb count is non-increasing in ell") {
    for (std::size_t n = 6; n <= 7; ++n) {
        const auto c3 = forb_count_exact(n, 3, 3).count;
        const auto c4 = forb_count_exact(n, 3, 4).count;
        const auto c5 = forb_count_exact(n, 3, 5).count;
        CHECK(c4 <= c3);
        CHECK(c5 <= c4);
    }
}

TEST_CASE("search budget") {
    CHECK_THROWS_AS(ex_L_exact(7, 3, 3, SearchOrder::ColexAscending, 10), BudgetExceeded);
    CHECK_THROWS_AS(forb_count_exact(7, 3, 3, SearchOrder::ColexAscending, 10), BudgetExceeded);
}

TEST_CASE("greedy packing is maximal and linear") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const LinearHypergraph H = greedy_linear_packing(30, 3, seed);
        std::size_t addable = 0;
        for_each_kset(30, 3, [&](const RSet& f) { addable += H.can_add(f); });
        CHECK(addable == 0);
        CHECK(H.size() > 100);
    }
    CHECK(greedy_linear_packing(30, 3, 1).edges() == greedy_linear_packing(30, 3, 1).edges());
}

TEST_CASE("short cycle enumeration") {
    Rng rng(17);
    for (int trial = 0; trial < 80; ++trial) {
        const LinearHypergraph H = random_linear(10, 3, 8, rng);
        const auto cycles = enumerate_short_cycles(H, 4);
        std::uint64_t brute = 0;
        for (int len = 3; len <= 4; ++len)
            for_each_combination(H.size(), len, [&](const std::vector<std::size_t>& idx) {
                std::vector<RSet> es;
                for (auto k : idx) es.push_back(H.edge(static_cast<EdgeId>(k)));
                brute += is_cycle_set(es);
            });
        CHECK(cycles.size() == brute);
        for (const auto& c : cycles) CHECK(is_cycle_set(c));
    }
}

TEST_CASE("deletion construction") {
    double retained = 0, expected = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DeletionReport rep = deletion_construct(200, 3, 4, seed);
        CHECK(linear_girth(rep.result, 4).is_infinite());
        CHECK(rep.final_edges == rep.result.size());
        CHECK(rep.final_edges <= rep.retained);
        CHECK(rep.retained - rep.final_edges <= rep.cycles_hit);
        CHECK(rep.keep_probability == doctest::Approx(std::pow(200.0, -(1 - 1.0 / 4))));
        retained += static_cast<double>(rep.retained);
        expected += static_cast<double>(rep.base_edges) * rep.keep_probability;
    }
    // independent thinning: the mean retained count is within a few standard errors
    CHECK(std::abs(retained - expected) < 4 * std::sqrt(expected));
    const auto a = deletion_construct(100, 3, 4, 3);
    const auto b = deletion_construct(100, 3, 4, 3);
    CHECK(a.result.edges() == b.result.edges());
}

} // TEST_SUITE
