#pragma once

#include "glgp/hypergraph.hpp"
#include "glgp/rset.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace glgp {

/// Forbidden linear cycles C_3 .. C_ell.
class ForbiddenFamily {
public:
    explicit ForbiddenFamily(int ell);
    int ell() const { return ell_; }
    std::vector<int> members() const;

private:
    int ell_;
};

/// Membership test for the available set, used where a faster registry exists.
using QMembership = std::function<bool(const RSet&)>;

/// True iff f is a clique of G and adding f to H creates no C_j for 3 <= j <= ell.
bool is_available(const LinearHypergraph& H, const HostGraph& G, const RSet& f, const ForbiddenFamily& fam);

/// Only the cycle part of availability (f is assumed to be a clique of G).
bool closes_forbidden_cycle(const LinearHypergraph& H, const RSet& f, const ForbiddenFamily& fam);

/// All available r-sets in lexicographic order.
std::vector<RSet> enumerate_Q(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam);

/// All m-cliques of G in lexicographic order.
std::vector<RSet> enumerate_K_m(const HostGraph& G, int m);

struct YCount {
    std::uint64_t count = 0;
    std::vector<RSet> witnesses; // the completed r-sets, filled on request
};

/// Number of available r-sets containing the m-clique f_m. Throws NotAClique.
YCount count_Y(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam, const RSet& f_m,
               bool want_witnesses = false);
YCount count_Y(const LinearHypergraph& H, const HostGraph& G, const RSet& f_m, const QMembership& in_q,
               bool want_witnesses = false);

enum class EdgeStatus { InH, InQ, Other };

struct CycleCopy {
    std::vector<RSet> edges;
    std::vector<EdgeStatus> status;

    /// `len; e_1 | e_2 | ...; status` with statuses as letters H, Q, O.
    std::string str() const;
};

struct WCount {
    std::uint64_t count = 0;
    std::vector<CycleCopy> witnesses;
};

/// Copies of C_len through the available f with exactly k edges in H and the
/// remaining len - k edges (f included) available. Throws NotAvailable.
WCount count_W(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam, const RSet& f,
               int len, int k, bool want_witnesses = false);
WCount count_W(const LinearHypergraph& H, const HostGraph& G, const RSet& f, int len, int k,
               const QMembership& in_q, bool want_witnesses = false);

/// Copies of C_len through a fixed r-set in the complete r-graph on n vertices.
/// Saturates at UINT64_MAX.
std::uint64_t count_N_fL(std::uint64_t n, int r, int len);

/// Copies L' of C_len with U inside L' and available, f_m inside V(L') and at
/// least k edges of L' in H; remaining edges arbitrary. Brute force, small n only.
std::uint64_t count_gamma(const LinearHypergraph& H, const HostGraph& G, const ForbiddenFamily& fam,
                          const std::vector<RSet>& U, const RSet& f_m, int len, int k);

/// Abstract hypergraph on pattern vertices 0..vertex_count-1.
struct ExtensionPattern {
    int vertex_count = 0;
    std::vector<std::vector<int>> edges;
};

/// Injections extending theta (pattern vertex -> host vertex, defined on the
/// anchored vertices) that map every edge with a non-anchored vertex onto an edge of H.
std::uint64_t count_extensions(const LinearHypergraph& H, const ExtensionPattern& pattern,
                               const std::map<int, Vertex>& theta);

} // namespace glgp
