#pragma once

#include "glgp/availability.hpp"
#include "glgp/hypergraph.hpp"
#include "glgp/rng.hpp"
#include "glgp/rset.hpp"
#include "glgp/trajectory.hpp"

#include <cstdint>
#include <vector>

namespace glgp {

/// How Q is brought up to date after an edge is added.
enum class UpdateMode {
    /// Enumerate loose paths through the new edge and remove the r-sets they close.
    PathClosure,
    /// Re-test every r-set meeting the ball of the given radius around the new edge.
    BallRecheck,
    /// Recompute Q from scratch.
    Naive,
};

struct EngineOptions {
    UpdateMode mode = UpdateMode::PathClosure;
    int ball_radius = -1; // BallRecheck only; negative means ell - 1
    bool verify = false;  // compare with the independent oracle after every step
};

struct RemovalReport {
    RSet chosen;
    std::vector<RSet> destroyed_clique; // share >= 2 vertices with chosen
    std::vector<RSet> cycle_blocked;    // still cliques, but now close a short cycle
};

/// One run of the process: H(i), G(i), Q(i), i and the generator.
class ProcessState {
public:
    ProcessState(std::size_t n, int r, int ell, std::uint64_t seed, EngineOptions opts = {});

    const LinearHypergraph& H() const { return H_; }
    const HostGraph& G() const { return G_; }
    const RSetPool& Q() const { return pool_; }
    const ForbiddenFamily& family() const { return fam_; }
    std::size_t i() const { return H_.size(); }
    Rng& rng() { return rng_; }
    const EngineOptions& options() const { return opts_; }

    bool q_contains(const RSet& f) const { return f.size() == H_.r() && pool_.contains(f); }
    std::vector<RSet> q_sorted() const { return pool_.sorted(); }

    /// Picks a uniform member of Q, classifies and applies it. Throws Terminated.
    RemovalReport step();

    /// Removals caused by adding `chosen`, computed without mutating the state.
    RemovalReport classify_removals(const RSet& chosen) const;

    /// Adds report.chosen to H and removes the reported sets from Q.
    /// Throws ConsistencyFailure in verify mode if Q differs from the oracle.
    void incremental_update(const RemovalReport& report);

private:
    void erase_from_q(const RSet& g);
    void collect_destroyed(const RSet& chosen, std::vector<RSet>& out) const;
    void collect_path_closures(const RSet& chosen, std::vector<RSet>& out) const;
    void collect_ball(const RSet& chosen, int radius, std::vector<RSet>& out) const;
    void collect_naive(const RSet& chosen, std::vector<RSet>& out) const;
    template <class Fn>
    void for_each_q_through(Vertex u, Vertex v, const std::vector<std::uint8_t>& blocked, Fn&& fn) const;

    std::size_t n_;
    int r_;
    ForbiddenFamily fam_;
    EngineOptions opts_;
    LinearHypergraph H_;
    HostGraph G_;
    RSetPool pool_;
    Rng rng_;
    // r = 3 only: bit w of third_[u][v] is set iff {u, v, w} is in Q.
    std::vector<std::uint64_t> third_;
    std::size_t words_ = 0;
};

enum class StopKind { Termination, StepCap };

struct StopRule {
    StopKind kind = StopKind::Termination;
    std::size_t cap = 0;
    static StopRule termination() { return {}; }
    static StopRule step_cap(std::size_t i_max) { return {StopKind::StepCap, i_max}; }
};

/// Steps ceil(c * ratio^k), k >= 0, deduplicated and sorted, up to `limit`. Step 0
/// is always included; the final step of a run is added by run_trial.
std::vector<std::size_t> geometric_schedule(std::size_t limit, double c = 1.0, double ratio = 1.25);

struct SamplingConfig {
    int y_samples = 32; // per m in [2, r-1]
    int w_samples = 16; // per checkpoint, each measured for every (len, k)
};

struct YSample {
    int m = 0;
    RSet f_m;
    std::uint64_t count = 0;
    std::int64_t next = -1; // value one step later, -1 if f_m stopped being a clique or no step followed
};

struct WSample {
    int len = 0;
    int k = 0;
    RSet f;
    std::uint64_t count = 0;
};

struct Checkpoint {
    std::size_t i = 0;
    std::size_t q = 0;
    std::size_t q_next = 0; // |Q(i+1)|, equal to q when no step followed
    std::vector<YSample> y;
    std::vector<WSample> w;
};

struct Trace {
    ModelParams params;
    std::uint64_t seed = 0;
    std::vector<Checkpoint> checkpoints;
    std::size_t M = 0;
    bool terminated = false;
    std::vector<RSet> edges; // H at the end, in insertion order
};

/// Runs one trial. Checkpoints are taken at scheduled steps and at the last step.
Trace run_trial(const ModelParams& params, std::uint64_t seed, const std::vector<std::size_t>& schedule,
                StopRule stop, SamplingConfig sampling = {}, EngineOptions opts = {});

} // namespace glgp
