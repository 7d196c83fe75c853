#include "glgp/errors.hpp"
#include "glgp/harness.hpp"
#include "glgp/hypergraph.hpp"
#include "glgp/oracle.hpp"
#include "glgp/process.hpp"
#include "glgp/trajectory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace glgp;
using nlohmann::json;

namespace {

struct ModelFlags {
    std::uint64_t n = 0;
    int r = 3;
    int ell = 4;
    std::optional<double> lambda;
    std::optional<double> alpha;

    void add(CLI::App* app) {
        app->add_option("--n", n, "vertex count")->required();
        app->add_option("--r", r, "uniformity")->required();
        app->add_option("--ell", ell, "forbidden cycle lengths 3..ell")->required();
        app->add_option("--lambda", lambda, "stopping-time constant");
        app->add_option("--alpha", alpha, "error exponent");
    }
    ModelParams params() const { return derive_params(n, r, ell, lambda, alpha); }
};

std::string hg_text(const LinearHypergraph& H) {
    std::ostringstream os;
    write_hypergraph(os, H);
    return os.str();
}

int cmd_run(const ModelFlags& mf, std::size_t trials, std::uint64_t seed, const std::string& stop, std::size_t cap,
            bool verify, bool naive, bool strict, int y_samples, int w_samples, unsigned threads,
            const std::string& out) {
    ExperimentConfig cfg;
    cfg.params = mf.params();
    cfg.trials = trials;
    cfg.master_seed = seed;
    if (stop == "cap") {
        if (cap == 0) throw InvalidParams("--stop cap needs --cap > 0");
        cfg.stop = StopRule::step_cap(cap);
    }
    cfg.sampling = {y_samples, w_samples};
    cfg.engine.verify = verify;
    if (naive) cfg.engine.mode = UpdateMode::Naive;
    cfg.strict_envelope = strict;
    cfg.threads = threads;
    cfg.out_dir = out;
    const ExperimentResult res = run_experiment(cfg);
    json line;
    json ms = json::array();
    for (const auto& tr : res.traces) ms.push_back(tr.M);
    line["M_final"] = ms;
    json cont = json::object();
    for (const auto& v : res.envelope.variables)
        if (!v.rows.empty()) cont[v.name] = v.containment_fraction;
    line["containment"] = cont;
    line["out"] = out;
    std::cout << line.dump() << '\n';
    return 0;
}

int cmd_verify(const ModelFlags& mf, std::size_t trials, std::uint64_t seed, int radius, bool ball) {
    const ModelParams P = mf.params();
    std::size_t steps = 0, failures = 0;
    std::string first;
    for (std::size_t k = 0; k < trials; ++k) {
        EngineOptions opts;
        opts.verify = true;
        if (ball) {
            opts.mode = UpdateMode::BallRecheck;
            opts.ball_radius = radius;
        }
        try {
            const Trace tr = run_trial(P, derive_seed(seed, k), {0}, StopRule::termination(), {0, 0}, opts);
            steps += tr.M;
        } catch (const ConsistencyFailure& e) {
            ++failures;
            if (first.empty()) first = "trial " + std::to_string(k) + ": " + e.what();
        }
    }
    json line{{"trials", trials}, {"steps_checked", steps}, {"mismatching_trials", failures}};
    if (!first.empty()) line["first_mismatch"] = first;
    std::cout << line.dump() << '\n';
    return failures == 0 ? 0 : 1;
}

int cmd_trajectory(const ModelFlags& mf, std::size_t grid) {
    const ModelParams P = mf.params();
    if (grid < 2) throw InvalidParams("--t-grid needs at least 2 points");
    std::cout << "t,p,xi,xi_tilde,sigma,q,eps_q";
    for (int m = 2; m <= P.r - 1; ++m) std::cout << ",y_" << m << ",eps_y_" << m;
    for (int L = 3; L <= P.ell; ++L)
        for (int k = 0; k <= L - 2; ++k) std::cout << ",w_" << L << '_' << k << ",eps_w_" << L << '_' << k;
    std::cout << '\n';
    for (std::size_t j = 0; j < grid; ++j) {
        const double t = P.t_M * static_cast<double>(j) / static_cast<double>(grid - 1);
        const TrajectoryPoint X = evaluate(P, t);
        std::cout << format_double(t) << ',' << format_double(X.p) << ',' << format_double(X.xi) << ','
                  << format_double(X.xi_tilde) << ',' << format_double(X.sigma) << ',' << format_double(X.q()) << ','
                  << format_double(X.eps_q());
        for (int m = 2; m <= P.r - 1; ++m)
            std::cout << ',' << format_double(X.y(m)) << ',' << format_double(X.eps_y(m));
        for (int L = 3; L <= P.ell; ++L)
            for (int k = 0; k <= L - 2; ++k)
                std::cout << ',' << format_double(X.w(L, k)) << ',' << format_double(X.eps_w(L, k));
        std::cout << '\n';
    }
    return 0;
}

SearchOrder parse_order(const std::string& s) {
    return s == "desc" ? SearchOrder::ColexDescending : SearchOrder::ColexAscending;
}

int cmd_turan(std::size_t n, int r, int ell, const std::string& order, std::uint64_t budget) {
    const TuranResult res = ex_L_exact(n, r, ell, parse_order(order), budget);
    json line{{"n", n}, {"r", r}, {"ell", ell}, {"ex", res.max_edges}, {"nodes", res.node_count},
              {"witness", hg_text(res.witness)}};
    std::cout << line.dump() << '\n';
    return 0;
}

int cmd_forb(std::size_t n, int r, int ell, const std::string& order, std::uint64_t budget) {
    const ForbCount res = forb_count_exact(n, r, ell, parse_order(order), budget);
    json line{{"n", n}, {"r", r}, {"ell", ell}, {"forb", res.count}, {"nodes", res.node_count}};
    std::cout << line.dump() << '\n';
    return 0;
}

int cmd_deletion(std::size_t n, int r, int ell, std::uint64_t seed, bool witness) {
    const DeletionReport rep = deletion_construct(n, r, ell, seed);
    json line{{"n", n},
              {"r", r},
              {"ell", ell},
              {"seed", seed},
              {"base_edges", rep.base_edges},
              {"keep_probability", rep.keep_probability},
              {"retained", rep.retained},
              {"cycles_hit", rep.cycles_hit},
              {"final_edges", rep.final_edges},
              {"girth_ok", linear_girth(rep.result, ell).is_infinite()}};
    if (witness) line["witness"] = hg_text(rep.result);
    std::cout << line.dump() << '\n';
    return 0;
}

int cmd_fit(std::vector<std::uint64_t> grid, int r, int ell, std::size_t trials, std::uint64_t seed,
            unsigned threads) {
    std::vector<ExponentInput> data;
    for (std::uint64_t n : grid) {
        ExperimentConfig cfg;
        cfg.params = derive_params(n, r, ell);
        cfg.trials = trials;
        cfg.master_seed = derive_seed(seed, n);
        cfg.schedule = {0};
        cfg.sampling = {0, 0};
        cfg.threads = threads;
        const ExperimentResult res = run_experiment(cfg);
        ExponentInput in{n, {}};
        for (const auto& tr : res.traces) in.M.push_back(static_cast<double>(tr.M));
        data.push_back(std::move(in));
    }
    std::cout << json::parse(exponent_json(fit_exponent(data, ell))).dump() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random greedy hypergraph process with forbidden short linear cycles"};
    app.require_subcommand(1);

    ModelFlags run_mf;
    std::size_t trials = 1, cap = 0;
    std::uint64_t seed = 0;
    std::string stop = "term", out;
    bool verify = false, naive = false, strict = false;
    int y_samples = 32, w_samples = 0;
    unsigned threads = 0;
    auto* run = app.add_subcommand("run", "run independent trials and write traces");
    run_mf.add(run);
    run->add_option("--trials", trials)->required();
    run->add_option("--seed", seed)->required();
    run->add_option("--stop", stop, "term or cap")->check(CLI::IsMember({"term", "cap"}));
    run->add_option("--cap", cap, "step cap for --stop cap");
    run->add_flag("--verify", verify, "check Q against the independent oracle after every step");
    run->add_flag("--naive", naive, "recompute Q from scratch after every step");
    run->add_flag("--strict-envelope", strict, "judge containment per object instead of by the mean");
    run->add_option("--y-samples", y_samples, "sampled m-cliques per m and checkpoint");
    run->add_option("--w-samples", w_samples, "sampled available sets per checkpoint for W; costly for ell >= 4");
    run->add_option("--threads", threads);
    run->add_option("--out", out)->required();

    ModelFlags ver_mf;
    std::size_t ver_trials = 1;
    std::uint64_t ver_seed = 0;
    int radius = -1;
    bool ball = false;
    auto* ver = app.add_subcommand("verify", "naive-vs-incremental differential run");
    ver_mf.add(ver);
    ver->add_option("--trials", ver_trials)->required();
    ver->add_option("--seed", ver_seed)->required();
    ver->add_flag("--ball", ball, "test the ball-recheck update instead of path closure");
    ver->add_option("--radius", radius, "ball radius (default ell - 1)");

    ModelFlags traj_mf;
    std::size_t grid = 11;
    auto* traj = app.add_subcommand("trajectory", "tabulate the deterministic trajectories on [0, t_M]");
    traj_mf.add(traj);
    traj->add_option("--t-grid", grid, "number of equally spaced times")->required();

    auto* orc = app.add_subcommand("oracle", "exact small-case computations");
    orc->require_subcommand(1);
    std::size_t on = 0;
    int orr = 3, oell = 4;
    std::uint64_t oseed = 0, budget = kDefaultNodeBudget;
    std::string order = "asc";
    bool witness = false;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--n", on)->required();
        c->add_option("--r", orr)->required();
        c->add_option("--ell", oell)->required();
    };
    auto* tur = orc->add_subcommand("turan", "maximum edge count with linear girth > ell");
    add_common(tur);
    tur->add_option("--order", order)->check(CLI::IsMember({"asc", "desc"}));
    tur->add_option("--budget", budget);
    auto* forb = orc->add_subcommand("forb", "number of labeled hypergraphs with linear girth > ell");
    add_common(forb);
    forb->add_option("--order", order)->check(CLI::IsMember({"asc", "desc"}));
    forb->add_option("--budget", budget);
    auto* del = orc->add_subcommand("deletion", "thin-then-delete baseline construction");
    add_common(del);
    del->add_option("--seed", oseed)->required();
    del->add_flag("--witness", witness, "include the resulting hypergraph");

    std::vector<std::uint64_t> fit_grid;
    int fit_r = 3, fit_ell = 4;
    std::size_t fit_trials = 5;
    std::uint64_t fit_seed = 0;
    auto* fit = app.add_subcommand("fit", "fit the growth exponent of M over several n");
    fit->add_option("--n-grid", fit_grid)->required()->delimiter(',');
    fit->add_option("--r", fit_r)->required();
    fit->add_option("--ell", fit_ell)->required();
    fit->add_option("--trials", fit_trials);
    fit->add_option("--seed", fit_seed);
    fit->add_option("--threads", threads);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(run_mf, trials, seed, stop, cap, verify, naive, strict, y_samples, w_samples, threads, out);
        if (*ver) return cmd_verify(ver_mf, ver_trials, ver_seed, radius, ball);
        if (*traj) return cmd_trajectory(traj_mf, grid);
        if (*tur) return cmd_turan(on, orr, oell, order, budget);
        if (*forb) return cmd_forb(on, orr, oell, order, budget);
        if (*del) return cmd_deletion(on, orr, oell, oseed, witness);
        if (*fit) return cmd_fit(fit_grid, fit_r, fit_ell, fit_trials, fit_seed, threads);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
