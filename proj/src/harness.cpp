#include "glgp/harness.hpp"

#include "glgp/errors.hpp"
#include "glgp/hypergraph.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace glgp {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

unsigned resolve_threads(unsigned requested, std::size_t jobs) {
    unsigned t = requested;
    if (t == 0) {
        if (const char* env = std::getenv("GLGP_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) t = static_cast<unsigned>(v);
        }
    }
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    if (jobs > 0 && t > jobs) t = static_cast<unsigned>(jobs);
    return std::max(1u, t);
}

const VariableEnvelope* EnvelopeReport::find(const std::string& name) const {
    for (const auto& v : variables)
        if (v.name == name) return &v;
    return nullptr;
}

namespace {

struct Stats {
    std::size_t k = 0;
    double mean = 0, se = 0, min = 0, max = 0;
};

Stats stats_of(const std::vector<double>& v) {
    Stats s;
    s.k = v.size();
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return s;
}

std::vector<std::size_t> aligned_steps(const std::vector<Trace>& traces) {
    if (traces.empty()) return {};
    std::vector<std::size_t> common;
    for (const auto& cp : traces[0].checkpoints) common.push_back(cp.i);
    for (std::size_t k = 1; k < traces.size(); ++k) {
        std::vector<std::size_t> mine, keep;
        for (const auto& cp : traces[k].checkpoints) mine.push_back(cp.i);
        std::set_intersection(common.begin(), common.end(), mine.begin(), mine.end(), std::back_inserter(keep));
        common.swap(keep);
    }
    return common;
}

const Checkpoint* checkpoint_at(const Trace& tr, std::size_t i) {
    auto it = std::lower_bound(tr.checkpoints.begin(), tr.checkpoints.end(), i,
                               [](const Checkpoint& c, std::size_t v) { return c.i < v; });
    return it != tr.checkpoints.end() && it->i == i ? &*it : nullptr;
}

void add_row(VariableEnvelope& var, std::size_t i, double t, const std::vector<double>& vals, double predicted,
             double eps, bool strict) {
    if (vals.empty()) return;
    const Stats s = stats_of(vals);
    EnvelopeRow row;
    row.i = i;
    row.t = t;
    row.samples = s.k;
    row.mean = s.mean;
    row.std_error = s.se;
    row.min = s.min;
    row.max = s.max;
    row.predicted = predicted;
    row.eps = eps;
    row.x_plus = s.mean - predicted - eps;
    row.x_minus = predicted - s.mean - eps;
    if (strict)
        row.contained = s.max - predicted - eps <= 0 && predicted - s.min - eps <= 0;
    else
        row.contained = row.x_plus <= 0 && row.x_minus <= 0;
    var.rows.push_back(row);
}

void finish(VariableEnvelope& var) {
    std::size_t ok = 0;
    for (const auto& row : var.rows) {
        ok += row.contained;
        var.max_abs_x = std::max({var.max_abs_x, std::fabs(row.x_plus), std::fabs(row.x_minus)});
    }
    var.containment_fraction = var.rows.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(var.rows.size());
}

} // namespace

EnvelopeReport build_envelope(const ModelParams& P, const std::vector<Trace>& traces, bool strict) {
    EnvelopeReport rep;
    const double n2 = static_cast<double>(P.n) * static_cast<double>(P.n);
    VariableEnvelope q_var{"Q", {}, 0, 0};
    std::map<int, VariableEnvelope> y_vars;
    std::map<std::pair<int, int>, VariableEnvelope> w_vars;
    for (int m = 2; m <= P.r - 1; ++m) y_vars[m].name = "Y" + std::to_string(m);
    for (int L = 3; L <= P.ell; ++L)
        for (int k = 0; k <= L - 2; ++k) w_vars[{L, k}].name = "W_" + std::to_string(L) + "_" + std::to_string(k);

    for (std::size_t i : aligned_steps(traces)) {
        const double t = static_cast<double>(i) / n2;
        if (t > P.t_M) break;
        const TrajectoryPoint X = evaluate(P, t);
        std::vector<double> qs;
        std::map<int, std::vector<double>> ys;
        std::map<std::pair<int, int>, std::vector<double>> ws;
        for (const Trace& tr : traces) {
            const Checkpoint* cp = checkpoint_at(tr, i);
            qs.push_back(static_cast<double>(cp->q));
            for (const YSample& s : cp->y) ys[s.m].push_back(static_cast<double>(s.count));
            for (const WSample& s : cp->w) ws[{s.len, s.k}].push_back(static_cast<double>(s.count));
        }
        add_row(q_var, i, t, qs, X.q(), X.eps_q(), strict);
        for (auto& [m, var] : y_vars) add_row(var, i, t, ys[m], X.y(m), X.eps_y(m), strict);
        for (auto& [key, var] : w_vars)
            add_row(var, i, t, ws[key], X.w(key.first, key.second), X.eps_w(key.first, key.second), strict);
    }
    finish(q_var);
    rep.variables.push_back(q_var);
    for (auto& [m, var] : y_vars) {
        finish(var);
        rep.variables.push_back(var);
    }
    for (auto& [key, var] : w_vars) {
        finish(var);
        rep.variables.push_back(var);
    }
    return rep;
}

bool TraceRow::operator==(const TraceRow& o) const {
    auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
    return trial == o.trial && seed == o.seed && n == o.n && r == o.r && ell == o.ell && i == o.i && same(t, o.t) &&
           q_emp == o.q_emp && same(q_pred, o.q_pred) && same(eps_q, o.eps_q) &&
           same(y2_emp_mean, o.y2_emp_mean) && y2_emp_count == o.y2_emp_count &&
           w_samples_json == o.w_samples_json && M_final == o.M_final;
}

const char* const kTraceCsvHeader =
    "trial,seed,n,r,ell,i,t,Q_emp,q_pred,eps_q,y2_emp_mean,y2_emp_count,w_samples_json,M_final";

std::vector<TraceRow> trace_rows(const std::vector<Trace>& traces) {
    std::vector<TraceRow> rows;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const Trace& tr = traces[k];
        const ModelParams& P = tr.params;
        const double n2 = static_cast<double>(P.n) * static_cast<double>(P.n);
        for (const Checkpoint& cp : tr.checkpoints) {
            TraceRow row;
            row.trial = k;
            row.seed = tr.seed;
            row.n = P.n;
            row.r = P.r;
            row.ell = P.ell;
            row.i = cp.i;
            row.t = static_cast<double>(cp.i) / n2;
            row.q_emp = cp.q;
            try {
                const TrajectoryPoint X = evaluate(P, row.t);
                row.q_pred = X.q();
                row.eps_q = X.eps_q();
            } catch (const OutOfDomain&) {
                row.q_pred = row.eps_q = std::nan("");
            }
            double sum = 0;
            for (const YSample& s : cp.y)
                if (s.m == 2) {
                    sum += static_cast<double>(s.count);
                    ++row.y2_emp_count;
                }
            row.y2_emp_mean = row.y2_emp_count ? sum / static_cast<double>(row.y2_emp_count) : std::nan("");
            json w = json::array();
            for (const WSample& s : cp.w) {
                json f = json::array();
                for (Vertex x : s.f) f.push_back(x);
                w.push_back({{"len", s.len}, {"k", s.k}, {"f", f}, {"count", s.count}});
            }
            row.w_samples_json = w.dump();
            row.M_final = tr.M;
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote in CSV line");
    fields.push_back(cur);
    return fields;
}

template <class T>
T parse_uint(const std::string& s) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer field: " + s);
    return static_cast<T>(v);
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError("bad numeric field: " + s);
    return v;
}

} // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << kTraceCsvHeader << '\n';
    for (const TraceRow& r : rows) {
        os << r.trial << ',' << r.seed << ',' << r.n << ',' << r.r << ',' << r.ell << ',' << r.i << ','
           << format_double(r.t) << ',' << r.q_emp << ',' << format_double(r.q_pred) << ','
           << format_double(r.eps_q) << ',' << format_double(r.y2_emp_mean) << ',' << r.y2_emp_count << ','
           << csv_quote(r.w_samples_json) << ',' << r.M_final << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTraceCsvHeader) throw ParseError("missing or unexpected CSV header");
    std::vector<TraceRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != 14) throw ParseError("expected 14 CSV fields, got " + std::to_string(f.size()));
        try {
            TraceRow r;
            r.trial = parse_uint<std::size_t>(f[0]);
            r.seed = parse_uint<std::uint64_t>(f[1]);
            r.n = parse_uint<std::uint64_t>(f[2]);
            r.r = parse_uint<int>(f[3]);
            r.ell = parse_uint<int>(f[4]);
            r.i = parse_uint<std::size_t>(f[5]);
            r.t = parse_double(f[6]);
            r.q_emp = parse_uint<std::size_t>(f[7]);
            r.q_pred = parse_double(f[8]);
            r.eps_q = parse_double(f[9]);
            r.y2_emp_mean = parse_double(f[10]);
            r.y2_emp_count = parse_uint<std::size_t>(f[11]);
            r.w_samples_json = f[12];
            r.M_final = parse_uint<std::size_t>(f[13]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error& e) {
            throw ParseError(std::string("bad CSV field: ") + e.what());
        }
    }
    return rows;
}

std::string params_json(const ModelParams& P) {
    json j;
    j["n"] = P.n;
    j["r"] = P.r;
    j["ell"] = P.ell;
    j["lambda"] = P.lambda;
    j["alpha"] = P.alpha;
    j["alpha0"] = P.alpha0;
    j["mu"] = P.mu;
    json aut = json::object();
    for (int L = 3; L <= P.ell && L < static_cast<int>(P.aut.size()); ++L) aut[std::to_string(L)] = P.aut[L];
    j["aut"] = aut;
    j["beta"] = P.beta;
    j["t_M"] = P.t_M;
    j["p_M"] = P.p_M;
    j["xi_M"] = P.xi_M;
    return j.dump(2);
}

std::string envelope_json(const EnvelopeReport& report) {
    json vars = json::array();
    for (const auto& v : report.variables) {
        json rows = json::array();
        for (const auto& r : v.rows)
            rows.push_back({{"i", r.i},
                            {"t", r.t},
                            {"samples", r.samples},
                            {"mean", r.mean},
                            {"std_error", r.std_error},
                            {"min", r.min},
                            {"max", r.max},
                            {"predicted", r.predicted},
                            {"eps", r.eps},
                            {"x_plus", r.x_plus},
                            {"x_minus", r.x_minus},
                            {"contained", r.contained}});
        vars.push_back({{"name", v.name},
                        {"containment_fraction", v.containment_fraction},
                        {"max_abs_x", v.max_abs_x},
                        {"rows", rows}});
    }
    return json{{"variables", vars}}.dump(2);
}

EnvelopeReport envelope_from_json(const std::string& text) {
    EnvelopeReport rep;
    try {
        const json j = json::parse(text);
        for (const auto& v : j.at("variables")) {
            VariableEnvelope var;
            var.name = v.at("name").get<std::string>();
            var.containment_fraction = v.at("containment_fraction").get<double>();
            var.max_abs_x = v.at("max_abs_x").get<double>();
            for (const auto& r : v.at("rows")) {
                EnvelopeRow row;
                row.i = r.at("i").get<std::size_t>();
                row.t = r.at("t").get<double>();
                row.samples = r.at("samples").get<std::size_t>();
                row.mean = r.at("mean").get<double>();
                row.std_error = r.at("std_error").get<double>();
                row.min = r.at("min").get<double>();
                row.max = r.at("max").get<double>();
                row.predicted = r.at("predicted").get<double>();
                row.eps = r.at("eps").get<double>();
                row.x_plus = r.at("x_plus").get<double>();
                row.x_minus = r.at("x_minus").get<double>();
                row.contained = r.at("contained").get<bool>();
                var.rows.push_back(row);
            }
            rep.variables.push_back(std::move(var));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad envelope JSON: ") + e.what());
    }
    return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw InvalidParams("need at least one trial");
    if (cfg.sampling.y_samples < 0 || cfg.sampling.w_samples < 0) throw InvalidParams("sample counts must be >= 0");
    const ModelParams& P = cfg.params;
    std::vector<std::size_t> schedule = cfg.schedule;
    if (schedule.empty())
        schedule = geometric_schedule(cfg.stop.kind == StopKind::StepCap ? cfg.stop.cap : P.n * P.n);

    ExperimentResult res;
    res.traces.resize(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::string first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cfg.trials) return;
            {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error.empty()) return;
            }
            try {
                res.traces[k] =
                    run_trial(P, derive_seed(cfg.master_seed, k), schedule, cfg.stop, cfg.sampling, cfg.engine);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (first_error.empty()) first_error = "trial " + std::to_string(k) + ": " + e.what();
            }
        }
    };
    const unsigned nthreads = resolve_threads(cfg.threads, cfg.trials);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (!first_error.empty()) throw ConsistencyFailure(first_error);

    res.envelope = build_envelope(P, res.traces, cfg.strict_envelope);

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        if (ec) throw IoError("cannot create " + cfg.out_dir + ": " + ec.message());
        auto open = [&](const std::string& name) {
            std::ofstream os(fs::path(cfg.out_dir) / name);
            if (!os) throw IoError("cannot write " + name);
            return os;
        };
        {
            auto os = open("trace.csv");
            write_trace_csv(os, trace_rows(res.traces));
        }
        {
            auto os = open("params.json");
            os << params_json(P) << '\n';
        }
        {
            json summary = json::parse(envelope_json(res.envelope));
            json ms = json::array();
            for (const Trace& tr : res.traces) ms.push_back(tr.M);
            summary["trials"] = cfg.trials;
            summary["master_seed"] = cfg.master_seed;
            summary["M_final"] = ms;
            summary["params"] = json::parse(params_json(P));
            auto os = open("summary.json");
            os << summary.dump(2) << '\n';
        }
        for (std::size_t k = 0; k < res.traces.size(); ++k) {
            LinearHypergraph H(P.n, P.r);
            for (const RSet& e : res.traces[k].edges) H.add_edge(e);
            auto os = open("trial_" + std::to_string(k) + ".hg");
            write_hypergraph(os, H);
        }
    }
    return res;
}

double one_step_drift(double raw, double raw_next, double x, double x_next, double eps, double eps_next, int sign) {
    return sign * ((raw_next - raw) - (x_next - x)) - (eps_next - eps);
}

DriftReport supermartingale_check(const std::vector<Trace>& traces, DriftVariable var, int m) {
    if (traces.size() < 30) throw InsufficientData("drift check needs at least 30 trials");
    const ModelParams& P = traces[0].params;
    if (var == DriftVariable::Y && (m < 2 || m > P.r - 1)) throw InvalidParams("m must be in [2, r-1]");
    const double n2 = static_cast<double>(P.n) * static_cast<double>(P.n);
    DriftReport rep;
    std::size_t nonpos = 0, ci_nonpos = 0;
    for (std::size_t i : aligned_steps(traces)) {
        const double t = static_cast<double>(i) / n2;
        const double t1 = static_cast<double>(i + 1) / n2;
        if (t1 > P.t_M) break;
        const TrajectoryPoint X0 = evaluate(P, t), X1 = evaluate(P, t1);
        const double x0 = var == DriftVariable::Q ? X0.q() : X0.y(m);
        const double x1 = var == DriftVariable::Q ? X1.q() : X1.y(m);
        const double e0 = var == DriftVariable::Q ? X0.eps_q() : X0.eps_y(m);
        const double e1 = var == DriftVariable::Q ? X1.eps_q() : X1.eps_y(m);
        for (int sign : {1, -1}) {
            std::vector<double> d;
            for (const Trace& tr : traces) {
                const Checkpoint* cp = checkpoint_at(tr, i);
                if (tr.M <= i) continue; // no step followed
                if (var == DriftVariable::Q) {
                    d.push_back(one_step_drift(static_cast<double>(cp->q), static_cast<double>(cp->q_next), x0, x1,
                                               e0, e1, sign));
                } else {
                    for (const YSample& s : cp->y)
                        if (s.m == m && s.next >= 0)
                            d.push_back(one_step_drift(static_cast<double>(s.count), static_cast<double>(s.next), x0,
                                                       x1, e0, e1, sign));
                }
            }
            if (d.empty()) continue;
            const Stats s = stats_of(d);
            DriftRow row{i, t, sign, s.k, s.mean, s.mean - 1.96 * s.se, s.mean + 1.96 * s.se};
            nonpos += row.mean <= 0;
            ci_nonpos += row.ci_low <= 0;
            rep.rows.push_back(row);
        }
    }
    if (!rep.rows.empty()) {
        rep.fraction_nonpositive = static_cast<double>(nonpos) / static_cast<double>(rep.rows.size());
        rep.fraction_ci_nonpositive = static_cast<double>(ci_nonpos) / static_cast<double>(rep.rows.size());
    }
    return rep;
}

ExponentFit fit_exponent(const std::vector<ExponentInput>& data, int ell) {
    if (data.size() < 3) throw InsufficientData("exponent fit needs at least 3 sizes");
    ExponentFit fit;
    std::vector<double> xs, ys;
    for (const auto& d : data) {
        if (d.M.size() < 5) throw InsufficientData("each size needs at least 5 trials");
        const double mean = std::accumulate(d.M.begin(), d.M.end(), 0.0) / static_cast<double>(d.M.size());
        fit.n_grid.push_back(d.n);
        fit.M_means.push_back(mean);
        xs.push_back(std::log(static_cast<double>(d.n)));
        ys.push_back(std::log(mean));
    }
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxy = 0, sxx = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        sxy += (xs[j] - mx) * (ys[j] - my);
        sxx += (xs[j] - mx) * (xs[j] - mx);
    }
    if (!(sxx > 0)) throw InsufficientData("sizes must differ");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t j = 0; j < xs.size(); ++j) fit.residuals.push_back(ys[j] - (fit.intercept + fit.slope * xs[j]));
    fit.lower_reference = 1.0 + 1.0 / ell;
    fit.upper_reference = 1.0 + 1.0 / (ell - 1.0);
    return fit;
}

std::string exponent_json(const ExponentFit& fit) {
    json j;
    j["n_grid"] = fit.n_grid;
    j["M_means"] = fit.M_means;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residuals"] = fit.residuals;
    j["lower_reference"] = fit.lower_reference;
    j["upper_reference"] = fit.upper_reference;
    j["gap_to_upper"] = fit.upper_reference - fit.slope;
    return j.dump(2);
}

} // namespace glgp
