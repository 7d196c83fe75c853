#pragma once

#include "glgp/process.hpp"
#include "glgp/trajectory.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace glgp {

struct ExperimentConfig {
    ModelParams params;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    StopRule stop;
    std::vector<std::size_t> schedule; // empty: geometric up to the cap (or n^2)
    SamplingConfig sampling;
    EngineOptions engine;
    bool strict_envelope = false; // per-object verdicts instead of the mean
    std::string out_dir;          // empty: no files
    unsigned threads = 0;         // 0: GLGP_THREADS or hardware concurrency
};

/// Worker count: explicit request, else GLGP_THREADS, else hardware concurrency; capped by `jobs`.
unsigned resolve_threads(unsigned requested, std::size_t jobs);

struct EnvelopeRow {
    std::size_t i = 0;
    double t = 0;
    std::size_t samples = 0;
    double mean = 0;
    double std_error = 0;
    double min = 0;
    double max = 0;
    double predicted = 0;
    double eps = 0;
    double x_plus = 0;  // mean - predicted - eps
    double x_minus = 0; // predicted - mean - eps
    bool contained = false;
};

struct VariableEnvelope {
    std::string name; // "Q", "Y2", "W_4_1", ...
    std::vector<EnvelopeRow> rows;
    double containment_fraction = 0;
    double max_abs_x = 0;
};

/// Per-variable containment against trajectory +- envelope for checkpoints with t <= t_M.
struct EnvelopeReport {
    std::vector<VariableEnvelope> variables;
    const VariableEnvelope* find(const std::string& name) const;
};

/// Aggregates aligned checkpoints (step index present in every trace).
EnvelopeReport build_envelope(const ModelParams& params, const std::vector<Trace>& traces, bool strict = false);

struct ExperimentResult {
    std::vector<Trace> traces;
    EnvelopeReport envelope;
};

/// Runs the trials in parallel with seeds derive_seed(master_seed, trial) and, when
/// out_dir is set, writes trace.csv, params.json, summary.json and trial_<k>.hg.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One CSV row per checkpoint.
struct TraceRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    int r = 0;
    int ell = 0;
    std::size_t i = 0;
    double t = 0;
    std::size_t q_emp = 0;
    double q_pred = 0;
    double eps_q = 0;
    double y2_emp_mean = 0;
    std::size_t y2_emp_count = 0;
    std::string w_samples_json;
    std::size_t M_final = 0;

    bool operator==(const TraceRow& o) const;
};

extern const char* const kTraceCsvHeader;

std::vector<TraceRow> trace_rows(const std::vector<Trace>& traces);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& is);

std::string params_json(const ModelParams& params);
std::string envelope_json(const EnvelopeReport& report);
EnvelopeReport envelope_from_json(const std::string& text);

/// 17 significant digits.
std::string format_double(double x);

enum class DriftVariable { Q, Y };

struct DriftRow {
    std::size_t i = 0;
    double t = 0;
    int sign = 1;
    std::size_t samples = 0;
    double mean = 0;
    double ci_low = 0;
    double ci_high = 0;
};

struct DriftReport {
    std::vector<DriftRow> rows;
    double fraction_nonpositive = 0;    // point estimates <= 0
    double fraction_ci_nonpositive = 0; // lower CI bound <= 0
};

/// One-step change of the transformed variable sign*(raw - x) - eps.
double one_step_drift(double raw, double raw_next, double x, double x_next, double eps, double eps_next, int sign);

/// Empirical drift of X^+ and X^- at aligned checkpoints with t <= t_M, with
/// 95% normal confidence intervals. Needs at least 30 traces (InsufficientData).
DriftReport supermartingale_check(const std::vector<Trace>& traces, DriftVariable var, int m = 2);

struct ExponentInput {
    std::uint64_t n = 0;
    std::vector<double> M;
};

struct ExponentFit {
    std::vector<std::uint64_t> n_grid;
    std::vector<double> M_means;
    double slope = 0;
    double intercept = 0;
    std::vector<double> residuals;
    double lower_reference = 0; // 1 + 1/ell
    double upper_reference = 0; // 1 + 1/(ell-1)
};

/// Least squares of log(mean M) on log n. Needs >= 3 sizes with >= 5 values each.
ExponentFit fit_exponent(const std::vector<ExponentInput>& data, int ell);

std::string exponent_json(const ExponentFit& fit);

} // namespace glgp
