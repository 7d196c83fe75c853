#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace glgp {

/// Constants of one (n, r, ell) configuration.
struct ModelParams {
    std::uint64_t n = 0;
    int r = 0;
    int ell = 0;
    double lambda = 0;
    double alpha = 0;
    double alpha0 = 0;
    double mu = 1.0; // carried for reports only
    std::vector<std::uint64_t> aut; // aut[len] for len in [3, ell]; zero below
    std::vector<double> beta;       // beta[k] for k in [0, ell - 2]
    double t_M = 0;
    double p_M = 0;
    double xi_M = 0;
};

/// Defaults: lambda = 1.1 ell/(ell-1), alpha = (alpha0 + 1)/2.
ModelParams derive_params(std::uint64_t n, int r, int ell, std::optional<double> lambda = std::nullopt,
                          std::optional<double> alpha = std::nullopt, double mu = 1.0);

/// |Aut(C_len^r)| = 2 len ((r-2)!)^len.
std::uint64_t aut_count(int r, int len);

/// Automorphism count of C_len^r by trying every vertex permutation; small cases only.
std::uint64_t aut_count_bruteforce(int r, int len);

/// Trajectory values at one time. n-power quantities are kept as natural logs.
struct TrajectoryPoint {
    double t = 0;
    double pi = 0;
    double p = 0;
    double xi = 0;
    double xi_tilde = 0;
    double sigma = 0;
    double log_q = 0;
    double log_eps_q = 0;
    std::vector<double> log_y;     // index m in [2, r-1]
    std::vector<double> log_eps_y; // index m in [2, r-1]
    std::vector<std::vector<double>> log_w;     // [len][k]
    std::vector<std::vector<double>> log_eps_w; // [len][k]

    double q() const;
    double eps_q() const;
    double y(int m) const;
    double eps_y(int m) const;
    double w(int len, int k) const;
    double eps_w(int len, int k) const;
};

/// Throws OutOfDomain if p(t) <= 0 or t < 0.
TrajectoryPoint evaluate(const ModelParams& params, double t);

double p_of(const ModelParams& params, double t);
double log_xi_of(const ModelParams& params, double t);
double xi_tilde_of(const ModelParams& params, double t);
double log_y_of(const ModelParams& params, double t, int m);
double log_w_of(const ModelParams& params, double t, int len, int k);

/// Relative error of the codegree derivative identity by five-point central
/// differences with step h (needs t >= 2h); compares logarithmic derivatives,
/// which is the same ratio.
double check_derivative_identity_y(const ModelParams& params, double t, int m, double h);
double check_derivative_identity_w(const ModelParams& params, double t, int len, int k, double h);
/// Relative error of (log xi)' = -xi_tilde.
double check_derivative_identity_xi(const ModelParams& params, double t, double h);

/// exp(-z^2 / (2 V (C + z))). Throws InvalidParams on non-positive input.
double freedman_bound(double z, double C, double V);

struct TransformedSeries {
    std::vector<double> raw;
    std::vector<double> predicted;
    std::vector<double> eps;
    int sign = 1;
    std::vector<double> values;
    std::vector<bool> contained; // raw within predicted +- eps
};

/// values[i] = sign (raw[i] - predicted[i]) - eps[i]. Throws LengthMismatch.
TransformedSeries transform(const std::vector<double>& raw, const std::vector<double>& predicted,
                            const std::vector<double>& eps, int sign);

} // namespace glgp
