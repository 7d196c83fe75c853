#include "glgp/trajectory.hpp"

#include "glgp/errors.hpp"
#include "glgp/rset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

namespace glgp {

namespace {

double choose2(int x) { return 0.5 * x * (x - 1); }

double log_factorial(int x) { return std::lgamma(static_cast<double>(x) + 1.0); }

double factorial(int x) { return std::exp(log_factorial(x)); }

void validate_aut_table() {
    static std::once_flag once;
    std::call_once(once, [] {
        const std::array<std::array<int, 2>, 3> cases{{{3, 3}, {3, 4}, {4, 3}}};
        for (auto [r, len] : cases)
            if (aut_count(r, len) != aut_count_bruteforce(r, len))
                throw ConsistencyFailure("automorphism closed form disagrees with brute force");
    });
}

} // namespace

std::uint64_t aut_count(int r, int len) {
    if (r < 3 || len < 3) throw InvalidParams("need r >= 3 and len >= 3");
    unsigned __int128 acc = 2 * static_cast<unsigned>(len);
    std::uint64_t fact = 1;
    for (int i = 2; i <= r - 2; ++i) fact *= static_cast<std::uint64_t>(i);
    for (int i = 0; i < len; ++i) {
        acc *= fact;
        if (acc > std::numeric_limits<std::uint64_t>::max()) throw InvalidParams("automorphism count overflows");
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t aut_count_bruteforce(int r, int len) {
    if (r < 3 || len < 3) throw InvalidParams("need r >= 3 and len >= 3");
    const int v = (r - 1) * len;
    if (v > 10) throw InvalidParams("cycle too large for permutation search");
    // connecting vertices 0..len-1, then r-2 private vertices per edge
    std::vector<std::uint32_t> edges;
    for (int i = 0; i < len; ++i) {
        std::uint32_t mask = (1u << i) | (1u << ((i + 1) % len));
        for (int j = 0; j < r - 2; ++j) mask |= 1u << (len + i * (r - 2) + j);
        edges.push_back(mask);
    }
    std::sort(edges.begin(), edges.end());
    std::vector<int> perm(static_cast<std::size_t>(v));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint32_t> img(edges.size());
    std::uint64_t count = 0;
    do {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            std::uint32_t m = 0;
            for (int x = 0; x < v; ++x)
                if (edges[e] >> x & 1u) m |= 1u << perm[static_cast<std::size_t>(x)];
            img[e] = m;
        }
        std::sort(img.begin(), img.end());
        if (img == edges) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

double p_of(const ModelParams& P, double t) { return 1.0 - P.r * (P.r - 1.0) * t; }

double log_xi_of(const ModelParams& P, double t) {
    const double rf = factorial(P.r);
    const double n = static_cast<double>(P.n);
    double s = 0;
    for (int L = 3; L <= P.ell; ++L)
        s += rf * L / static_cast<double>(P.aut[L]) * std::pow(rf * t, L - 1) * std::pow(n, L - 2);
    return -s;
}

double xi_tilde_of(const ModelParams& P, double t) {
    const double rf = factorial(P.r);
    const double n = static_cast<double>(P.n);
    double s = 0;
    for (int L = 3; L <= P.ell; ++L)
        s += L * (L - 1.0) / static_cast<double>(P.aut[L]) * std::pow(rf, L) * std::pow(n * t, L - 2);
    return s;
}

double log_y_of(const ModelParams& P, double t, int m) {
    const double p = p_of(P, t);
    if (!(p > 0)) throw OutOfDomain("p(t) is not positive");
    return (P.r - m) * std::log(static_cast<double>(P.n)) - log_factorial(P.r - m) +
           (choose2(P.r) - choose2(m)) * std::log(p) + log_xi_of(P, t);
}

namespace {

double log_q_of(const ModelParams& P, double t) {
    const double p = p_of(P, t);
    if (!(p > 0)) throw OutOfDomain("p(t) is not positive");
    return P.r * std::log(static_cast<double>(P.n)) - log_factorial(P.r) + choose2(P.r) * std::log(p) +
           log_xi_of(P, t);
}

double log_binom(int a, int b) { return log_factorial(a) - log_factorial(b) - log_factorial(a - b); }

} // namespace

double log_w_of(const ModelParams& P, double t, int L, int k) {
    const double p = p_of(P, t);
    if (!(p > 0)) throw OutOfDomain("p(t) is not positive");
    const double rf = factorial(P.r);
    const double logn = std::log(static_cast<double>(P.n));
    double v = std::log(rf * L / static_cast<double>(P.aut[L])) + log_binom(L - 1, k);
    if (k > 0) v += k * std::log(rf * t);
    v += (L - 1 - k) * (choose2(P.r) * std::log(p) + log_xi_of(P, t));
    v += ((P.r - 1) * (L - k) + k - P.r) * logn;
    return v;
}

ModelParams derive_params(std::uint64_t n, int r, int ell, std::optional<double> lambda, std::optional<double> alpha,
                          double mu) {
    if (r < 3 || r > kMaxUniformity) throw InvalidParams("r must be in [3, 8]");
    if (ell < 3) throw InvalidParams("ell must be at least 3");
    if (n < 16) throw InvalidParams("n must be at least 16");
    validate_aut_table();
    ModelParams P;
    P.n = n;
    P.r = r;
    P.ell = ell;
    P.mu = mu;
    P.alpha0 = (ell - 2.0) / (ell - 1.0);
    P.lambda = lambda.value_or(1.1 * ell / (ell - 1.0));
    P.alpha = alpha.value_or((P.alpha0 + 1.0) / 2.0);
    if (!(P.lambda > ell / (ell - 1.0))) throw InvalidParams("lambda must exceed ell/(ell-1)");
    if (!(P.alpha > P.alpha0 && P.alpha < 1.0)) throw InvalidParams("alpha must lie in (alpha0, 1)");
    P.aut.assign(static_cast<std::size_t>(ell + 1), 0);
    for (int L = 3; L <= ell; ++L) P.aut[L] = aut_count(r, L);
    const double logn = std::log(static_cast<double>(n));
    P.t_M = std::exp((-1.0 + 1.0 / (ell - 1.0)) * logn - P.lambda * std::log(logn));
    P.p_M = p_of(P, P.t_M);
    if (!(P.p_M > 0)) throw InvalidParams("horizon lies beyond p = 0");
    P.xi_M = std::exp(log_xi_of(P, P.t_M));
    const double base = 3.0 * ell * factorial(r) / (std::pow(P.p_M, choose2(r)) * P.xi_M);
    for (int k = 0; k <= ell - 2; ++k) P.beta.push_back(std::pow(base, k));
    return P;
}

TrajectoryPoint evaluate(const ModelParams& P, double t) {
    if (t < 0) throw OutOfDomain("negative time");
    TrajectoryPoint X;
    X.t = t;
    X.p = p_of(P, t);
    if (!(X.p > 0)) throw OutOfDomain("p(t) is not positive");
    const double n = static_cast<double>(P.n);
    const double logn = std::log(n);
    X.pi = factorial(P.r) * t / std::pow(n, P.r - 2);
    X.xi = std::exp(log_xi_of(P, t));
    X.xi_tilde = xi_tilde_of(P, t);
    X.sigma = std::log(std::pow(n, P.alpha) + n * n * t);
    const double log_sigma = std::log(X.sigma);
    X.log_q = log_q_of(P, t);
    X.log_eps_q = log_sigma + (P.alpha + P.r - 1) * logn;
    X.log_y.assign(static_cast<std::size_t>(P.r), -std::numeric_limits<double>::infinity());
    X.log_eps_y = X.log_y;
    for (int m = 2; m <= P.r - 1; ++m) {
        X.log_y[m] = log_y_of(P, t, m);
        X.log_eps_y[m] = log_sigma + (P.alpha + P.r - m - 1) * logn;
    }
    X.log_w.assign(static_cast<std::size_t>(P.ell + 1), {});
    X.log_eps_w.assign(static_cast<std::size_t>(P.ell + 1), {});
    for (int L = 3; L <= P.ell; ++L) {
        for (int k = 0; k <= L - 2; ++k) {
            X.log_w[L].push_back(log_w_of(P, t, L, k));
            X.log_eps_w[L].push_back(std::log(P.beta[k]) + (k + 2) * log_sigma +
                                     (P.alpha + (P.r - 1) * (L - k) + k - P.r - 1) * logn + k * std::log(P.t_M));
        }
    }
    return X;
}

double TrajectoryPoint::q() const { return std::exp(log_q); }
double TrajectoryPoint::eps_q() const { return std::exp(log_eps_q); }
double TrajectoryPoint::y(int m) const { return std::exp(log_y.at(m)); }
double TrajectoryPoint::eps_y(int m) const { return std::exp(log_eps_y.at(m)); }
double TrajectoryPoint::w(int len, int k) const { return std::exp(log_w.at(len).at(k)); }
double TrajectoryPoint::eps_w(int len, int k) const { return std::exp(log_eps_w.at(len).at(k)); }

namespace {

// Five-point central difference, fourth order in h.
template <class F>
double five_point(F&& f, double t, double h) {
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}

} // namespace

double check_derivative_identity_y(const ModelParams& P, double t, int m, double h) {
    if (m < 2 || m > P.r - 1) throw InvalidParams("m must be in [2, r-1]");
    if (!(h > 0) || t - 2 * h < 0) throw OutOfDomain("finite-difference stencil leaves the domain");
    const double fd = five_point([&](double s) { return log_y_of(P, s, m); }, t, h);
    const double n = static_cast<double>(P.n);
    const double y2_over_q_n2 = std::exp(log_y_of(P, t, 2) - log_q_of(P, t) + 2 * std::log(n));
    const double rhs = -((choose2(P.r) - choose2(m)) * y2_over_q_n2 + xi_tilde_of(P, t));
    return std::fabs(fd - rhs) / std::fabs(rhs);
}

double check_derivative_identity_w(const ModelParams& P, double t, int L, int k, double h) {
    if (L < 3 || L > P.ell || k < 0 || k > L - 2) throw InvalidParams("need 3 <= len <= ell and 0 <= k <= len-2");
    if (!(h > 0) || t - 2 * h <= 0) throw OutOfDomain("finite-difference stencil leaves the domain");
    const double fd = five_point([&](double s) { return log_w_of(P, s, L, k); }, t, h);
    const double n = static_cast<double>(P.n);
    const double r = P.r;
    double rhs = -(L - k - 1) * (r * r * (r - 1) * (r - 1) / (2 * p_of(P, t)) + xi_tilde_of(P, t));
    if (k >= 1)
        rhs += (L - k) * std::exp(log_w_of(P, t, L, k - 1) - log_w_of(P, t, L, k) - log_q_of(P, t) + 2 * std::log(n));
    return std::fabs(fd - rhs) / std::fabs(rhs);
}

double check_derivative_identity_xi(const ModelParams& P, double t, double h) {
    if (!(h > 0) || t - 2 * h < 0) throw OutOfDomain("finite-difference stencil leaves the domain");
    const double fd = five_point([&](double s) { return log_xi_of(P, s); }, t, h);
    const double rhs = -xi_tilde_of(P, t);
    return std::fabs(fd - rhs) / std::fabs(rhs);
}

double freedman_bound(double z, double C, double V) {
    if (!(z > 0 && C > 0 && V > 0)) throw InvalidParams("Freedman bound needs positive z, C, V");
    return std::exp(-z * z / (2 * V * (C + z)));
}

TransformedSeries transform(const std::vector<double>& raw, const std::vector<double>& predicted,
                            const std::vector<double>& eps, int sign) {
    if (raw.size() != predicted.size() || raw.size() != eps.size())
        throw LengthMismatch("series lengths differ");
    if (sign != 1 && sign != -1) throw InvalidParams("sign must be +1 or -1");
    TransformedSeries T{raw, predicted, eps, sign, {}, {}};
    T.values.resize(raw.size());
    T.contained.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        T.values[i] = sign * (raw[i] - predicted[i]) - eps[i];
        T.contained[i] = std::fabs(raw[i] - predicted[i]) <= eps[i];
    }
    return T;
}

} // namespace glgp
