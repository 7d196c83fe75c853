#include "glgp/errors.hpp"
#include "glgp/rng.hpp"
#include "glgp/trajectory.hpp"

#include <doctest.h>

#include <cmath>

using namespace glgp;

namespace {

double fact(int k) {
    double x = 1;
    for (int j = 2; j <= k; ++j) x *= j;
    return x;
}

double choose2(int k) { return k * (k - 1) / 2.0; }

// Direct evaluation of the closed forms in plain doubles; fine for n around 100.
struct Direct {
    const ModelParams& P;
    double n() const { return static_cast<double>(P.n); }
    double aut(int L) const { return 2.0 * L * std::pow(fact(P.r - 2), L); }
    double p(double t) const { return 1 - P.r * (P.r - 1) * t; }
    double xi(double t) const {
        double s = 0;
        for (int L = 3; L <= P.ell; ++L)
            s += fact(P.r) * L / aut(L) * std::pow(fact(P.r) * t, L - 1) * std::pow(n(), L - 2);
        return std::exp(-s);
    }
    double xi_tilde(double t) const {
        double s = 0;
        for (int L = 3; L <= P.ell; ++L)
            s += L * (L - 1) / aut(L) * std::pow(fact(P.r), L) * std::pow(n() * t, L - 2);
        return s;
    }
    double sigma(double t) const { return std::log(std::pow(n(), P.alpha) + n() * n() * t); }
    double q(double t) const { return std::pow(n(), P.r) / fact(P.r) * std::pow(p(t), choose2(P.r)) * xi(t); }
    double y(double t, int m) const {
        return std::pow(n(), P.r - m) / fact(P.r - m) * std::pow(p(t), choose2(P.r) - choose2(m)) * xi(t);
    }
    double w(double t, int L, int k) const {
        const double binom = std::tgamma(L) / (std::tgamma(k + 1) * std::tgamma(L - k));
        return fact(P.r) * L / aut(L) * binom * std::pow(fact(P.r) * t, k) *
               std::pow(std::pow(p(t), choose2(P.r)) * xi(t), L - 1 - k) *
               std::pow(n(), (P.r - 1) * (L - k) + k - P.r);
    }
    double eps_q(double t) const { return sigma(t) * std::pow(n(), P.alpha + P.r - 1); }
    double eps_y(double t, int m) const { return sigma(t) * std::pow(n(), P.alpha + P.r - m - 1); }
    double eps_w(double t, int L, int k) const {
        return P.beta[static_cast<std::size_t>(k)] * std::pow(sigma(t), k + 2) *
               std::pow(n(), P.alpha + (P.r - 1) * (L - k) + k - P.r - 1) * std::pow(P.t_M, k);
    }
};

template <class F>
double five_point(F&& f, double t, double h) {
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}

} // namespace

TEST_SUITE("trajectory") {

TEST_CASE("derive_params defaults and validation") {
    const ModelParams P = derive_params(1000, 3, 4);
    CHECK(P.alpha0 == doctest::Approx(2.0 / 3));
    CHECK(P.alpha == doctest::Approx(5.0 / 6));
    CHECK(P.lambda == doctest::Approx(1.1 * 4 / 3));
    CHECK(P.beta.size() == 3);
    CHECK(P.beta[0] == 1.0);
    CHECK(P.aut[3] == 6);
    CHECK(P.aut[4] == 8);
    const double pM = 1 - 6 * P.t_M;
    CHECK(P.p_M == doctest::Approx(pM).epsilon(1e-14));
    const Direct D{P};
    CHECK(P.xi_M == doctest::Approx(D.xi(P.t_M)).epsilon(1e-12));
    for (int k = 0; k <= 2; ++k)
        CHECK(P.beta[static_cast<std::size_t>(k)] ==
              doctest::Approx(std::pow(3 * 4 * 6.0 / (std::pow(pM, 3) * P.xi_M), k)).epsilon(1e-12));
    CHECK_THROWS_AS(derive_params(1000, 3, 4, 4.0 / 3), InvalidParams);
    CHECK_THROWS_AS(derive_params(1000, 3, 4, std::nullopt, 2.0 / 3), InvalidParams);
    CHECK_THROWS_AS(derive_params(1000, 3, 4, std::nullopt, 1.0), InvalidParams);
    CHECK_THROWS_AS(derive_params(15, 3, 4), InvalidParams);
    CHECK_THROWS_AS(derive_params(100, 2, 4), InvalidParams);
    CHECK_THROWS_AS(derive_params(100, 3, 2), InvalidParams);
}

TEST_CASE("horizon against a high-precision reference") {
    const ModelParams P = derive_params(10000, 3, 4, 1.47);
    // 50-digit evaluation of 10^{4(-1 + 1/3) - 1.47 log log 10^4}, frozen
    CHECK(P.t_M == doctest::Approx(8.2384988173086783925e-05).epsilon(1e-13));
}

TEST_CASE("automorphism counts") {
    CHECK(aut_count(3, 3) == 6);
    CHECK(aut_count(3, 4) == 8);
    CHECK(aut_count(4, 3) == 48);
    CHECK(aut_count_bruteforce(3, 3) == 6);
    CHECK(aut_count_bruteforce(3, 4) == 8);
    CHECK(aut_count_bruteforce(4, 3) == 48);
    CHECK(aut_count_bruteforce(3, 5) == aut_count(3, 5));
    CHECK(aut_count(5, 4) == 2 * 4 * 6 * 6 * 6 * 6);
}

TEST_CASE("values at t = 0") {
    for (int r = 3; r <= 5; ++r)
        for (int ell = 3; ell <= 5; ++ell) {
            const ModelParams P = derive_params(200, r, ell);
            const TrajectoryPoint X = evaluate(P, 0);
            CHECK(X.p == 1.0);
            CHECK(X.xi == 1.0);
            CHECK(X.pi == 0.0);
            CHECK(X.xi_tilde == 0.0);
            CHECK(X.sigma == doctest::Approx(P.alpha * std::log(200.0)));
            CHECK(X.q() == doctest::Approx(std::pow(200.0, r) / fact(r)));
            for (int L = 3; L <= ell; ++L)
                CHECK(X.log_w[static_cast<std::size_t>(L)][0] ==
                      doctest::Approx(std::log(fact(r) * L / static_cast<double>(aut_count(r, L))) +
                                      ((r - 1) * L - r) * std::log(200.0)));
        }
}

TEST_CASE("p at t = 0.05") {
    const ModelParams P = derive_params(100, 3, 4);
    CHECK(p_of(P, 0.05) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate(P, 1.0 / 6), OutOfDomain);
    CHECK_THROWS_AS(evaluate(P, -1e-9), OutOfDomain);
}

TEST_CASE("evaluate matches direct evaluation") {
    for (int r = 3; r <= 4; ++r)
        for (int ell = 3; ell <= 5; ++ell) {
            const ModelParams P = derive_params(100, r, ell);
            const Direct D{P};
            for (double frac : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
                const double t = frac * P.t_M;
                const TrajectoryPoint X = evaluate(P, t);
                CHECK(X.pi == doctest::Approx(fact(r) * t / std::pow(100.0, r - 2)));
                CHECK(X.p == doctest::Approx(D.p(t)).epsilon(1e-13));
                CHECK(X.xi == doctest::Approx(D.xi(t)).epsilon(1e-12));
                CHECK(X.xi_tilde == doctest::Approx(D.xi_tilde(t)).epsilon(1e-12));
                CHECK(X.sigma == doctest::Approx(D.sigma(t)).epsilon(1e-13));
                CHECK(X.q() == doctest::Approx(D.q(t)).epsilon(1e-12));
                CHECK(X.eps_q() == doctest::Approx(D.eps_q(t)).epsilon(1e-12));
                for (int m = 2; m <= r - 1; ++m) {
                    CHECK(X.y(m) == doctest::Approx(D.y(t, m)).epsilon(1e-12));
                    CHECK(X.eps_y(m) == doctest::Approx(D.eps_y(t, m)).epsilon(1e-12));
                }
                for (int L = 3; L <= ell; ++L)
                    for (int k = 0; k <= L - 2; ++k) {
                        if (t == 0 && k > 0) {
                            CHECK(X.w(L, k) == 0.0);
                        } else {
                            CHECK(X.w(L, k) == doctest::Approx(D.w(t, L, k)).epsilon(1e-11));
                        }
                        CHECK(X.eps_w(L, k) == doctest::Approx(D.eps_w(t, L, k)).epsilon(1e-11));
                    }
            }
        }
}

TEST_CASE("property: ranges on [0, t_M]") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t n = 16 + rng.uniform_below(100000);
        const int r = 3 + static_cast<int>(rng.uniform_below(3));
        const int ell = 3 + static_cast<int>(rng.uniform_below(4));
        ModelParams P;
        try {
            P = derive_params(n, r, ell);
        } catch (const InvalidParams&) {
            continue;
        }
        const TrajectoryPoint X = evaluate(P, rng.uniform01() * P.t_M);
        CHECK(X.p > 0);
        CHECK(X.p <= 1);
        CHECK(X.xi > 0);
        CHECK(X.xi <= 1);
        CHECK(X.eps_q() > 0);
        for (int m = 2; m <= r - 1; ++m) CHECK(X.eps_y(m) > 0);
        for (int L = 3; L <= ell; ++L)
            for (int k = 0; k <= L - 2; ++k) CHECK(std::isfinite(X.log_eps_w[static_cast<std::size_t>(L)][static_cast<std::size_t>(k)]));
    }
}

TEST_CASE("aggregation and relative-envelope identities") {
    for (int r = 3; r <= 5; ++r) {
        const ModelParams P = derive_params(500, r, 4);
        for (double frac : {0.0, 0.25, 0.8}) {
            const TrajectoryPoint X = evaluate(P, frac * P.t_M);
            CHECK(X.q() == doctest::Approx(500.0 * 500.0 * X.p / (r * (r - 1)) * X.y(2)).epsilon(1e-12));
            for (int m = 2; m <= r - 1; ++m) {
                const double ratio = (X.eps_q() / X.q()) / (X.eps_y(m) / X.y(m));
                CHECK(ratio == doctest::Approx(fact(r) / (fact(r - m) * std::pow(X.p, choose2(m)))).epsilon(1e-12));
            }
            double tail = 0;
            for (int L = 3; L <= 4; ++L) tail += X.w(L, L - 2) / X.q();
            if (frac > 0) CHECK(tail == doctest::Approx(X.xi_tilde / (500.0 * 500.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("derivative identities at the mid horizon") {
    const ModelParams P = derive_params(100, 3, 4);
    const double h = P.t_M * 1e-4;
    const double t = P.t_M / 2;
    CHECK(check_derivative_identity_y(P, t, 2, h) <= 1e-6);
    CHECK(check_derivative_identity_w(P, t, 4, 1, h) <= 1e-6);
    CHECK(check_derivative_identity_xi(P, t, h) <= 1e-6);
    for (int L = 3; L <= 4; ++L) CHECK(check_derivative_identity_w(P, t, L, 0, h) <= 1e-6);
}

TEST_CASE("derivative identity in the literal form") {
    // y_m'/n^2 = -[(C(r,2) - C(m,2)) y_m y_2 / q + y_m xi_tilde / n^2], checked without logs
    const ModelParams P = derive_params(100, 4, 4);
    const Direct D{P};
    const double n2 = 1e4, h = P.t_M * 1e-4;
    for (double frac : {0.2, 0.6}) {
        const double t = frac * P.t_M;
        for (int m = 2; m <= 3; ++m) {
            const double fd = five_point([&](double s) { return D.y(s, m); }, t, h) / n2;
            const double rhs = -((choose2(4) - choose2(m)) * D.y(t, m) * D.y(t, 2) / D.q(t) +
                                 D.y(t, m) * D.xi_tilde(t) / n2);
            CHECK(fd == doctest::Approx(rhs).epsilon(1e-6));
        }
        for (int L = 3; L <= 4; ++L)
            for (int k = 0; k <= L - 2; ++k) {
                const double fd = five_point([&](double s) { return D.w(s, L, k); }, t, h) / n2;
                double rhs = -D.w(t, L, k) * (L - k - 1) * (16.0 * 9 / (2 * n2 * D.p(t)) + D.xi_tilde(t) / n2);
                if (k > 0) rhs += (L - k) * D.w(t, L, k - 1) / D.q(t);
                CHECK(fd == doctest::Approx(rhs).epsilon(1e-6));
            }
        const double fdxi = five_point([&](double s) { return D.xi(s); }, t, h);
        CHECK(fdxi == doctest::Approx(-D.xi(t) * D.xi_tilde(t)).epsilon(1e-6));
    }
}

TEST_CASE("property: derivative identities at random times") {
    Rng rng(31);
    for (int r = 3; r <= 5; ++r) {
        const ModelParams P = derive_params(100, r, 4);
        const double h = P.t_M * 1e-4;
        for (int j = 0; j < 10; ++j) {
            const double t = P.t_M * (0.02 + 0.96 * rng.uniform01());
            CHECK(check_derivative_identity_y(P, t, 2, h) <= 1e-6);
            CHECK(check_derivative_identity_y(P, t, r - 1, h) <= 1e-6);
            for (int L = 3; L <= 4; ++L) CHECK(check_derivative_identity_w(P, t, L, L - 2, h) <= 1e-6);
            CHECK(check_derivative_identity_xi(P, t, h) <= 1e-6);
        }
    }
}

TEST_CASE("derivative error shrinks with the step") {
    const ModelParams P = derive_params(100, 3, 4);
    const double t = P.t_M / 3;
    const double coarse = check_derivative_identity_w(P, t, 4, 1, P.t_M * 1e-1);
    const double fine = check_derivative_identity_w(P, t, 4, 1, P.t_M * 1e-2);
    CHECK(fine < coarse / 50);
    CHECK(coarse > 0);
}

TEST_CASE("freedman bound") {
    CHECK(freedman_bound(1, 1, 1) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
    double prev = 1;
    for (int j = 1; j <= 100; ++j) {
        const double b = freedman_bound(0.1 * j, 1, 1);
        CHECK(b < prev);
        prev = b;
    }
    CHECK(freedman_bound(1, 1, 2) > freedman_bound(1, 1, 1));
    CHECK(freedman_bound(1, 2, 1) > freedman_bound(1, 1, 1));
    CHECK(freedman_bound(1e6, 1, 1) < 1e-100);
    CHECK_THROWS_AS(freedman_bound(0, 1, 1), InvalidParams);
    CHECK_THROWS_AS(freedman_bound(1, -1, 1), InvalidParams);
    CHECK_THROWS_AS(freedman_bound(1, 1, 0), InvalidParams);
}

TEST_CASE("transform") {
    const std::vector<double> pred{10, 20, 30}, eps{1, 2, 3};
    const auto same = transform(pred, pred, eps, +1);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(same.values[j] == -eps[j]);
        CHECK(same.contained[j]);
    }
    const auto upper = transform({11, 22, 33}, pred, eps, +1);
    for (double v : upper.values) CHECK(v == 0.0);
    const auto below = transform({8, 16, 24}, pred, eps, -1);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(below.values[j] == eps[j]);
        CHECK_FALSE(below.contained[j]);
    }
    CHECK_THROWS_AS(transform({1, 2}, pred, eps, 1), LengthMismatch);
}

} // TEST_SUITE
