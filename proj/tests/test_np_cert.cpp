#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rscert/np_cert.hpp"
#include "rscert/special_functions.hpp"

using namespace rscert;

namespace {

NpProblem esg_problem(int d, double sigma, double eta, double A, double tol = 1e-6) {
    NpProblem p;
    p.spec = make_spec(Family::esg, d, sigma, eta);
    p.A = A;
    p.tol = tol;
    return p;
}

}  // namespace

TEST_CASE("omega branch cases") {
    auto spec = make_spec(Family::esg, 3072, 1.0, 2.0);
    double g = 2.0;  // ln(-nu)
    // sharp: 0 below u = -g; natural: 1 below u = g
    CHECK(esg_omega_sharp(0.0, g, 1.0, spec) == 0.0);
    CHECK(esg_omega_natural(g - 1e-3, g, 1.0, spec) == 1.0);
    // far above the boundary, natural ~ 0 and sharp ~ 1 are approached from
    // the Psi clamp as u grows toward the gamma bulk
    CHECK(esg_omega_sharp(spec.shape, g, 0.3, spec) > 0.0);
    CHECK(esg_omega_natural(spec.shape, g, 0.3, spec) < 1.0);
}

TEST_CASE("omega continuity across branch boundaries") {
    auto spec = make_spec(Family::esg, 3072, 1.0, 2.0);
    for (double g : {-1.5, 0.7, 3.0}) {
        double rho = 0.8;
        if (-g > 0.0) {
            double u0 = -g;
            CHECK(std::fabs(esg_omega_sharp(u0 + 1e-10, g, rho, spec) -
                            esg_omega_sharp(u0 - 1e-10, g, rho, spec)) <= 1e-9);
        }
        if (g > 0.0) {
            double u0 = g;
            CHECK(std::fabs(esg_omega_natural(u0 + 1e-10, g, rho, spec) -
                            esg_omega_natural(u0 - 1e-10, g, rho, spec)) <= 1e-9);
        }
    }
    // EGG forms go through the Lambert branch; same two-sided check around a
    // grid of u (no hard branch point, so plain local continuity)
    auto egg = make_spec(Family::egg, 3072, 1.0, 2.0, 1530);
    for (double u : {0.5, 3.0, 6.0, 12.0})
        for (int sign : {-1, 1})
            CHECK(std::fabs(egg_omega(u + 1e-9, 1.0, 0.8, egg, sign) -
                            egg_omega(u - 1e-9, 1.0, 0.8, egg, sign)) <= 1e-6);
}

TEST_CASE("esg_np_certify: no certification at A = 1/2") {
    auto res = esg_np_certify(esg_problem(3072, 1.0, 2.0, 0.5));
    CHECK(res.radius == 0.0);
    CHECK_FALSE(res.certified);
}

TEST_CASE("esg_np_certify approaches the Cohen radius at image scale") {
    auto res = esg_np_certify(esg_problem(150224, 1.0, 2.0, 0.8));
    CHECK(std::fabs(res.radius - 0.8416212335729143) <= 1e-3);
    for (double eta : {1.0, 4.0, 8.0}) {
        auto other = esg_np_certify(esg_problem(150224, 1.0, eta, 0.8));
        CHECK(std::fabs(other.radius - res.radius) <= 1e-3);
    }
}

TEST_CASE("esg eta-inertness at desk scale") {
    for (double sigma : {0.5, 1.0}) {
        for (double A : {0.6, 0.8, 0.95}) {
            double lo = 1e9, hi = -1e9;
            for (double eta : {1.0, 2.0, 4.0, 8.0}) {
                double r = esg_np_certify(esg_problem(150224, sigma, eta, A, 1e-5)).radius;
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            CHECK(hi - lo <= 2e-3);
        }
    }
}

TEST_CASE("radius monotone in A") {
    double prev = -1.0;
    for (double A : {0.55, 0.7, 0.85, 0.95, 0.99}) {
        double r = esg_np_certify(esg_problem(3072, 0.5, 2.0, A, 1e-5)).radius;
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("probability_from_radius: limits, dual magnitude, inverse contract") {
    auto spec = make_spec(Family::esg, 150224, 1.0, 2.0);
    // rho -> 0+: A -> 1/2 (at rho = 1e-4, Phi(rho/sigma) - 1/2 ~ 4e-5)
    CHECK(esg_probability_from_radius(spec, 1e-4) == doctest::Approx(0.5).epsilon(1e-3));

    // ln(-nu) ~ rho^2 / (2 sigma^2) in the Gaussian-like regime
    for (double rho : {1.0, 2.0, 3.0}) {
        DualState dual;
        esg_probability_from_radius(spec, rho, &dual);
        CHECK(dual.log_neg_nu == doctest::Approx(rho * rho / 2.0).epsilon(0.02));
    }

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> sig(0.3, 1.2), rr(0.2, 1.5);
    const double etas[3] = {1.0, 2.0, 4.0};
    for (int rep = 0; rep < 10; ++rep) {
        auto s = make_spec(Family::esg, 150224, sig(rng), etas[rep % 3]);
        double rho = rr(rng) * s.sigma;
        double A = esg_probability_from_radius(s, rho);
        NpProblem p;
        p.spec = s;
        p.A = A;
        p.tol = 1e-6;
        double back = esg_np_certify(p).radius;
        CHECK(back == doctest::Approx(rho).epsilon(1e-3));
    }
}

TEST_CASE("analytic probability/radius closed form") {
    CHECK(esg_analytic_probability(3072, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    for (double A : {0.6, 0.8, 0.99})
        CHECK(esg_analytic_probability(3072, 0.5, esg_analytic_radius(3072, 0.5, A)) ==
              doctest::Approx(A).epsilon(1e-9));
    // matches the exact solver in the Assumption-valid regime
    for (double A : {0.8, 0.99, 0.999}) {
        double exact = esg_np_certify(esg_problem(150224, 1.0, 2.0, A, 1e-5)).radius;
        CHECK(std::fabs(exact - esg_analytic_radius(150224, 1.0, A)) <= 5e-3);
    }
}

TEST_CASE("cohen_radius values") {
    CHECK(cohen_radius(1.0, 0.5) == 0.0);
    CHECK(cohen_radius(1.0, 0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cohen_radius(0.5, 0.9) == doctest::Approx(0.6407757827723003).epsilon(1e-10));
}

TEST_CASE("egg_np_certify: degenerate A, monotone in A") {
    NpProblem p;
    p.spec = make_spec(Family::egg, 3072, 1.0, 2.0, 1530);
    p.A = 0.5;
    CHECK(egg_np_certify(p).radius == 0.0);
    double prev = -1.0;
    for (double A : {0.6, 0.75, 0.9}) {
        p.A = A;
        p.tol = 1e-5;
        double r = egg_np_certify(p).radius;
        CHECK(r > prev);
        prev = r;
    }
}
