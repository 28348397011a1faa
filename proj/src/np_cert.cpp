#include "rscert/np_cert.hpp"

#include <cmath>
#include <stdexcept>

#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

double psi(const DistributionSpec& spec, double arg) {
    return beta_cdf_sym(0.5 * (spec.d - 1.0), arg);
}

double radial_t(const DistributionSpec& spec, double u) {
    return spec.scale * std::pow(2.0 * u, 1.0 / spec.eta);
}

// Solve target = E(g) for the monotone-increasing map E by bisection on
// g = ln(-nu), growing the bracket geometrically when needed.
template <typename F>
double solve_monotone(const F& expect, double target, double lo, double hi,
                      double prob_tol, double* residual) {
    double f_lo = expect(lo), f_hi = expect(hi);
    for (int grow = 0; f_lo > target && grow < 16; ++grow) {
        lo *= 2.0;
        f_lo = expect(lo);
    }
    for (int grow = 0; f_hi < target && grow < 16; ++grow) {
        hi *= 2.0;
        f_hi = expect(hi);
    }
    if (f_lo > target + prob_tol || f_hi < target - prob_tol)
        throw SolverError("dual bracket could not be established");
    double mid = 0.5 * (lo + hi), f_mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        f_mid = expect(mid);
        if (f_mid < target) lo = mid; else hi = mid;
        if ((std::fabs(f_mid - target) < prob_tol &&
             hi - lo < 1e-9 * std::max(1.0, std::fabs(mid))) ||
            hi - lo < 1e-13 * std::max(1.0, std::fabs(mid)))
            break;
    }
    if (residual) *residual = std::fabs(f_mid - target);
    return mid;
}

}  // namespace

double esg_omega_natural(double u, double log_neg_nu, double rho,
                         const DistributionSpec& spec) {
    double su = u - log_neg_nu;
    if (su < 0.0) return 1.0;
    double t = radial_t(spec, u);
    if (t <= 0.0) return su > 0.0 ? 0.0 : 1.0;
    double xi2 = spec.scale * spec.scale * std::pow(2.0 * su, 2.0 / spec.eta);
    double arg = ((rho + t) * (rho + t) - xi2) / (4.0 * rho * t);
    return psi(spec, arg);
}

double esg_omega_sharp(double u, double log_neg_nu, double rho,
                       const DistributionSpec& spec) {
    double su = u + log_neg_nu;
    if (su < 0.0) return 0.0;
    double t = radial_t(spec, u);
    if (t <= 0.0) return 0.0;
    double xi2 = spec.scale * spec.scale * std::pow(2.0 * su, 2.0 / spec.eta);
    double arg = (xi2 - (t - rho) * (t - rho)) / (4.0 * rho * t);
    return psi(spec, arg);
}

double egg_omega(double u, double log_neg_nu, double rho,
                 const DistributionSpec& spec, int sign_sharp) {
    if (spec.k == 0) {
        // k = 0 degenerates to the ESG forms (the W argument diverges)
        return sign_sharp > 0 ? esg_omega_sharp(u, log_neg_nu, rho, spec)
                              : esg_omega_natural(u, log_neg_nu, rho, spec);
    }
    double t = radial_t(spec, u);
    if (u <= 0.0 || t <= 0.0) return sign_sharp > 0 ? 0.0 : 1.0;
    double m = spec.eta / (2.0 * spec.k);
    double log_arg = std::log(m * u) + m * (u + sign_sharp * log_neg_nu);
    double v = lambert_w0_exp(log_arg);
    double xi2 = v > 0.0
                     ? spec.scale * spec.scale * std::pow(2.0 * v / m, 2.0 / spec.eta)
                     : 0.0;
    double arg = sign_sharp > 0
                     ? (xi2 - (t - rho) * (t - rho)) / (4.0 * rho * t)
                     : ((rho + t) * (rho + t) - xi2) / (4.0 * rho * t);
    return psi(spec, arg);
}

CertificationResult esg_np_certify(const NpProblem& problem) {
    const DistributionSpec& spec = problem.spec;
    if (spec.T) throw std::invalid_argument("esg_np_certify: spec must be untruncated");
    if (problem.A >= 1.0) throw std::invalid_argument("esg_np_certify: A must be < 1");
    CertificationResult result;
    result.method = Method::np;
    if (problem.A <= 0.5) {
        result.certified = false;  // nothing to certify below the majority threshold
        return result;
    }

    double residual = 0.0;
    auto predicate = [&](double rho) {
        auto e_nat = [&](double g) {
            return expectation_lni(spec.shape, [&](double u) {
                return esg_omega_natural(u, g, rho, spec);
            }, problem.lni);
        };
        double g = solve_monotone(e_nat, problem.A, -40.0, 40.0, 1e-9, &residual);
        double sharp = expectation_lni(spec.shape, [&](double u) {
            return esg_omega_sharp(u, g, rho, spec);
        }, problem.lni);
        return sharp >= 0.5;
    };

    double lo = 0.0;
    double hi = 20.0 * spec.sigma * std::max(1.0, std_normal_cdf_inv(problem.A));
    int iters = 0;
    while (predicate(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++iters > 24) throw SolverError("esg_np_certify: radius bracket diverged");
    }
    while (hi - lo > problem.tol) {
        double mid = 0.5 * (lo + hi);
        if (predicate(mid)) lo = mid; else hi = mid;
        ++iters;
    }
    result.radius = lo;
    result.certified = true;
    result.outer_iterations = iters;
    result.final_residual = residual;
    return result;
}

double esg_probability_from_radius(const DistributionSpec& spec, double rho,
                                   DualState* dual) {
    if (!(rho > 0.0)) return 0.5;
    double residual = 0.0;
    auto e_sharp = [&](double g) {
        return expectation_lni(spec.shape, [&](double u) {
            return esg_omega_sharp(u, g, rho, spec);
        });
    };
    double g = solve_monotone(e_sharp, 0.5, -40.0, 40.0, 1e-9, &residual);
    if (dual) {
        dual->log_neg_nu = g;
        dual->residual = residual;
    }
    return expectation_lni(spec.shape, [&](double u) {
        return esg_omega_natural(u, g, rho, spec);
    });
}

double esg_analytic_probability(int d, double sigma, double rho) {
    if (rho < 0.0) throw std::domain_error("esg_analytic_probability: rho must be >= 0");
    return beta_cdf_sym(0.5 * (d - 1.0), 0.5 + rho / (2.0 * sigma * std::sqrt(d)));
}

double esg_analytic_radius(int d, double sigma, double A) {
    if (A < 0.5 || A >= 1.0)
        throw std::domain_error("esg_analytic_radius: A must lie in [1/2, 1)");
    double alpha = 0.5 * (d - 1.0);
    double lo = 0.5, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (beta_cdf_sym(alpha, mid) < A) lo = mid; else hi = mid;
    }
    return (0.5 * (lo + hi) - 0.5) * 2.0 * sigma * std::sqrt(d);
}

double cohen_radius(double sigma, double A) {
    if (A < 0.5 || A >= 1.0) throw std::domain_error("cohen_radius: A must lie in [1/2, 1)");
    if (A == 0.5) return 0.0;
    return sigma * std_normal_cdf_inv(A);
}

CertificationResult egg_np_certify(const NpProblem& problem) {
    const DistributionSpec& spec = problem.spec;
    if (spec.T) throw std::invalid_argument("egg_np_certify: spec must be untruncated");
    if (problem.A >= 1.0) throw std::invalid_argument("egg_np_certify: A must be < 1");
    CertificationResult result;
    result.method = Method::np;
    if (problem.A <= 0.5) {
        result.certified = false;  // nothing to certify below the majority threshold
        return result;
    }

    double residual = 0.0;
    auto predicate = [&](double rho) {
        auto e_nat = [&](double g) {
            return expectation_adaptive(spec.shape, [&](double u) {
                return egg_omega(u, g, rho, spec, -1);
            });
        };
        double g = solve_monotone(e_nat, problem.A, -40.0, 40.0, 1e-9, &residual);
        double sharp = expectation_adaptive(spec.shape, [&](double u) {
            return egg_omega(u, g, rho, spec, +1);
        });
        return sharp >= 0.5;
    };

    double lo = 0.0;
    double hi = 20.0 * spec.sigma * std::max(1.0, std_normal_cdf_inv(problem.A));
    int iters = 0;
    while (predicate(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++iters > 24) throw SolverError("egg_np_certify: radius bracket diverged");
    }
    while (hi - lo > problem.tol) {
        double mid = 0.5 * (lo + hi);
        if (predicate(mid)) lo = mid; else hi = mid;
        ++iters;
    }
    result.radius = lo;
    result.certified = true;
    result.outer_iterations = iters;
    result.final_residual = residual;
    return result;
}

}  // namespace rscert
