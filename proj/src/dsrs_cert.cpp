#include "rscert/dsrs_cert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

double radial_t(const DistributionSpec& spec, double u) {
    return spec.scale * std::pow(2.0 * u, 1.0 / spec.eta);
}

double psi(const DistributionSpec& spec, double arg) {
    return beta_cdf_sym(0.5 * (spec.d - 1.0), arg);
}

// squared level-set boundary radius xi^2 on the sharp side, before the
// min{T^2, .} truncation cut
double sharp_xi2(const DistributionSpec& spec, double u, double g, bool* below_branch) {
    *below_branch = false;
    if (spec.k == 0) {
        double su = u + g;
        if (su < 0.0) {
            *below_branch = true;
            return 0.0;
        }
        return spec.scale * spec.scale * std::pow(2.0 * su, 2.0 / spec.eta);
    }
    double m = spec.eta / (2.0 * spec.k);
    double v = lambert_w0_exp(std::log(m * u) + m * (u + g));
    if (v <= 0.0) return 0.0;
    return spec.scale * spec.scale * std::pow(2.0 * v / m, 2.0 / spec.eta);
}

double omega1(const DistributionSpec& spec, double u, double g, double rho) {
    return spec.k == 0 ? esg_omega_natural(u, g, rho, spec)
                       : egg_omega(u, g, rho, spec, -1);
}

double omega2(const DistributionSpec& spec, double u, double g_combined,
              double rho, double T) {
    if (u <= 0.0) return 0.0;
    bool below = false;
    double xi2 = sharp_xi2(spec, u, g_combined, &below);
    if (spec.k == 0 && below) return 0.0;
    double t = radial_t(spec, u);
    double num = std::min(T * T, xi2) - (t - rho) * (t - rho);
    return psi(spec, num / (4.0 * rho * t));
}

double omega3(const DistributionSpec& spec, double u, double g_nu1, double rho,
              double T) {
    if (u <= 0.0) return 0.0;
    bool below = false;
    double xi2 = sharp_xi2(spec, u, g_nu1, &below);
    if (spec.k == 0 && below) return 0.0;
    double t = radial_t(spec, u);
    double denom = 4.0 * rho * t;
    double a = psi(spec, (xi2 - (t - rho) * (t - rho)) / denom);
    double b = psi(spec, (T * T - (t - rho) * (t - rho)) / denom);
    return std::max(a - b, 0.0);
}

// E[f(u) 1_{a < u <= b}] via the adaptive integrator; the cut points and
// every kink of f (omega branch boundaries, the min{T^2, xi^2} switch) are
// passed as breakpoints. The fixed-grid LNI is reserved for the NP path:
// the DSRS integrands are far steeper in u, and a uniform grid over the
// Chebyshev window misses their transition layers at moderate d.
double expect_clipped(const DistributionSpec& spec, double a, double b,
                      const std::function<double(double)>& f,
                      std::vector<double> kinks = {}) {
    std::vector<double> breaks;
    if (a > 0.0) breaks.push_back(a);
    if (std::isfinite(b)) breaks.push_back(b);
    for (double cut : kinks)
        if (cut > a && cut < b) breaks.push_back(cut);
    return expectation_adaptive(
        spec.shape,
        [&](double u) { return (u > a && u <= b) ? f(u) : 0.0; }, 1e-9, breaks);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BracketSolve {
    double g = 0.0;
    double residual = 0.0;
    bool at_edge = false;
};

// Monotone-increasing map; bisection with geometric bracket growth from
// [-60, 60]. If the target stays out of reach after growth, the result is
// pinned to the bracket edge (the B -> 1 limit lives there).
template <typename F>
BracketSolve solve_monotone_edge(const F& expect, double target, double prob_tol) {
    double lo = -60.0, hi = 60.0;
    double f_lo = expect(lo), f_hi = expect(hi);
    if (f_lo > f_hi + prob_tol)
        throw SolverError("dual map is not monotone increasing");
    for (int grow = 0; f_lo > target && grow < 14; ++grow) {
        lo *= 2.0;
        f_lo = expect(lo);
    }
    for (int grow = 0; f_hi < target && grow < 14; ++grow) {
        hi *= 2.0;
        f_hi = expect(hi);
    }
    BracketSolve out;
    if (f_hi < target - prob_tol) {
        out.g = hi;
        out.residual = target - f_hi;
        out.at_edge = true;
        return out;
    }
    if (f_lo > target + prob_tol) {
        out.g = lo;
        out.residual = f_lo - target;
        out.at_edge = true;
        return out;
    }
    double mid = 0.5 * (lo + hi), f_mid = f_lo;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        f_mid = expect(mid);
        if (f_mid < target) lo = mid; else hi = mid;
        if ((std::fabs(f_mid - target) < prob_tol &&
             hi - lo < 1e-9 * std::max(1.0, std::fabs(mid))) ||
            hi - lo < 1e-13 * std::max(1.0, std::fabs(mid)))
            break;
    }
    out.g = mid;
    out.residual = std::fabs(f_mid - target);
    return out;
}

// u at which the sharp-side xi^2 crosses T^2, i.e. where min{T^2, xi^2}
// switches; the omega_3 clamp activates at the same point.
double sharp_switch_u(const DistributionSpec& spec, double g, double ut) {
    if (spec.k == 0) return ut - g;
    double m = spec.eta / (2.0 * spec.k);
    return lambert_w0_exp(std::log(m * ut) + m * (ut - g)) / m;
}

// kinks of omega_2 / omega_3 on (0, inf): the branch boundary u = -g (ESG
// only) and the min switch
std::vector<double> sharp_kinks(const DistributionSpec& spec, double g, double ut) {
    std::vector<double> kinks;
    if (spec.k == 0 && -g > 0.0) kinks.push_back(-g);
    double sw = sharp_switch_u(spec, g, ut);
    if (sw > 0.0 && std::isfinite(sw)) kinks.push_back(sw);
    return kinks;
}

// kink of omega_1 (natural branch boundary u = g, ESG only)
std::vector<double> natural_kinks(const DistributionSpec& spec, double g) {
    if (spec.k == 0 && g > 0.0) return {g};
    return {};
}

double truncation_cut(const DsrsProblem& problem) {
    const DistributionSpec& q = problem.q_spec;
    return 0.5 * std::pow(*q.T / q.scale, q.eta);
}

void validate(const DsrsProblem& problem) {
    if (problem.p_spec.T)
        throw std::invalid_argument("dsrs: p_spec must be untruncated");
    if (!problem.q_spec.T)
        throw std::invalid_argument("dsrs: q_spec must carry T");
    if (problem.p_spec.family != problem.q_spec.family ||
        problem.p_spec.d != problem.q_spec.d ||
        problem.p_spec.sigma != problem.q_spec.sigma ||
        problem.p_spec.eta != problem.q_spec.eta ||
        problem.p_spec.k != problem.q_spec.k)
        throw std::invalid_argument("dsrs: q_spec must differ from p_spec only by T");
}

}  // namespace

FeasibilityResult feasibility_check(double A, double B, double C) {
    FeasibilityResult res;
    std::ostringstream msg;
    if (B < 0.0 || B > 1.0) {
        msg << "B = " << B << " outside [0, 1]";
    } else if (A < B / C) {
        msg << "A = " << A << " violates A >= B/C = " << B / C;
    } else if (A > 1.0 - (1.0 - B) / C) {
        msg << "A = " << A << " violates A <= 1 - (1-B)/C = " << 1.0 - (1.0 - B) / C;
    } else {
        res.ok = true;
        return res;
    }
    res.violation = msg.str();
    return res;
}

double heuristic_T(const DistributionSpec& spec, double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error("heuristic_T: kappa must lie in (0,1)");
    return spec.scale * std::pow(2.0 * gamma_cdf_inv(spec.shape, kappa), 1.0 / spec.eta);
}

ThreeMasses dsrs_three_masses(const DsrsProblem& problem, double rho,
                              const DualSolution& dual) {
    validate(problem);
    const DistributionSpec& spec = problem.p_spec;
    double T = *problem.q_spec.T;
    double ut = truncation_cut(problem);
    double C = ratio_constant(problem.q_spec);
    double gc = dual.log_neg_combined;
    double g1 = dual.log_neg_nu1;

    ThreeMasses m;
    double inner = expect_clipped(
        spec, 0.0, ut, [&](double u) { return omega1(spec, u, gc, rho); },
        natural_kinks(spec, gc));
    m.p_Q = std::min(1.0, C * inner);
    double outer =
        dual.nu1_nonneg
            ? 0.0
            : expect_clipped(
                  spec, ut, kInf,
                  [&](double u) { return omega1(spec, u, g1, rho); },
                  natural_kinks(spec, g1));
    m.p_P = inner + outer;
    m.p_Pdelta = expect_clipped(
        spec, 0.0, kInf, [&](double u) { return omega2(spec, u, gc, rho, T); },
        sharp_kinks(spec, gc, ut));
    if (!dual.nu1_nonneg) {
        m.p_Pdelta += expect_clipped(
            spec, 0.0, kInf,
            [&](double u) { return omega3(spec, u, g1, rho, T); },
            sharp_kinks(spec, g1, ut));
    }
    return m;
}

DualSolution solve_duals(const DsrsProblem& problem, double rho) {
    validate(problem);
    const DistributionSpec& spec = problem.p_spec;
    double C = ratio_constant(problem.q_spec);
    FeasibilityResult feas = feasibility_check(problem.pair.A, problem.pair.B, C);
    if (!feas.ok) throw FeasibilityError("infeasible pair: " + feas.violation);

    double ut = truncation_cut(problem);
    DualSolution dual;

    // B constraint: P_Q(W) = C E[omega1(u, combined) 1_{u <= ut}] depends on
    // the combined multiplier only.
    auto e_b = [&](double g) {
        return C * expect_clipped(
                       spec, 0.0, ut,
                       [&](double u) { return omega1(spec, u, g, rho); },
                       natural_kinks(spec, g));
    };
    BracketSolve b = solve_monotone_edge(e_b, problem.pair.B, 1e-8);
    dual.log_neg_combined = b.g;
    dual.combined_at_edge = b.at_edge;
    dual.residual_B = b.residual;

    // A constraint: the remaining mass A - B/C must come from u > ut through
    // nu1; the target 0 boundary is the nu1 >= 0 regime.
    double target = problem.pair.A - problem.pair.B / C;
    if (target <= 1e-12) {
        dual.nu1_nonneg = true;
        dual.log_neg_nu1 = -kInf;
        dual.residual_A = std::max(0.0, -target);
        return dual;
    }
    auto e_a = [&](double g) {
        return expect_clipped(
            spec, ut, kInf, [&](double u) { return omega1(spec, u, g, rho); },
            natural_kinks(spec, g));
    };
    BracketSolve a = solve_monotone_edge(e_a, target, 1e-8);
    dual.log_neg_nu1 = a.g;
    dual.residual_A = a.residual;
    if (a.at_edge && a.residual > 1e-6)
        throw SolverError("solve_duals: A constraint unreachable within bracket");
    return dual;
}

CertificationResult dsrs_certify(const DsrsProblem& problem) {
    validate(problem);
    const DistributionSpec& spec = problem.p_spec;
    double T = *problem.q_spec.T;
    double C = ratio_constant(problem.q_spec);
    FeasibilityResult feas = feasibility_check(problem.pair.A, problem.pair.B, C);
    if (!feas.ok) throw FeasibilityError("infeasible pair: " + feas.violation);

    CertificationResult result;
    result.method = Method::dsrs;
    double residual = 0.0;

    auto predicate = [&](double rho) {
        DualSolution dual = solve_duals(problem, rho);
        residual = std::max(dual.residual_A, dual.combined_at_edge ? 0.0 : dual.residual_B);
        double ut = truncation_cut(problem);
        double mass = expect_clipped(
            spec, 0.0, kInf,
            [&](double u) {
                return omega2(spec, u, dual.log_neg_combined, rho, T);
            },
            sharp_kinks(spec, dual.log_neg_combined, ut));
        if (!dual.nu1_nonneg) {
            mass += expect_clipped(
                spec, 0.0, kInf,
                [&](double u) {
                    return omega3(spec, u, dual.log_neg_nu1, rho, T);
                },
                sharp_kinks(spec, dual.log_neg_nu1, ut));
        }
        return mass > 0.5;
    };

    double lo = 0.0, hi = 1.0;
    int iters = 0;
    while (predicate(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++iters > 30) throw SolverError("dsrs_certify: radius bracket diverged");
    }
    while (hi - lo > problem.tol) {
        double mid = 0.5 * (lo + hi);
        if (predicate(mid)) lo = mid; else hi = mid;
        ++iters;
    }
    result.radius = lo;
    result.certified = lo > 0.0;
    result.outer_iterations = iters;
    result.final_residual = residual;
    return result;
}

CertificationResult dsrs_certify_b1(const DistributionSpec& p_spec,
                                    const DistributionSpec& q_spec,
                                    double tol) {
    if (!q_spec.T) throw std::invalid_argument("dsrs_certify_b1: q_spec must carry T");
    double T = *q_spec.T;
    const DistributionSpec& spec = p_spec;

    // Single smooth integral (no dual search, no indicator cut), so the
    // adaptive integrator serves both families here; this keeps the result
    // interchangeable with the concentration discriminant.
    auto predicate = [&](double rho) {
        std::vector<double> breaks;
        for (double t : {rho - T, rho + T, T - rho})
            if (t > 0.0) breaks.push_back(0.5 * std::pow(t / spec.scale, spec.eta));
        double mass = expectation_adaptive(
            spec.shape,
            [&](double u) {
                double t = radial_t(spec, u);
                if (t <= 0.0) return 1.0;
                return psi(spec, (T * T - (t - rho) * (t - rho)) / (4.0 * rho * t));
            },
            1e-10, breaks);
        return mass >= 0.5;
    };

    CertificationResult result;
    result.method = Method::dsrs;
    double lo = 0.0, hi = std::max(tol, T);
    int iters = 0;
    while (predicate(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++iters > 30) throw SolverError("dsrs_certify_b1: radius bracket diverged");
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (predicate(mid)) lo = mid; else hi = mid;
        ++iters;
    }
    result.radius = lo;
    result.certified = lo > 0.0;
    result.outer_iterations = iters;
    return result;
}

}  // namespace rscert
