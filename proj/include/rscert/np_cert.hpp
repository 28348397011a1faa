#pragma once

// Single-distribution (Neyman-Pearson) certification for ESG and EGG,
// the analytic ESG probability <-> radius formulas, and the Gaussian
// (Cohen) baseline the ESG radii converge to.

#include "rscert/distributions.hpp"
#include "rscert/integrator.hpp"

namespace rscert {

struct NpProblem {
    DistributionSpec spec;  // untruncated
    double A = 0.0;         // lower confidence bound of the correct-class mass
    double tol = 1e-6;      // radius bisection tolerance
    LniConfig lni;          // ESG integrator grid (EGG ignores it)
};

struct DualState {
    double log_neg_nu = 0.0;  // ln(-nu); nu is negative in the certification regime
    double residual = 0.0;    // |E[omega_natural] - A| at the solution
};

enum class Method { np, dsrs, analytic };

struct CertificationResult {
    Method method = Method::np;
    double radius = 0.0;
    bool certified = false;
    int outer_iterations = 0;
    double final_residual = 0.0;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The conditional level-set probabilities of Theorem-5.1 type at fixed
// radial coordinate u (so ||z|| = scale (2u)^{1/eta}), shift rho and
// multiplier nu given as ln(-nu). Branch cases included; Psi arguments
// outside [0,1] rely on beta_cdf_sym's clamping.
double esg_omega_sharp(double u, double log_neg_nu, double rho,
                       const DistributionSpec& spec);
double esg_omega_natural(double u, double log_neg_nu, double rho,
                         const DistributionSpec& spec);

// Largest rho (to problem.tol) such that the inner bisection on ln(-nu)
// solves E[omega_natural] = A and the sharp mass stays >= 1/2. Radius 0
// when A <= 1/2.
CertificationResult esg_np_certify(const NpProblem& problem);

// Inverse direction: the A for which esg_np_certify returns rho; solves
// E[omega_sharp] = 1/2 for nu first. Also reports the solved ln(-nu).
double esg_probability_from_radius(const DistributionSpec& spec, double rho,
                                   DualState* dual = nullptr);

// Closed-form desk approximations, Psi_{(d-1)/2}(1/2 + rho/(2 sigma sqrt(d))).
double esg_analytic_probability(int d, double sigma, double rho);
double esg_analytic_radius(int d, double sigma, double A);

// sigma * Phi^{-1}(A).
double cohen_radius(double sigma, double A);

// EGG counterpart; the omega functions go through the Lambert W branch of
// the inverse density instead of a logarithm.
CertificationResult egg_np_certify(const NpProblem& problem);

// EGG omegas, exposed for tests and for the DSRS module; nu passed as
// ln(-nu), sign_sharp=+1 selects the sharp (shifted-mass) form.
double egg_omega(double u, double log_neg_nu, double rho,
                 const DistributionSpec& spec, int sign_sharp);

}  // namespace rscert
