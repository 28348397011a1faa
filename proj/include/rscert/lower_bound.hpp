#pragma once

// Concentration-property machinery: the sqrt(d) certification discriminant,
// the tight-constant search, and the Lambda-value tables behind it.

#include <ostream>

#include "rscert/distributions.hpp"

namespace rscert {

struct ConcentrationParams {
    double theta = 0.999;
    double beta = 0.99;
    double tau = 0.6;        // Psi threshold, in (1/2, 1)
    double mu_or_zeta = 0.02;
    double p = 0.5;          // concentration mass (corresponding-T variant)
    int d_tilde = 25000;     // reference dimension (corresponding-T variant)
};

// E_{u ~ Gamma((d-2k)/eta, 1)} Psi_{(d-1)/2}((T^2 - (t - rho)^2)/(4 rho t)),
// t = scale (2u)^{1/eta}: whether radius rho certifies under perfect
// concentration inside the T-ball. Strictly decreasing in rho.
double concentrated_lhs(int d, int k, double eta, double T, double rho,
                        double sigma = 1.0);

// One cell of the fixed-base-point table:
// Lambda_{(d-2k)/eta}(m) with
//   m = (sqrt(G((d-2k+2)/eta)/G((d-2k)/eta)) ((1-2tau) mu
//        + sqrt(beta + (4tau^2-4tau) mu^2)))^eta.
double lambda_table_fixbase(int d_minus_2k, double eta,
                            const ConcentrationParams& params = {});

// One cell of the corresponding-threshold table; the extra prefactor
//   d_tilde / (2 (prod_{i=1}^{2/eta} ((d_tilde+2)/eta - i))^{eta/2})
// is evaluated in log space, and (2 beta / eta)^{2/eta} replaces beta.
// Requires 2/eta to be a positive integer.
double lambda_table_thcorres(int d_minus_2k, double eta,
                             const ConcentrationParams& params = {});

// Largest mu in [0,1] (bisection width e) with theta * Lambda(m(mu)) > 1/2;
// 0 when even mu = e fails.
double tight_mu(int d_minus_2k, double eta, const ConcentrationParams& params,
                double e);

// The T with mass_within(ESG(d, sigma, eta), T) = p; for eta = 2 this is
// sigma sqrt(2 Lambda^{-1}_{d/2}(p)).
double concentration_T(int d, double sigma, double p, double eta);

// CSV emitters in the published layout: one row per eta (descending integers
// 10..2, then 1, 1/2, ..., 1/50 for the fixed-base table; reciprocals only
// for the corresponding-threshold table), columns d-2k = 1..30, cells rounded
// half-up to 3 decimals.
void emit_fixbase_table(std::ostream& out, const ConcentrationParams& params = {});
void emit_thcorres_table(std::ostream& out, const ConcentrationParams& params = {});

}  // namespace rscert
