#pragma once

// Scalar special functions used throughout the certification engine.
// Everything that can overflow at d ~ 1e5 is exposed in log space.
// All functions are stateless and safe to call concurrently.

namespace rscert {

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Regularized lower incomplete gamma Lambda_shape(x) = P(shape, x).
// Power series below shape+1, continued fraction above.
double gamma_cdf(double shape, double x);

// Inverse of gamma_cdf in x for fixed shape; p in [0, 1).
double gamma_cdf_inv(double shape, double p);

// CDF of Beta(alpha, alpha) at x, written Psi_alpha in the formulas.
// Arguments outside [0,1] are deliberately accepted and clamped to the
// boundary value: the omega integrands produce such arguments by design.
// Accurate for alpha up to ~1e5.
double beta_cdf_sym(double alpha, double x);

// General regularized incomplete beta I_x(a, b); needed by the
// Clopper-Pearson bound and used as an internal building block.
double beta_cdf(double a, double b, double x);

// Standard normal CDF and its inverse.
double std_normal_cdf(double x);
double std_normal_cdf_inv(double p);

// Principal branch W0 of the Lambert W function, x >= -1/e.
double lambert_w0(double x);

// W0(exp(L)) without forming exp(L); the EGG omega functions feed
// exponents of order +-1e2 * eta here, so the direct form would overflow.
double lambert_w0_exp(double log_x);

// ln of V_d(r) = d pi^{d/2} / Gamma(d/2 + 1) * r^{d-1}, the boundary
// measure of the radius-r sphere in R^d.
double log_hypersphere_surface(int d, double r);

}  // namespace rscert
