#pragma once

// Expectations E_{u ~ Gamma(shape, 1)}[f(u)] for shapes from well below 1
// (small EGG gamma shapes) up to ~1e5 (ESG at image dimensions).

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rscert {

struct LniConfig {
    int segments = 256;
    double iota = 1e-4;  // gamma mass allowed outside the integration window
};

// Linear Numerical Integration: trapezoid sum of f(u) * gamma_pdf(u) over
// the Chebyshev concentration window
//   [max(0, (1 - eps) shape), (1 + eps) shape],  eps = sqrt(1 / (iota * shape)),
// with a uniform grid and the gamma pdf evaluated in log space. At most
// iota of the gamma mass lies outside the window and is deliberately
// dropped (never extrapolated).
double expectation_lni(double shape, const std::function<double(double)>& f,
                       const LniConfig& cfg = {});

// Same trapezoid rule restricted to the window intersected with [a, b];
// certification integrands carry indicator factors whose jump would wreck
// a grid that straddles the cut, so the cut becomes an interval end here.
double expectation_lni_clipped(double shape, double a, double b,
                               const std::function<double(double)>& f,
                               const LniConfig& cfg = {});

// Adaptive Gauss-Kronrod quadrature of f(u) * gamma_pdf(u) over (0, inf)
// to absolute tolerance tol. Breakpoints mark kinks or jumps of f (omega
// branch boundaries, truncation cuts); each becomes a panel boundary so
// the error estimate stays honest. Throws IntegrationError if the
// subdivision budget is exhausted before reaching tol.
double expectation_adaptive(double shape, const std::function<double(double)>& f,
                            double tol = 1e-9,
                            std::vector<double> breakpoints = {});

struct IntegrationError : std::runtime_error {
    double achieved_residual;
    IntegrationError(const std::string& msg, double residual)
        : std::runtime_error(msg), achieved_residual(residual) {}
};

}  // namespace rscert
