#include "rscert/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

struct GammaWeight {
    double shape;
    double log_gamma_shape;
    double operator()(double u) const {
        if (u <= 0.0) return 0.0;
        return std::exp((shape - 1.0) * std::log(u) - u - log_gamma_shape);
    }
};

// Kahan-compensated accumulator; LNI results must not depend on any
// parallel evaluation order, so accumulation is strictly left to right.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// 15-point Gauss-Kronrod pair (7-point Gauss embedded).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GkResult {
    double value;
    double error;
};

template <typename F>
GkResult gk15(const F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double res_k = kWgk[7] * fc;
    double res_g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double x = h * kXgk[i];
        double fsum = f(c - x) + f(c + x);
        res_k += kWgk[i] * fsum;
        if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
    }
    res_k *= h;
    res_g *= h;
    // QUADPACK-style sharpened estimate of the Kronrod error
    double diff = std::fabs(res_k - res_g);
    double err = diff;
    if (diff > 0.0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
    return {res_k, err};
}

template <typename F>
double adaptive_panel(const F& f, double a, double b, double tol, int* budget,
                      double* achieved) {
    GkResult r = gk15(f, a, b);
    if (r.error <= tol || *budget <= 0 || (b - a) < 1e-14 * std::max(1.0, std::fabs(b))) {
        *achieved += r.error;
        return r.value;
    }
    --(*budget);
    double m = 0.5 * (a + b);
    return adaptive_panel(f, a, m, 0.5 * tol, budget, achieved) +
           adaptive_panel(f, m, b, 0.5 * tol, budget, achieved);
}

}  // namespace

double expectation_lni_clipped(double shape, double a, double b,
                               const std::function<double(double)>& f,
                               const LniConfig& cfg) {
    if (!(shape > 0.0)) throw std::domain_error("expectation_lni: shape must be positive");
    if (cfg.segments < 2 || !(cfg.iota > 0.0 && cfg.iota < 1.0))
        throw std::invalid_argument("expectation_lni: bad config");
    double eps = std::sqrt(1.0 / (cfg.iota * shape));
    double lo = std::max({0.0, (1.0 - eps) * shape, a});
    double hi = std::min((1.0 + eps) * shape, b);
    if (!(hi > lo)) return 0.0;
    GammaWeight w{shape, log_gamma(shape)};
    double h = (hi - lo) / cfg.segments;
    Kahan acc;
    for (int i = 0; i <= cfg.segments; ++i) {
        double u = lo + i * h;
        double trap = (i == 0 || i == cfg.segments) ? 0.5 : 1.0;
        acc.add(trap * h * f(u) * w(u));
    }
    return acc.sum;
}

double expectation_lni(double shape, const std::function<double(double)>& f,
                       const LniConfig& cfg) {
    return expectation_lni_clipped(shape, 0.0,
                                   std::numeric_limits<double>::infinity(), f, cfg);
}

double expectation_adaptive(double shape, const std::function<double(double)>& f,
                            double tol, std::vector<double> breakpoints) {
    if (!(shape > 0.0)) throw std::domain_error("expectation_adaptive: shape must be positive");
    // beyond this point the gamma tail holds less mass than the tolerance
    double upper = gamma_cdf_inv(shape, 1.0 - 1e-15) + 1.0;
    breakpoints.push_back(upper);
    // keep the peak region from being swallowed by one huge panel
    if (shape > 4.0) {
        breakpoints.push_back(shape - 2.0 * std::sqrt(shape));
        breakpoints.push_back(shape + 2.0 * std::sqrt(shape));
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> edges{0.0};
    for (double bp : breakpoints)
        if (bp > edges.back() + 1e-14 && bp <= upper) edges.push_back(bp);
    if (edges.back() < upper) edges.push_back(upper);

    GammaWeight w{shape, log_gamma(shape)};
    int budget = 20000;
    double achieved = 0.0;
    double total = 0.0;
    double panel_tol = tol / static_cast<double>(edges.size());
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        if (i == 0 && shape < 1.0) {
            // u^{shape-1} is singular at 0; substitute t = u^shape, under
            // which the weight becomes bounded:
            //   f(u) w(u) du = f(t^{1/s}) exp(-t^{1/s}) / Gamma(s+1) dt
            double lg1 = log_gamma(shape + 1.0);
            auto g = [&](double t) {
                double u = std::pow(t, 1.0 / shape);
                return f(u) * std::exp(-u - lg1);
            };
            total += adaptive_panel(g, 0.0, std::pow(b, shape), panel_tol,
                                    &budget, &achieved);
        } else {
            auto g = [&](double u) { return f(u) * w(u); };
            total += adaptive_panel(g, a, b, panel_tol, &budget, &achieved);
        }
    }
    if (budget <= 0 && achieved > 100.0 * tol)
        throw IntegrationError("expectation_adaptive: subdivision budget exhausted",
                               achieved);
    return total;
}

}  // namespace rscert
