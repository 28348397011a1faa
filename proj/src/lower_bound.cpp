#include "rscert/lower_bound.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <vector>

#include "rscert/integrator.hpp"
#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

// (sqrt(G(s + 2/eta)/G(s)) ((1-2tau) c + sqrt(base + (4tau^2-4tau) c^2)))^eta
// with s = (d-2k)/eta; the shared core of both table formulas.
double m_core(double shape, double eta, double tau, double c, double base) {
    double log_ratio = log_gamma(shape + 2.0 / eta) - log_gamma(shape);
    double inner = (1.0 - 2.0 * tau) * c +
                   std::sqrt(base + (4.0 * tau * tau - 4.0 * tau) * c * c);
    if (inner <= 0.0) return 0.0;
    return std::exp(eta * (0.5 * log_ratio + std::log(inner)));
}

double round3(double x) { return std::llround(x * 1000.0) / 1000.0; }

struct EtaLabel {
    double value;
    std::string label;
};

std::vector<EtaLabel> fixbase_etas() {
    std::vector<EtaLabel> out;
    for (int n = 10; n >= 2; --n) out.push_back({double(n), std::to_string(n)});
    for (int n = 1; n <= 50; ++n)
        out.push_back({1.0 / n, n == 1 ? "1" : "1/" + std::to_string(n)});
    return out;
}

std::vector<EtaLabel> thcorres_etas() {
    std::vector<EtaLabel> out;
    for (int n = 1; n <= 50; ++n)
        out.push_back({1.0 / n, n == 1 ? "1" : "1/" + std::to_string(n)});
    return out;
}

void emit_table(std::ostream& out, const std::vector<EtaLabel>& etas,
                const std::function<double(int, double)>& cell) {
    out << "schema=lambda-table-v1\neta";
    for (int dk = 1; dk <= 30; ++dk) out << ",dm2k_" << dk;
    out << "\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& e : etas) {
        out << e.label;
        for (int dk = 1; dk <= 30; ++dk) out << "," << round3(cell(dk, e.value));
        out << "\n";
    }
    out.unsetf(std::ios_base::floatfield);
}

}  // namespace

double concentrated_lhs(int d, int k, double eta, double T, double rho,
                        double sigma) {
    if (d - 2 * k < 1) throw std::invalid_argument("concentrated_lhs: d - 2k < 1");
    DistributionSpec spec = make_spec(k > 0 ? Family::egg : Family::esg, d,
                                      sigma, eta, k);
    double alpha = 0.5 * (d - 1.0);
    auto u_of_t = [&](double t) { return 0.5 * std::pow(t / spec.scale, eta); };
    std::vector<double> breaks;
    // Psi-argument kinks: arg = 0 at t = rho +- T, arg = 1 at t = T - rho.
    for (double t : {rho - T, rho + T, T - rho})
        if (t > 0.0) breaks.push_back(u_of_t(t));
    return expectation_adaptive(
        spec.shape,
        [&](double u) {
            double t = spec.scale * std::pow(2.0 * u, 1.0 / eta);
            if (t <= 0.0) return 1.0;
            double arg = (T * T - (t - rho) * (t - rho)) / (4.0 * rho * t);
            return beta_cdf_sym(alpha, arg);
        },
        1e-10, breaks);
}

double lambda_table_fixbase(int d_minus_2k, double eta,
                            const ConcentrationParams& params) {
    double shape = d_minus_2k / eta;
    double m = m_core(shape, eta, params.tau, params.mu_or_zeta, params.beta);
    return gamma_cdf(shape, m);
}

double lambda_table_thcorres(int d_minus_2k, double eta,
                             const ConcentrationParams& params) {
    double n = 2.0 / eta;
    int ni = int(std::llround(n));
    if (ni < 1 || std::fabs(n - ni) > 1e-9)
        throw std::domain_error("lambda_table_thcorres: 2/eta must be a positive integer");
    double shape = d_minus_2k / eta;
    double base = std::pow(2.0 * params.beta / eta, 2.0 / eta);
    double m = m_core(shape, eta, params.tau, params.mu_or_zeta, base);
    double log_prod = 0.0;
    for (int i = 1; i <= ni; ++i)
        log_prod += std::log((params.d_tilde + 2.0) / eta - i);
    double log_pref = std::log(double(params.d_tilde)) - std::log(2.0) -
                      0.5 * eta * log_prod;
    return gamma_cdf(shape, std::exp(log_pref) * m);
}

double tight_mu(int d_minus_2k, double eta, const ConcentrationParams& params,
                double e) {
    if (!(e > 0.0)) throw std::domain_error("tight_mu: e must be positive");
    ConcentrationParams local = params;
    auto ok = [&](double mu) {
        local.mu_or_zeta = mu;
        return params.theta * lambda_table_fixbase(d_minus_2k, eta, local) > 0.5;
    };
    if (!ok(e)) return 0.0;
    if (ok(1.0)) return 1.0;
    double lo = e, hi = 1.0;
    while (hi - lo > e) {
        double mid = 0.5 * (lo + hi);
        if (ok(mid)) lo = mid; else hi = mid;
    }
    return lo;
}

double concentration_T(int d, double sigma, double p, double eta) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("concentration_T: p must lie in (0,1)");
    DistributionSpec spec = make_spec(Family::esg, d, sigma, eta);
    return spec.scale * std::pow(2.0 * gamma_cdf_inv(spec.shape, p), 1.0 / eta);
}

void emit_fixbase_table(std::ostream& out, const ConcentrationParams& params) {
    emit_table(out, fixbase_etas(), [&](int dk, double eta) {
        return lambda_table_fixbase(dk, eta, params);
    });
}

void emit_thcorres_table(std::ostream& out, const ConcentrationParams& params) {
    emit_table(out, thcorres_etas(), [&](int dk, double eta) {
        return lambda_table_thcorres(dk, eta, params);
    });
}

}  // namespace rscert
