#include "rscert/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

// log of the radial normalization constant K, where
//   pdf(r) = K * r^{-2k} * exp(-r^eta / (2 scale^eta))
// for the untruncated law. Derived by integrating against the sphere
// surface measure; reduces to the ESG constant at k = 0.
double log_norm_constant(const DistributionSpec& s) {
    double dm2k = s.d - 2.0 * s.k;
    return std::log(s.eta / 2.0) -
           (dm2k / s.eta) * std::log(2.0 * std::pow(s.scale, s.eta)) -
           0.5 * s.d * std::log(M_PI) + log_gamma(0.5 * s.d) -
           log_gamma(dm2k / s.eta);
}

// u = r^eta / (2 scale^eta), the gamma-distributed radial variable.
double radial_u(const DistributionSpec& s, double r) {
    return 0.5 * std::pow(r / s.scale, s.eta);
}

double radius_from_u(const DistributionSpec& s, double u) {
    return s.scale * std::pow(2.0 * u, 1.0 / s.eta);
}

}  // namespace

DistributionSpec make_spec(Family family, int d, double sigma, double eta,
                           int k, std::optional<double> T) {
    if (d < 1) throw std::invalid_argument("spec: d must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("spec: sigma must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("spec: eta must be positive");
    if (k < 0) throw std::invalid_argument("spec: k must be nonnegative");
    if (family == Family::esg && k != 0)
        throw std::invalid_argument("spec: ESG requires k = 0");
    if (family == Family::egg && d - 2 * k < 1)
        throw std::invalid_argument("spec: EGG requires d - 2k >= 1");
    if (T && !(*T > 0.0)) throw std::invalid_argument("spec: T must be positive");

    DistributionSpec s;
    s.family = family;
    s.d = d;
    s.sigma = sigma;
    s.eta = eta;
    s.k = (family == Family::esg) ? 0 : k;
    s.T = T;
    double dm2k = d - 2.0 * s.k;
    s.shape = dm2k / eta;
    // scale chosen so E r^2 = d sigma^2:
    //   E r^2 = scale^2 2^{2/eta} Gamma((d-2k+2)/eta) / Gamma((d-2k)/eta)
    s.scale = std::pow(2.0, -1.0 / eta) *
              std::sqrt(d * std::exp(log_gamma(dm2k / eta) -
                                     log_gamma((dm2k + 2.0) / eta))) *
              sigma;
    return s;
}

DistributionSpec with_truncation(const DistributionSpec& spec, double T) {
    return make_spec(spec.family, spec.d, spec.sigma, spec.eta, spec.k, T);
}

double formal_scale(const DistributionSpec& spec) { return spec.scale; }

double formal_scale_approx(const DistributionSpec& spec) {
    if (spec.family != Family::esg)
        throw std::invalid_argument("formal_scale_approx: ESG only");
    return std::pow(spec.eta / 2.0, 1.0 / spec.eta) * spec.sigma *
           std::pow(static_cast<double>(spec.d), 0.5 - 1.0 / spec.eta);
}

double log_pdf(const DistributionSpec& spec, double r) {
    if (!(r > 0.0)) throw std::domain_error("log_pdf: r must be positive");
    if (spec.T && r > *spec.T) return -std::numeric_limits<double>::infinity();
    double lp = log_norm_constant(spec) - 2.0 * spec.k * std::log(r) -
                radial_u(spec, r);
    if (spec.T) lp += std::log(ratio_constant(spec));
    return lp;
}

double pdf_inv(const DistributionSpec& spec, double y) {
    if (!(y > 0.0)) throw std::domain_error("pdf_inv: y must be positive");
    double log_k = log_norm_constant(spec);
    if (spec.T) log_k += std::log(ratio_constant(spec));
    double log_y = std::log(y);
    if (spec.k == 0) {
        // exp(log_k - u) = y  =>  u = log_k - log y
        double u = log_k - log_y;
        if (u < 0.0) throw std::domain_error("pdf_inv: y above the density maximum");
        return radius_from_u(spec, u);
    }
    // log_k - 2k ln r - u = log y with 2k ln r = (2k/eta)(ln(2 scale^eta) + ln u);
    // substituting v = (eta/2k) u turns this into v + ln v = const, i.e. W0.
    double m = spec.eta / (2.0 * spec.k);
    double c = log_k - log_y -
               (2.0 * spec.k / spec.eta) * std::log(2.0 * std::pow(spec.scale, spec.eta));
    double v = lambert_w0_exp(m * c + std::log(m));
    return radius_from_u(spec, v / m);
}

double ratio_constant(const DistributionSpec& spec) {
    if (!spec.T) throw std::invalid_argument("ratio_constant: spec has no T");
    double mass = gamma_cdf(spec.shape, radial_u(spec, *spec.T));
    return 1.0 / mass;
}

double mass_within(const DistributionSpec& spec, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("mass_within: radius must be positive");
    return gamma_cdf(spec.shape, radial_u(spec, radius));
}

double sample_radius(const DistributionSpec& spec, std::mt19937_64& rng) {
    if (spec.T) {
        // inverse CDF restricted to u <= u_T; rejection would stall when the
        // truncation captures little mass
        double u_t = radial_u(spec, *spec.T);
        double mass = gamma_cdf(spec.shape, u_t);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double p = unif(rng) * mass;
        // clamp: quantile round-off near u_T must not escape the support
        return std::min(radius_from_u(spec, gamma_cdf_inv(spec.shape, p)), *spec.T);
    }
    std::gamma_distribution<double> gamma(spec.shape, 1.0);
    return radius_from_u(spec, gamma(rng));
}

std::vector<double> sample_vector(const DistributionSpec& spec, std::mt19937_64& rng) {
    double r = sample_radius(spec, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(spec.d);
    double norm2 = 0.0;
    for (double& x : v) {
        x = normal(rng);
        norm2 += x * x;
    }
    double f = r / std::sqrt(norm2);
    for (double& x : v) x *= f;
    return v;
}

std::vector<std::pair<double, double>> radial_density_curve(
    const DistributionSpec& spec, const std::vector<double>& r_grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        double lp = log_pdf(spec, r);
        double val = std::isfinite(lp)
                         ? std::exp(lp + log_hypersphere_surface(spec.d, r))
                         : 0.0;
        out.emplace_back(r, val);
    }
    return out;
}

std::string spec_to_json(const DistributionSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.family == Family::esg ? "esg" : "egg";
    j["d"] = spec.d;
    j["sigma"] = spec.sigma;
    j["eta"] = spec.eta;
    j["k"] = spec.k;
    if (spec.T) j["T"] = *spec.T;
    return j.dump();
}

DistributionSpec spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Family family = j.at("family").get<std::string>() == "egg" ? Family::egg : Family::esg;
    std::optional<double> T;
    if (j.contains("T")) T = j.at("T").get<double>();
    return make_spec(family, j.at("d").get<int>(), j.at("sigma").get<double>(),
                     j.at("eta").get<double>(), j.value("k", 0), T);
}

}  // namespace rscert
