#pragma once

// The ESG / EGG noise family: densities proportional to
//   r^{-2k} * exp(-r^eta / (2 scale^eta)),
// with the scale calibrated so that E||z||^2 = d sigma^2 for the
// untruncated law. ESG is the k = 0 member. A present truncation
// radius T selects the truncated variant (mass restricted to ||z|| <= T).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rscert {

enum class Family { esg, egg };

struct DistributionSpec {
    Family family = Family::esg;
    int d = 1;
    double sigma = 1.0;
    double eta = 2.0;
    int k = 0;
    std::optional<double> T;

    // derived on construction, used by every downstream integral
    double shape = 0.0;  // d/eta for ESG, (d-2k)/eta for EGG
    double scale = 0.0;  // sigma_s or sigma_g
};

// Validates invariants and fills the derived fields. Throws
// std::invalid_argument on violation.
DistributionSpec make_spec(Family family, int d, double sigma, double eta,
                           int k = 0, std::optional<double> T = std::nullopt);

// Same spec with the truncation radius set.
DistributionSpec with_truncation(const DistributionSpec& spec, double T);

// The calibrated scale parameter (sigma_s / sigma_g), via log-gamma
// differences so large d never overflows.
double formal_scale(const DistributionSpec& spec);

// Asymptotic stand-in (eta/2)^{1/eta} sigma d^{1/2 - 1/eta}; ESG only.
double formal_scale_approx(const DistributionSpec& spec);

// Log density at any point with ||x||_2 = r; -inf beyond T for the
// truncated variant.
double log_pdf(const DistributionSpec& spec, double r);

// Radius at which the density equals y (the radial profile is strictly
// decreasing). ESG inverts the exponential directly; EGG goes through
// the principal Lambert W branch.
double pdf_inv(const DistributionSpec& spec, double y);

// C = 1 / P{||z|| <= T} of the untruncated law; requires T.
double ratio_constant(const DistributionSpec& spec);

// P{||z||_2 <= radius} under the untruncated law.
double mass_within(const DistributionSpec& spec, double radius);

// One radius draw; truncated specs draw by inverse CDF restricted to
// [0, T] so tiny-mass truncations cannot stall.
double sample_radius(const DistributionSpec& spec, std::mt19937_64& rng);

// radius * uniformly random unit direction.
std::vector<double> sample_vector(const DistributionSpec& spec, std::mt19937_64& rng);

// Points of phi(r) * V_d(r), the radial mass density used for
// visualization; computed in log space and exponentiated.
std::vector<std::pair<double, double>> radial_density_curve(
    const DistributionSpec& spec, const std::vector<double>& r_grid);

// Flat key-value (JSON object) round trip; absent "T" means untruncated.
std::string spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const std::string& text);

}  // namespace rscert
