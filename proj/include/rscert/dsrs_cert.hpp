#pragma once

// Double-sampling certification: the two-multiplier dual of the DSRS
// problem, solved inside a radius bisection. The smoothing law P is
// untruncated ESG/EGG; the supplementary law Q is the same density
// truncated at T.

#include <string>

#include "rscert/np_cert.hpp"

namespace rscert {

struct ProbabilityPair {
    double A = 0.0;
    double B = 0.0;
    enum class Provenance { exact, clopper_pearson };
    Provenance provenance = Provenance::exact;
};

struct DsrsProblem {
    DistributionSpec p_spec;  // untruncated
    DistributionSpec q_spec;  // same family/sigma/eta/k, with T
    ProbabilityPair pair;
    double tol = 1e-6;
};

// nu1 and the combination nu1 + C nu2 are the only quantities the omega
// functions consume; both are stored as ln(-x). nu1 >= 0 (which shuts off
// the omega_1/omega_3 contributions) is carried by the flag. A combined
// multiplier driven to the bracket edge encodes the B -> 1 limit.
struct DualSolution {
    double log_neg_nu1 = 0.0;
    bool nu1_nonneg = false;
    double log_neg_combined = 0.0;
    bool combined_at_edge = false;
    double residual_A = 0.0;
    double residual_B = 0.0;
};

struct FeasibilityResult {
    bool ok = false;
    std::string violation;  // empty when ok
};

struct FeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The inherent constraint B/C <= A <= 1 - (1-B)/C, 0 <= B <= 1.
FeasibilityResult feasibility_check(double A, double B, double C);

// T with mass_within(spec, T) = kappa.
double heuristic_T(const DistributionSpec& spec, double kappa);

struct ThreeMasses {
    double p_P = 0.0;       // P_{z~P}{z in W}
    double p_Q = 0.0;       // P_{z~Q}{z in W}
    double p_Pdelta = 0.0;  // P_{z~P+delta}{z in W}
};

// All three masses of the dual level set W at shift rho under the given
// multipliers, with every omega branch case (including the nu1 >= 0 split
// and the clamp inside omega_3).
ThreeMasses dsrs_three_masses(const DsrsProblem& problem, double rho,
                              const DualSolution& dual);

// Nested bisection: the combined multiplier alone determines P_Q, so the
// outer loop drives the B constraint; the inner loop then drives the A
// constraint through nu1.
DualSolution solve_duals(const DsrsProblem& problem, double rho);

// Largest rho (to tol) whose solved duals keep P_{P+delta}(W) > 1/2.
CertificationResult dsrs_certify(const DsrsProblem& problem);

// The B = 1 limit: the combined multiplier runs to -infinity and the
// predicate collapses to E[Psi((T^2 - (t-rho)^2)/(4 rho t))] >= 1/2; no
// dual search at all.
CertificationResult dsrs_certify_b1(const DistributionSpec& p_spec,
                                    const DistributionSpec& q_spec,
                                    double tol = 1e-6);

}  // namespace rscert
