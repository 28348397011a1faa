#pragma once

// Desk-scale end-to-end pipeline: synthetic radius-measurable classifiers,
// Monte-Carlo estimation with Clopper-Pearson bounds, conservative (A, B)
// construction, and the full sample -> certify loop.

#include <cstdint>
#include <random>
#include <string>

#include "rscert/dsrs_cert.hpp"

namespace rscert {

struct SyntheticClassifier {
    enum class Kind { concentrated, shell, always_correct, always_wrong };
    Kind kind = Kind::concentrated;
    double T_star = 1.0;    // concentrated / shell
    double p_inner = 1.0;   // shell: correctness probability at r <= T_star
    double p_outer = 0.0;   // shell: correctness probability at r > T_star
    std::uint64_t rng_seed = 0;  // keys the per-draw correctness coins
};

struct SamplingConfig {
    int N1 = 50000;
    int N2 = 50000;
    double alpha1 = 5e-4;
    double alpha2 = 5e-4;
    int N_np = 100000;
    double alpha_np = 1e-3;
};

struct SamplingReport {
    DistributionSpec p_spec;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    int successes_P = 0, N1 = 0;
    int successes_Q = 0, N2 = 0;
    int successes_np = 0, N_np = 0;
    double A1 = 0.0, B1 = 0.0, A_np = 0.0;
    double T = 0.0;
    ProbabilityPair pair;       // the conservative pair actually certified
    double np_radius = 0.0;
    double dsrs_radius = 0.0;
    std::string solver_error;   // empty on success; set when a certifier threw
};

// Exact binomial lower confidence bound: the beta quantile with parameters
// (successes, n - successes + 1); 0 at successes = 0, alpha^{1/n} at
// successes = n.
double clopper_pearson_lower(int successes, int n, double alpha);

// Monte-Carlo count of correct predictions over N noise draws. The decision
// is a function of the drawn radius and a per-draw coin; the coin stream is
// counter-based, keyed by (classifier seed, stream, draw index), so the P
// and Q passes stay independent yet reproducible.
std::pair<int, int> estimate_probability(const SyntheticClassifier& classifier,
                                         const DistributionSpec& spec, int N,
                                         std::mt19937_64& rng,
                                         std::uint64_t stream = 0);

// Clamp (A1, B1) to the feasible region without ever strengthening either
// coordinate: B is pulled down to the upper edge C*A1 when it overshoots;
// A is pulled down to (B1 + C - 1)/C when B1 sits below the lower edge.
ProbabilityPair conservative_pair(double A1, double B1, double C);

// sample P -> A1 -> T = heuristic_T(spec, kappa) -> sample Q -> B1 ->
// conservative pair -> dsrs_certify, plus an NP certification from a fresh
// N_np-draw estimate. Solver failures leave the report partially filled
// with the message recorded.
SamplingReport run_pipeline(const SyntheticClassifier& classifier,
                            const DistributionSpec& spec, double kappa,
                            const SamplingConfig& config, std::uint64_t seed);

// JSON with every field above; one-line CSV summary with a fixed header.
std::string report_to_json(const SamplingReport& report);
std::string report_csv_header();
std::string report_csv_row(const SamplingReport& report);

}  // namespace rscert
