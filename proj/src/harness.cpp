#include "rscert/harness.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rscert/special_functions.hpp"

namespace rscert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// counter-based coin in [0,1): hash of (seed, stream, index)
double coin(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(splitmix64(seed ^ (stream * 0xd1342543de82ef95ULL)) + index);
    return double(h >> 11) * 0x1.0p-53;
}

bool classify(const SyntheticClassifier& c, double radius, std::uint64_t stream,
              std::uint64_t index) {
    switch (c.kind) {
        case SyntheticClassifier::Kind::always_correct: return true;
        case SyntheticClassifier::Kind::always_wrong: return false;
        case SyntheticClassifier::Kind::concentrated: return radius <= c.T_star;
        case SyntheticClassifier::Kind::shell: {
            double p = radius <= c.T_star ? c.p_inner : c.p_outer;
            if (p >= 1.0) return true;
            if (p <= 0.0) return false;
            return coin(c.rng_seed, stream, index) < p;
        }
    }
    return false;
}

}  // namespace

double clopper_pearson_lower(int successes, int n, double alpha) {
    if (n < 1 || successes < 0 || successes > n)
        throw std::invalid_argument("clopper_pearson_lower: bad counts");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("clopper_pearson_lower: alpha outside (0,1)");
    if (successes == 0) return 0.0;
    if (successes == n) return std::pow(alpha, 1.0 / n);
    double a = successes, b = n - successes + 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (beta_cdf(a, b, mid) < alpha) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<int, int> estimate_probability(const SyntheticClassifier& classifier,
                                         const DistributionSpec& spec, int N,
                                         std::mt19937_64& rng,
                                         std::uint64_t stream) {
    int successes = 0;
    for (int i = 0; i < N; ++i) {
        double r = sample_radius(spec, rng);
        if (classify(classifier, r, stream, std::uint64_t(i))) ++successes;
    }
    return {successes, N};
}

ProbabilityPair conservative_pair(double A1, double B1, double C) {
    ProbabilityPair pair;
    pair.provenance = ProbabilityPair::Provenance::clopper_pearson;
    double upper = C * A1;                 // B <= C A
    double lower = C * (A1 - 1.0) + 1.0;   // B >= C(A-1) + 1
    if (B1 > upper) {
        pair.A = A1;
        pair.B = std::max(upper, lower);
    } else if (B1 < lower) {
        pair.A = (B1 + C - 1.0) / C;       // lower edge met with equality
        pair.B = B1;
    } else {
        pair.A = A1;
        pair.B = B1;
    }
    pair.A = std::min(1.0, std::max(0.0, pair.A));
    pair.B = std::min(1.0, std::max(0.0, pair.B));
    // the edges above are met with equality in exact arithmetic; a rounded
    // quotient can still land a hair outside, so walk the weakened coordinate
    // down by ulps until the certifier's own check accepts the pair
    while (pair.B > 0.0 && pair.A < pair.B / C)
        pair.B = std::nextafter(pair.B, 0.0);
    while (pair.A > 0.0 && pair.A > 1.0 - (1.0 - pair.B) / C)
        pair.A = std::nextafter(pair.A, 0.0);
    return pair;
}

SamplingReport run_pipeline(const SyntheticClassifier& classifier,
                            const DistributionSpec& spec, double kappa,
                            const SamplingConfig& config, std::uint64_t seed) {
    SamplingReport report;
    report.p_spec = spec;
    report.kappa = kappa;
    report.seed = seed;
    std::mt19937_64 rng(seed);

    auto [s1, n1] = estimate_probability(classifier, spec, config.N1, rng, 0);
    report.successes_P = s1;
    report.N1 = n1;
    report.A1 = clopper_pearson_lower(s1, n1, config.alpha1);

    report.T = heuristic_T(spec, kappa);
    DistributionSpec q_spec = with_truncation(spec, report.T);
    double C = ratio_constant(q_spec);

    auto [s2, n2] = estimate_probability(classifier, q_spec, config.N2, rng, 1);
    report.successes_Q = s2;
    report.N2 = n2;
    report.B1 = clopper_pearson_lower(s2, n2, config.alpha2);

    report.pair = conservative_pair(report.A1, report.B1, C);

    auto [s3, n3] = estimate_probability(classifier, spec, config.N_np, rng, 2);
    report.successes_np = s3;
    report.N_np = n3;
    report.A_np = clopper_pearson_lower(s3, n3, config.alpha_np);

    try {
        DsrsProblem problem;
        problem.p_spec = spec;
        problem.q_spec = q_spec;
        problem.pair = report.pair;
        report.dsrs_radius = dsrs_certify(problem).radius;

        NpProblem np;
        np.spec = spec;
        np.A = report.A_np;
        report.np_radius = spec.k == 0 ? esg_np_certify(np).radius
                                       : egg_np_certify(np).radius;
    } catch (const std::exception& ex) {
        report.solver_error = ex.what();
    }
    return report;
}

std::string report_to_json(const SamplingReport& report) {
    nlohmann::json j;
    j["spec"] = nlohmann::json::parse(spec_to_json(report.p_spec));
    j["kappa"] = report.kappa;
    j["seed"] = report.seed;
    j["successes_P"] = report.successes_P;
    j["N1"] = report.N1;
    j["successes_Q"] = report.successes_Q;
    j["N2"] = report.N2;
    j["successes_np"] = report.successes_np;
    j["N_np"] = report.N_np;
    j["A1"] = report.A1;
    j["B1"] = report.B1;
    j["A_np"] = report.A_np;
    j["T"] = report.T;
    j["A"] = report.pair.A;
    j["B"] = report.pair.B;
    // the clamping rule behind (A, B) is a conservative completion, not
    // taken from a published algorithm; flag it so readers of the report know
    j["pair_rule"] = "conservative-clamp-v1";
    j["np_radius"] = report.np_radius;
    j["dsrs_radius"] = report.dsrs_radius;
    j["solver_error"] = report.solver_error;
    return j.dump(2);
}

std::string report_csv_header() {
    return "schema=pipeline-report-v1,family,d,sigma,eta,k,kappa,seed,"
           "successes_P,N1,successes_Q,N2,successes_np,N_np,A1,B1,A_np,T,A,B,"
           "np_radius,dsrs_radius,solver_error";
}

std::string report_csv_row(const SamplingReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "," << (report.p_spec.family == Family::esg ? "esg" : "egg") << ","
        << report.p_spec.d << "," << report.p_spec.sigma << ","
        << report.p_spec.eta << "," << report.p_spec.k << "," << report.kappa
        << "," << report.seed << "," << report.successes_P << "," << report.N1
        << "," << report.successes_Q << "," << report.N2 << ","
        << report.successes_np << "," << report.N_np << "," << report.A1 << ","
        << report.B1 << "," << report.A_np << "," << report.T << ","
        << report.pair.A << "," << report.pair.B << "," << report.np_radius
        << "," << report.dsrs_radius << "," << report.solver_error;
    return out.str();
}

}  // namespace rscert
