// Command-line surface: single certifications, table emission, numerical
// simulation sweeps, and the end-to-end sampling pipeline. Data-only output
// (CSV/JSON); exit codes: 0 ok, 1 usage/IO, 2 infeasible pair, 3 solver
// failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rscert/dsrs_cert.hpp"
#include "rscert/harness.hpp"
#include "rscert/lower_bound.hpp"
#include "rscert/special_functions.hpp"

using namespace rscert;

namespace {

// eta accepted as a decimal ("0.5") or an exact fraction ("1/50"); the
// lower-bound tables need exact reciprocals.
double parse_eta(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    double num = std::stod(text.substr(0, slash));
    double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw CLI::ValidationError("--eta", "zero denominator");
    return num / den;
}

Family parse_family(const std::string& text) {
    if (text == "esg") return Family::esg;
    if (text == "egg") return Family::egg;
    throw CLI::ValidationError("--family", "must be esg or egg");
}

// --out is joined onto RSCERT_OUT_DIR when relative; empty --out = stdout.
std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path.empty()) return nullptr;
    std::string full = path;
    const char* dir = std::getenv("RSCERT_OUT_DIR");
    if (dir && *dir && path.front() != '/') full = std::string(dir) + "/" + path;
    auto out = std::make_unique<std::ofstream>(full);
    if (!*out) throw std::runtime_error("cannot open output file: " + full);
    return out;
}

struct SpecFlags {
    std::string family = "esg";
    int d = 3072;
    double sigma = 1.0;
    std::string eta = "2";
    int k = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--family", family, "esg or egg")
            ->check(CLI::IsMember({"esg", "egg"}));
        cmd->add_option("--d", d, "input dimension");
        cmd->add_option("--sigma", sigma, "formal variance parameter");
        cmd->add_option("--eta", eta, "exponent, decimal or fraction like 1/50");
        cmd->add_option("--k", k, "EGG decay order (0 = ESG)");
    }
    DistributionSpec build() const {
        return make_spec(parse_family(family), d, sigma, parse_eta(eta), k);
    }
};

void emit_mu_table(std::ostream& out) {
    out << "schema=tight-mu-v1\neta";
    for (int dk = 1; dk <= 30; ++dk) out << ",dm2k_" << dk;
    out << "\n";
    std::vector<std::pair<double, std::string>> etas;
    for (int n = 10; n >= 2; --n) etas.push_back({double(n), std::to_string(n)});
    for (int n = 1; n <= 50; ++n)
        etas.push_back({1.0 / n, n == 1 ? "1" : "1/" + std::to_string(n)});
    ConcentrationParams params;
    char buf[32];
    for (const auto& [eta, label] : etas) {
        out << label;
        for (int dk = 1; dk <= 30; ++dk) {
            std::snprintf(buf, sizeof buf, ",%.5f", tight_mu(dk, eta, params, 1e-5));
            out << buf;
        }
        out << "\n";
    }
}

void emit_sigma_errors(std::ostream& out) {
    out << "schema=sigma-errors-v1\nd,eta,sigma,exact,approx,AE,RE\n";
    char buf[160];
    for (int d : {3072, 150224})
        for (double eta : {0.5, 1.0, 2.0, 4.0, 8.0})
            for (double sigma : {0.12, 0.25, 0.5, 1.0}) {
                DistributionSpec spec = make_spec(Family::esg, d, sigma, eta);
                double exact = formal_scale(spec);
                double approx = formal_scale_approx(spec);
                double ae = std::fabs(exact - approx);
                std::snprintf(buf, sizeof buf,
                              "%d,%g,%g,%.12e,%.12e,%.3e,%.3e\n", d, eta,
                              sigma, exact, approx, ae, ae / exact);
                out << buf;
            }
}

void psi_phi_errors(int d, double* max_ae, double* max_re) {
    const int points = 100000;
    double sqd = std::sqrt(double(d));
    double alpha = 0.5 * (d - 1.0);
    *max_ae = 0.0;
    *max_re = 0.0;
    for (int i = 1; i <= points; ++i) {
        double x = sqd * i / (points + 1.0);
        double psi = beta_cdf_sym(alpha, 0.5 + x / (2.0 * sqd));
        double phi = std_normal_cdf(x);
        double ae = std::fabs(psi - phi);
        if (ae > *max_ae) *max_ae = ae;
        double re = ae / phi;
        if (re > *max_re) *max_re = re;
    }
}

void emit_psi_phi(std::ostream& out) {
    out << "schema=psi-phi-v1\nd,max_AE,max_RE\n";
    char buf[96];
    for (int d : {10, 100, 1000, 10000, 100000, 1000000}) {
        double ae, re;
        psi_phi_errors(d, &ae, &re);
        std::snprintf(buf, sizeof buf, "%d,%.3e,%.3e\n", d, ae, re);
        out << buf;
    }
}

void emit_table7(std::ostream& out, int d, double tol) {
    const double As[] = {0.6, 0.6, 0.6, 0.6, 0.7, 0.7, 0.7, 0.7, 0.8, 0.8, 0.8};
    const double Bs[] = {0.6, 0.7, 0.8, 0.9, 0.6, 0.7, 0.8, 0.9, 0.7, 0.8, 0.9};
    out << "schema=simulate-table7-v1\neta";
    for (int c = 0; c < 11; ++c) out << ",A" << As[c] << "_B" << Bs[c];
    out << "\n";
    int k = d / 2 - 5;
    std::vector<std::vector<double>> rows;
    char buf[32];
    for (double eta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
        DistributionSpec p = make_spec(Family::egg, d, 1.0, eta, k);
        DsrsProblem prob;
        prob.p_spec = p;
        prob.q_spec = with_truncation(p, heuristic_T(p, 0.5));  // C_g = 2
        prob.tol = tol;
        std::vector<double> row;
        out << eta;
        for (int c = 0; c < 11; ++c) {
            prob.pair.A = As[c];
            prob.pair.B = Bs[c];
            double radius;
            try {
                radius = dsrs_certify(prob).radius;
            } catch (const std::exception&) {
                radius = -1.0;  // per-cell failure recorded in-row
            }
            row.push_back(radius);
            std::snprintf(buf, sizeof buf, ",%.4f", radius);
            out << buf;
        }
        out << "\n";
        rows.push_back(row);
    }
    out << "increase_64_vs_2";
    for (int c = 0; c < 11; ++c) {
        std::snprintf(buf, sizeof buf, ",%.3f%%",
                      100.0 * (rows[7][c] / rows[2][c] - 1.0));
        out << buf;
    }
    out << "\n";
}

void emit_b1_sweep(std::ostream& out, int d, double tol) {
    // (1, 0.5, 2)-concentration threshold shared across eta
    double T = concentration_T(d, 1.0, 0.5, 2.0);
    out << "schema=simulate-b1-v1\nd,eta,T,radius\n";
    int k = d / 2 - 5;
    char buf[96];
    for (double eta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        DistributionSpec p = make_spec(Family::egg, d, 1.0, eta, k);
        auto r = dsrs_certify_b1(p, with_truncation(p, T), tol);
        std::snprintf(buf, sizeof buf, "%d,%g,%.6f,%.6f\n", d, eta, T, r.radius);
        out << buf;
    }
}

void emit_d_sweep(std::ostream& out, double tol) {
    out << "schema=simulate-dsweep-v1\nd,eta,radius\n";  // A=0.8, B=0.7
    char buf[64];
    for (int d : {2000, 3072, 10000, 50000, 100000, 200000})
        for (double eta : {1.0, 2.0, 8.0}) {
            DistributionSpec p = make_spec(Family::egg, d, 1.0, eta, d / 2 - 5);
            DsrsProblem prob;
            prob.p_spec = p;
            prob.q_spec = with_truncation(p, heuristic_T(p, 0.5));
            prob.tol = tol;
            prob.pair.A = 0.8;
            prob.pair.B = 0.7;
            std::snprintf(buf, sizeof buf, "%d,%g,%.6f\n", d, eta,
                          dsrs_certify(prob).radius);
            out << buf;
        }
}

int run(int argc, char** argv) {
    CLI::App app{"certified-radius computation engine"};
    app.require_subcommand(1);
    bool json_errors = false;
    app.add_flag("--json-errors", json_errors, "emit errors as JSON on stderr");

    // certify
    auto* certify = app.add_subcommand("certify", "single certification");
    std::string method;
    certify->add_option("method", method, "np or dsrs")
        ->required()
        ->check(CLI::IsMember({"np", "dsrs"}));
    SpecFlags spec_flags;
    spec_flags.add(certify);
    double A = 0.0, B = -1.0, kappa = 0.5, tol = 1e-6, T_flag = 0.0;
    certify->add_option("--A", A, "probability under P")->required();
    certify->add_option("--B", B, "probability under Q (dsrs)");
    certify->add_option("--kappa", kappa,
                        "Q truncation mass (dsrs; stand-in default 0.5)");
    certify->add_option("--T", T_flag, "explicit truncation radius (dsrs)");
    certify->add_option("--tol", tol, "radius bisection tolerance");

    // tables
    auto* tables = app.add_subcommand("tables", "deterministic table emission");
    std::string which_table, table_out;
    tables->add_option("name", which_table, "table name")
        ->required()
        ->check(CLI::IsMember({"mu", "lambda-fixbase", "lambda-thcorres",
                               "sigma-errors", "psi-phi"}));
    tables->add_option("--out", table_out, "output file (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "numerical simulation sweeps");
    std::string which_sim, sim_out;
    int sim_d = 100000;
    double sim_tol = 1e-4;
    simulate->add_option("name", which_sim, "sweep name")
        ->required()
        ->check(CLI::IsMember({"table7", "b1-sweep", "d-sweep"}));
    simulate->add_option("--d", sim_d, "dimension (table7 / b1-sweep)");
    simulate->add_option("--tol", sim_tol, "radius bisection tolerance");
    simulate->add_option("--out", sim_out, "output file (default stdout)");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "end-to-end sampling run");
    SpecFlags pipe_spec;
    pipe_spec.add(pipeline);
    std::string classifier_kind = "concentrated", pipe_out;
    double T_star = -1.0, p_inner = 1.0, p_outer = 0.0, pipe_kappa = 0.5;
    std::uint64_t seed = 0;
    SamplingConfig config;
    pipeline->add_option("--classifier", classifier_kind, "classifier kind")
        ->check(CLI::IsMember({"concentrated", "shell", "always-correct",
                               "always-wrong"}));
    pipeline->add_option("--T-star", T_star,
                         "classifier radius threshold (default: heuristic T)");
    pipeline->add_option("--p-inner", p_inner, "shell inner correctness");
    pipeline->add_option("--p-outer", p_outer, "shell outer correctness");
    pipeline->add_option("--kappa", pipe_kappa, "Q truncation mass");
    pipeline->add_option("--seed", seed, "RNG seed")->required();
    pipeline->add_option("--N1", config.N1, "samples under P");
    pipeline->add_option("--N2", config.N2, "samples under Q");
    pipeline->add_option("--alpha1", config.alpha1, "significance for A1");
    pipeline->add_option("--alpha2", config.alpha2, "significance for B1");
    pipeline->add_option("--N-np", config.N_np, "samples for the NP baseline");
    pipeline->add_option("--alpha-np", config.alpha_np, "significance for NP");
    pipeline->add_option("--out", pipe_out, "report JSON file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*certify) {
            DistributionSpec spec = spec_flags.build();
            if (method == "np") {
                NpProblem problem{spec, A, tol};
                auto r = spec.k == 0 ? esg_np_certify(problem)
                                     : egg_np_certify(problem);
                nlohmann::json j;
                j["method"] = "np";
                j["spec"] = nlohmann::json::parse(spec_to_json(spec));
                j["A"] = A;
                j["radius"] = r.radius;
                j["iterations"] = r.outer_iterations;
                j["residual"] = r.final_residual;
                std::cout << j.dump(2) << "\n";
            } else {
                if (B < 0.0)
                    throw CLI::ValidationError("--B", "required for dsrs");
                DsrsProblem problem;
                problem.p_spec = spec;
                double T = T_flag > 0.0 ? T_flag : heuristic_T(spec, kappa);
                problem.q_spec = with_truncation(spec, T);
                problem.pair.A = A;
                problem.pair.B = B;
                problem.tol = tol;
                auto r = dsrs_certify(problem);
                nlohmann::json j;
                j["method"] = "dsrs";
                j["spec"] = nlohmann::json::parse(spec_to_json(spec));
                j["A"] = A;
                j["B"] = B;
                j["T"] = T;
                j["radius"] = r.radius;
                j["iterations"] = r.outer_iterations;
                j["residual"] = r.final_residual;
                std::cout << j.dump(2) << "\n";
            }
        } else if (*tables) {
            auto file = open_output(table_out);
            std::ostream& out = file ? *file : std::cout;
            if (which_table == "mu") emit_mu_table(out);
            else if (which_table == "lambda-fixbase") emit_fixbase_table(out);
            else if (which_table == "lambda-thcorres") emit_thcorres_table(out);
            else if (which_table == "sigma-errors") emit_sigma_errors(out);
            else emit_psi_phi(out);
        } else if (*simulate) {
            auto file = open_output(sim_out);
            std::ostream& out = file ? *file : std::cout;
            if (which_sim == "table7") emit_table7(out, sim_d, sim_tol);
            else if (which_sim == "b1-sweep") emit_b1_sweep(out, sim_d, sim_tol);
            else emit_d_sweep(out, sim_tol);
        } else if (*pipeline) {
            DistributionSpec spec = pipe_spec.build();
            SyntheticClassifier classifier;
            classifier.rng_seed = seed;
            if (classifier_kind == "concentrated")
                classifier.kind = SyntheticClassifier::Kind::concentrated;
            else if (classifier_kind == "shell")
                classifier.kind = SyntheticClassifier::Kind::shell;
            else if (classifier_kind == "always-correct")
                classifier.kind = SyntheticClassifier::Kind::always_correct;
            else
                classifier.kind = SyntheticClassifier::Kind::always_wrong;
            classifier.T_star = T_star > 0.0 ? T_star : heuristic_T(spec, pipe_kappa);
            classifier.p_inner = p_inner;
            classifier.p_outer = p_outer;
            SamplingReport report =
                run_pipeline(classifier, spec, pipe_kappa, config, seed);
            auto file = open_output(pipe_out);
            std::ostream& out = file ? *file : std::cout;
            out << report_to_json(report) << "\n";
            std::cerr << report_csv_header() << "\n"
                      << report_csv_row(report) << "\n";
            if (!report.solver_error.empty()) return 3;
        }
    } catch (const FeasibilityError& ex) {
        if (json_errors)
            std::cerr << nlohmann::json{{"error", ex.what()}}.dump() << "\n";
        else
            std::cerr << "infeasible: " << ex.what() << "\n";
        return 2;
    } catch (const SolverError& ex) {
        if (json_errors)
            std::cerr << nlohmann::json{{"error", ex.what()}}.dump() << "\n";
        else
            std::cerr << "solver failure: " << ex.what() << "\n";
        return 3;
    } catch (const IntegrationError& ex) {
        if (json_errors)
            std::cerr << nlohmann::json{{"error", ex.what()}}.dump() << "\n";
        else
            std::cerr << "integration failure: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        if (json_errors)
            std::cerr << nlohmann::json{{"error", ex.what()}}.dump() << "\n";
        else
            std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
