// oneshot: cavity generation, experiment sweeps, step bounds and spectral
// certificates from the command line.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 numerical failure.

#include "oneshot/errors.hpp"
#include "oneshot/experiment.hpp"
#include "oneshot/helmholtz_toy.hpp"
#include "oneshot/matrix_io.hpp"
#include "oneshot/spectral_certify.hpp"
#include "oneshot/tau_bounds.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace oneshot;

constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kNumerical = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CavityConfig load_cavity(const std::string& path, std::optional<std::uint64_t> seed) {
    CavityConfig c = path.empty() ? CavityConfig{} : parse_cavity_manifest(slurp(path));
    if (seed) c.rng_seed = *seed;
    validate(c);
    return c;
}

// Problem and data from a matrix directory or a freshly generated cavity.
struct Loaded {
    LinearInverseProblem problem;
    std::optional<Vector> g;
};

Loaded load_problem_source(const std::string& problem_dir, const std::string& spec, std::optional<std::uint64_t> seed) {
    if (!problem_dir.empty()) {
        auto stored = load_problem(problem_dir);
        return {std::move(stored.problem), std::move(stored.g)};
    }
    const auto cavity = generate(load_cavity(spec, seed));
    return {cavity.problem, stack(cavity.data_noisy)};
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void require_single(const ExperimentSpec& spec) {
    auto one = [](const char* field, std::size_t n, bool may_be_empty) {
        if (n > 1 || (n == 0 && !may_be_empty)) {
            throw ValidationError(field, "'run' takes a single value per list; use 'sweep' for lists");
        }
    };
    one("schemes", spec.schemes.size(), true);
    one("taus", spec.taus.size(), true);
    one("ks", spec.ks.size(), false);
    one("alphas", spec.alphas.size(), false);
    one("noise_levels", spec.noise_levels.size(), true);
    one("mesh_hs", spec.mesh_hs.size(), true);
    one("deltas", spec.deltas.size(), true);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-step one-shot inversion: cavity problems, sweeps, step bounds, certificates"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Suppress progress output");

    std::string spec_path;
    std::string out_path;
    std::string problem_dir;
    std::optional<std::uint64_t> seed;
    double tau = 0.0;
    double alpha = 0.0;
    int k = 1;
    double theta0 = 0.39269908169872414;
    double delta0 = 1.0;
    bool optimize = false;
    std::string spectrum_path;

    auto* generate_cmd = app.add_subcommand("generate", "Generate a cavity problem into a matrix directory");
    generate_cmd->add_option("--spec", spec_path, "Cavity manifest (key = value); defaults if omitted");
    generate_cmd->add_option("--out", out_path, "Output directory")->required();
    generate_cmd->add_option("--seed", seed, "Override rng_seed");

    auto* run_cmd = app.add_subcommand("run", "Run a single-configuration experiment spec");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment spec with sweep lists");
    for (auto* cmd : {run_cmd, sweep_cmd}) {
        cmd->add_option("--spec", spec_path, "Experiment spec")->required();
        cmd->add_option("--out", out_path, "Output directory (overrides output_dir)");
        cmd->add_option("--seed", seed, "Override the cavity rng_seed");
    }

    auto* bounds_cmd = app.add_subcommand("bounds", "Sufficient step bounds (CSV)");
    auto* certify_cmd = app.add_subcommand("certify", "Spectral certificate of the iteration matrix (CSV)");
    for (auto* cmd : {bounds_cmd, certify_cmd}) {
        auto* p = cmd->add_option("--problem", problem_dir, "Matrix directory");
        auto* s = cmd->add_option("--spec", spec_path, "Cavity manifest to generate the problem from");
        p->excludes(s);
        cmd->add_option("--seed", seed, "Override rng_seed of a generated cavity");
        cmd->add_option("--out", out_path, "Output CSV (stdout if omitted)");
        cmd->add_option("--alpha", alpha, "Regularization weight")->check(CLI::NonNegativeNumber);
        cmd->add_option("--k", k, "Inner iterations")->check(CLI::PositiveNumber);
    }
    bounds_cmd->add_option("--theta0", theta0, "Case split angle in (0, pi/4]");
    bounds_cmd->add_option("--delta0", delta0, "Case 3 margin > 0");
    bounds_cmd->add_flag("--optimize", optimize, "Grid-search theta0, delta0 for the largest bound");
    certify_cmd->add_option("--tau", tau, "Descent step")->required()->check(CLI::PositiveNumber);
    certify_cmd->add_option("--spectrum", spectrum_path, "Also write the eigenvalues (re,im) here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }
    std::ostream* progress = quiet ? nullptr : &std::cerr;

    try {
        if (generate_cmd->parsed()) {
            const auto cavity = generate(load_cavity(spec_path, seed));
            save_problem(out_path, cavity.problem, stack(cavity.data_noisy));
            save_matrix(std::filesystem::path(out_path) / "g_clean.mat", stack(cavity.data_clean));
            save_matrix(std::filesystem::path(out_path) / "sigma_exact.mat", cavity.exact_sigma);
            save_matrix(std::filesystem::path(out_path) / "sigma_init.mat", cavity.init_sigma);
            std::ofstream(std::filesystem::path(out_path) / "cavity.txt", std::ios::binary)
                << cavity_manifest(cavity.config, &cavity.mesh);
            if (progress) {
                *progress << "n_u = " << cavity.problem.n_u() << ", n_sigma = " << cavity.problem.n_sigma()
                          << ", n_g = " << cavity.problem.n_g() << ", rho(B) = " << cavity.problem.spectral_radius_B()
                          << " -> " << out_path << '\n';
            }
        } else if (run_cmd->parsed() || sweep_cmd->parsed()) {
            ExperimentSpec spec = parse_spec_file(spec_path);
            if (seed) spec.cavity.rng_seed = *seed;
            if (!out_path.empty()) spec.output_dir = out_path;
            if (run_cmd->parsed()) require_single(spec);
            const auto outputs = run_experiment(spec, progress);
            if (progress) *progress << outputs.files.size() << " files in " << outputs.directory.string() << '\n';
        } else if (bounds_cmd->parsed()) {
            const auto loaded = load_problem_source(problem_dir, spec_path, seed);
            CaseParameters params = CaseParameters::make(theta0, delta0);
            if (optimize) {
                const auto probe = tau_bound_report(loaded.problem, alpha, k, params);
                params = optimize_case_parameters(operator_norms(loaded.problem, k), probe.s_Bk, alpha,
                                                  loaded.problem.B_block().isZero(0.0));
            }
            const auto report = tau_bound_report(loaded.problem, alpha, k, params);
            Output out(out_path);
            write_bound_csv_header(out.stream());
            write_bound_csv_row(out.stream(), report);
        } else if (certify_cmd->parsed()) {
            const auto loaded = load_problem_source(problem_dir, spec_path, seed);
            const auto cert = certify(loaded.problem, tau, alpha, k);
            Output out(out_path);
            write_certificate_csv(out.stream(), {{tau, alpha, k, cert}});
            if (!spectrum_path.empty()) {
                Output spectrum(spectrum_path);
                write_spectrum_csv(spectrum.stream(), cert.eigenvalues);
            }
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const SingularSystemError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const RankDeficiencyError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInvalid;
    } catch (const Error& e) {
        // validation, dimension, invariant and I/O errors
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return 0;
}
