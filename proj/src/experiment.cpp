#include "oneshot/experiment.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/spectral_certify.hpp"
#include "oneshot/tau_bounds.hpp"
#include "oneshot/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace oneshot {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kKindNames{{
    {ExperimentKind::TauSweep, "TauSweep"},
    {ExperimentKind::KComparison, "KComparison"},
    {ExperimentKind::NoiseStudy, "NoiseStudy"},
    {ExperimentKind::MeshRobustness, "MeshRobustness"},
    {ExperimentKind::DeltaDependence, "DeltaDependence"},
    {ExperimentKind::BoundReport, "BoundReport"},
    {ExperimentKind::CertifySweep, "CertifySweep"},
}};

bool runs_descent(ExperimentKind kind) {
    return kind != ExperimentKind::BoundReport && kind != ExperimentKind::CertifySweep;
}

template <typename T>
void require_unique(const char* field, const std::vector<T>& values) {
    if (std::set<T>(values.begin(), values.end()).size() != values.size()) {
        throw ValidationError(field, "contains duplicate values");
    }
}

void require_nonempty(const char* field, std::size_t size, ExperimentKind kind) {
    if (size == 0) {
        throw ValidationError(field, "must not be empty for kind " + std::string(to_string(kind)));
    }
}

std::string scheme_list(const std::vector<SchemeKind>& schemes) {
    std::string out;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (i) out += ", ";
        out += to_string(schemes[i]);
    }
    return out;
}

// rho(A^T A) = sigma_max(A)^2, from the singular values cached on the problem.
double rho_ata(const LinearInverseProblem& problem) {
    const double smax = problem.reduced_singular_values().maxCoeff();
    return smax * smax;
}

double actual_tau(const ExperimentSpec& spec, double tau_input, double rho) {
    return spec.tau_scale == TauScale::GdThreshold ? tau_input * 2.0 / rho : tau_input;
}

class OutputDir {
public:
    explicit OutputDir(const std::filesystem::path& dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
        outputs_.directory = dir;
    }

    std::ofstream open(const std::string& name) {
        std::ofstream out(outputs_.directory / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + (outputs_.directory / name).string());
        outputs_.files.push_back(name);
        return out;
    }

    ExperimentOutputs& outputs() { return outputs_; }

private:
    ExperimentOutputs outputs_;
};

struct Variant {
    CavityConfig config;
    std::optional<double> mesh_h;
    std::optional<double> delta;
};

std::vector<Variant> variants(const ExperimentSpec& spec) {
    std::vector<Variant> out;
    if (spec.kind == ExperimentKind::MeshRobustness) {
        for (double h : spec.mesh_hs) {
            Variant v{spec.cavity, h, std::nullopt};
            v.config.mesh_h = h;
            out.push_back(v);
        }
    } else if (spec.kind == ExperimentKind::DeltaDependence) {
        for (double d : spec.deltas) {
            Variant v{spec.cavity, std::nullopt, d};
            v.config.delta = d;
            out.push_back(v);
        }
    } else {
        out.push_back({spec.cavity, std::nullopt, std::nullopt});
    }
    return out;
}

std::string trace_name(const Variant& v, SchemeKind scheme, double tau, int k, double alpha, double noise) {
    std::string name = "trace_";
    if (v.mesh_h) name += "h" + csv::shortest(*v.mesh_h) + "_";
    if (v.delta) name += "d" + csv::shortest(*v.delta) + "_";
    name += std::string(to_string(scheme)) + "_tau" + csv::shortest(tau) + "_k" + std::to_string(k) + "_a" +
            csv::shortest(alpha) + "_e" + csv::shortest(noise) + ".csv";
    return name;
}

void run_descent_cells(const ExperimentSpec& spec, OutputDir& out, std::ostream* progress) {
    const std::vector<double> noise_levels =
        spec.noise_levels.empty() ? std::vector<double>{spec.cavity.noise_level} : spec.noise_levels;

    std::ostringstream summary;
    summary << "file,mesh_h,delta,noise_level,scheme,k,tau_input,tau,alpha,status,outer_iterations,acc_inner,"
               "final_cost,final_grad_norm,final_rel_err_sigma,min_rel_err_sigma,n_reach,acc_inner_reach,rho_AtA\n";

    for (const auto& variant : variants(spec)) {
        for (double noise : noise_levels) {
            CavityConfig config = variant.config;
            config.noise_level = noise;
            const GeneratedCavity cavity = generate(config);
            const double rho = rho_ata(cavity.problem);
            for (SchemeKind scheme : spec.schemes) {
                // GD schemes have no inner iterations: one cell regardless of ks.
                const std::vector<int> ks = is_one_shot(scheme) ? spec.ks : std::vector<int>{1};
                for (double tau_input : spec.taus) {
                    for (int k : ks) {
                        for (double alpha : spec.alphas) {
                            RunConfig rc;
                            rc.scheme = scheme;
                            rc.tau = actual_tau(spec, tau_input, rho);
                            rc.k = k;
                            rc.max_outer = spec.max_outer;
                            rc.tol_cost = spec.tol_cost;
                            rc.tol_step = spec.tol_step;
                            rc.sigma0 = cavity.init_sigma;
                            rc.sigma_ref = cavity.exact_sigma;
                            const ConvergenceTrace trace = run(multi_source_objective(cavity, alpha, true), rc);

                            const std::string name = trace_name(variant, scheme, tau_input, k, alpha, noise);
                            auto file = out.open(name);
                            write_trace_csv(file, trace);

                            const auto& last = trace.records.back();
                            std::optional<double> min_err;
                            std::optional<int> n_reach;
                            std::optional<long long> acc_reach;
                            for (const auto& r : trace.records) {
                                if (r.rel_err_sigma && (!min_err || *r.rel_err_sigma < *min_err)) min_err = r.rel_err_sigma;
                                if (!n_reach && r.cost <= spec.reach_cost) {
                                    n_reach = r.n;
                                    acc_reach = r.acc_inner;
                                }
                            }
                            summary << name << ',' << csv::shortest(variant.mesh_h) << ','
                                    << csv::shortest(variant.delta) << ',' << csv::shortest(noise) << ','
                                    << to_string(scheme) << ',' << k << ',' << csv::shortest(tau_input) << ','
                                    << csv::shortest(rc.tau) << ',' << csv::shortest(alpha) << ','
                                    << to_string(trace.status) << ',' << trace.outer_iterations() << ','
                                    << last.acc_inner << ',' << csv::shortest(last.cost) << ','
                                    << csv::shortest(last.grad_norm) << ',' << csv::shortest(last.rel_err_sigma) << ','
                                    << csv::shortest(min_err) << ','
                                    << (n_reach ? std::to_string(*n_reach) : std::string()) << ','
                                    << (acc_reach ? std::to_string(*acc_reach) : std::string()) << ','
                                    << csv::shortest(rho) << '\n';
                            if (progress) {
                                *progress << name << ": " << to_string(trace.status) << " after "
                                          << trace.outer_iterations() << " iterations\n";
                            }
                        }
                    }
                }
            }
        }
    }
    auto file = out.open("summary.csv");
    file << summary.str();
}

void run_bound_report(const ExperimentSpec& spec, OutputDir& out, std::ostream* progress) {
    const GeneratedCavity cavity = generate(spec.cavity);
    const double rho = rho_ata(cavity.problem);
    const bool b_is_zero = cavity.problem.B_block().isZero(0.0);

    std::ostringstream bounds;
    std::ostringstream summary;
    write_bound_csv_header(bounds);
    summary << "k,alpha,tau_max,binding_case,gd_threshold,tau_max_over_gd_threshold\n";
    for (int k : spec.ks) {
        for (double alpha : spec.alphas) {
            CaseParameters params = CaseParameters::make(spec.theta0, spec.delta0);
            if (spec.optimize_case_parameters) {
                const TauBoundReport probe = tau_bound_report(cavity.problem, alpha, k, params);
                params = optimize_case_parameters(operator_norms(cavity.problem, k), probe.s_Bk, alpha, b_is_zero);
            }
            const TauBoundReport report = tau_bound_report(cavity.problem, alpha, k, params);
            write_bound_csv_row(bounds, report);
            const double gd = 2.0 / (rho + alpha);
            summary << k << ',' << csv::shortest(alpha) << ',' << report.tau_max.to_string() << ','
                    << to_string(report.binding_case) << ',' << csv::shortest(gd) << ','
                    << (report.tau_max.is_unbounded() ? std::string("unbounded")
                                                      : csv::shortest(report.tau_max.value() / gd))
                    << '\n';
            if (progress) *progress << "k=" << k << " alpha=" << alpha << ": tau_max " << report.tau_max.to_string() << '\n';
        }
    }
    out.open("bounds.csv") << bounds.str();
    out.open("summary.csv") << summary.str();
}

void run_certify_sweep(const ExperimentSpec& spec, OutputDir& out, std::ostream* progress) {
    const GeneratedCavity cavity = generate(spec.cavity);
    const double rho = rho_ata(cavity.problem);

    std::vector<CertificateRow> rows;
    std::ostringstream summary;
    summary << "tau_input,tau,k,alpha,spectral_radius,min_dist_to_one,convergent\n";
    for (double tau_input : spec.taus) {
        for (int k : spec.ks) {
            for (double alpha : spec.alphas) {
                const double tau = actual_tau(spec, tau_input, rho);
                const SpectralCertificate cert = certify(cavity.problem, tau, alpha, k);
                if (spec.write_spectrum) {
                    auto file = out.open("spectrum_tau" + csv::shortest(tau_input) + "_k" + std::to_string(k) + "_a" +
                                         csv::shortest(alpha) + ".csv");
                    write_spectrum_csv(file, cert.eigenvalues);
                }
                summary << csv::shortest(tau_input) << ',' << csv::shortest(tau) << ',' << k << ','
                        << csv::shortest(alpha) << ',' << csv::shortest(cert.spectral_radius) << ','
                        << csv::shortest(cert.min_dist_to_one) << ',' << (cert.convergent ? "true" : "false") << '\n';
                if (progress) {
                    *progress << "tau=" << tau << " k=" << k << " alpha=" << alpha << ": rho " << cert.spectral_radius
                              << '\n';
                }
                rows.push_back({tau, alpha, k, cert});
            }
        }
    }
    auto file = out.open("certificate.csv");
    write_certificate_csv(file, rows);
    out.open("summary.csv") << summary.str();
}

bool set_run_field(ExperimentSpec& spec, std::string_view key, std::string_view value) {
    const std::string field(key);
    if (key == "kind") spec.kind = experiment_kind_from_string(text::trim(value));
    else if (key == "schemes") {
        spec.schemes.clear();
        for (auto name : text::split(value, ',')) {
            try {
                spec.schemes.push_back(scheme_from_string(name));
            } catch (const ValidationError&) {
                throw ValidationError("schemes", "unknown scheme '" + std::string(name) + "'");
            }
        }
    }
    else if (key == "taus") spec.taus = text::parse_double_list(field, value);
    else if (key == "tau_scale") {
        const auto v = text::trim(value);
        if (v == "absolute") spec.tau_scale = TauScale::Absolute;
        else if (v == "gd_threshold") spec.tau_scale = TauScale::GdThreshold;
        else throw ValidationError(field, "expected 'absolute' or 'gd_threshold'");
    }
    else if (key == "ks") spec.ks = text::parse_int_list(field, value);
    else if (key == "alphas") spec.alphas = text::parse_double_list(field, value);
    else if (key == "noise_levels") spec.noise_levels = text::parse_double_list(field, value);
    else if (key == "mesh_hs") spec.mesh_hs = text::parse_double_list(field, value);
    else if (key == "deltas") spec.deltas = text::parse_double_list(field, value);
    else if (key == "max_outer") spec.max_outer = text::parse_int(field, value);
    else if (key == "tol_cost") spec.tol_cost = text::parse_double(field, value);
    else if (key == "tol_step") spec.tol_step = text::parse_double(field, value);
    else if (key == "reach_cost") spec.reach_cost = text::parse_double(field, value);
    else if (key == "theta0") spec.theta0 = text::parse_double(field, value);
    else if (key == "delta0") spec.delta0 = text::parse_double(field, value);
    else if (key == "optimize_case_parameters") spec.optimize_case_parameters = text::parse_bool(field, value);
    else if (key == "write_spectrum") spec.write_spectrum = text::parse_bool(field, value);
    else if (key == "output_dir") spec.output_dir = std::string(text::trim(value));
    else return false;
    return true;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw ValidationError("kind", "unknown experiment kind '" + std::string(name) + "'");
}

std::string_view library_version() { return "0.1.0"; }

void validate(const ExperimentSpec& spec) {
    validate(spec.cavity);
    const auto kind = spec.kind;

    if (runs_descent(kind)) require_nonempty("schemes", spec.schemes.size(), kind);
    if (kind != ExperimentKind::BoundReport) require_nonempty("taus", spec.taus.size(), kind);
    require_nonempty("ks", spec.ks.size(), kind);
    require_nonempty("alphas", spec.alphas.size(), kind);
    if (kind == ExperimentKind::NoiseStudy) require_nonempty("noise_levels", spec.noise_levels.size(), kind);
    if (kind == ExperimentKind::MeshRobustness) require_nonempty("mesh_hs", spec.mesh_hs.size(), kind);
    if (kind == ExperimentKind::DeltaDependence) require_nonempty("deltas", spec.deltas.size(), kind);
    if (kind == ExperimentKind::KComparison &&
        std::none_of(spec.schemes.begin(), spec.schemes.end(), [](SchemeKind s) { return is_one_shot(s); })) {
        throw ValidationError("schemes", "KComparison needs at least one one-shot scheme");
    }

    for (double t : spec.taus) {
        if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("taus", "must be finite and > 0");
    }
    for (int k : spec.ks) {
        if (k < 1) throw ValidationError("ks", "must be >= 1");
    }
    for (double a : spec.alphas) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("alphas", "must be finite and >= 0");
    }
    for (double e : spec.noise_levels) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw ValidationError("noise_levels", "must be finite and >= 0");
    }
    for (double h : spec.mesh_hs) {
        CavityConfig c = spec.cavity;
        c.mesh_h = h;
        try {
            validate(c);
        } catch (const ValidationError& e) {
            throw ValidationError("mesh_hs", std::string(e.what()));
        }
    }
    for (double d : spec.deltas) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("deltas", "must be finite and >= 0");
    }
    require_unique("schemes", spec.schemes);
    require_unique("taus", spec.taus);
    require_unique("ks", spec.ks);
    require_unique("alphas", spec.alphas);
    require_unique("noise_levels", spec.noise_levels);
    require_unique("mesh_hs", spec.mesh_hs);
    require_unique("deltas", spec.deltas);

    if (spec.max_outer < 1) throw ValidationError("max_outer", "must be >= 1");
    if (!(spec.tol_cost >= 0.0)) throw ValidationError("tol_cost", "must be >= 0");
    if (!(spec.tol_step >= 0.0)) throw ValidationError("tol_step", "must be >= 0");
    if (!(spec.reach_cost >= 0.0)) throw ValidationError("reach_cost", "must be >= 0");
    (void)CaseParameters::make(spec.theta0, spec.delta0);
    if (spec.output_dir.empty()) throw ValidationError("output_dir", "must not be empty");
}

ExperimentSpec parse_spec(std::string_view body, const std::filesystem::path& base_dir) {
    ExperimentSpec spec;
    enum class Section { None, Run, Cavity } section = Section::None;
    std::set<std::string> seen_run;
    std::set<std::string> seen_cavity;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= body.size()) {
        auto end = body.find('\n', start);
        if (end == std::string_view::npos) end = body.size();
        ++line_no;
        std::string_view line = body.substr(start, end - start);
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[run]") section = Section::Run;
            else if (line == "[cavity]") section = Section::Cavity;
            else throw ParseError(line_no, "unknown section " + std::string(line));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(text::trim(line.substr(0, eq)));
        const auto value = text::trim(line.substr(eq + 1));
        if (section == Section::None) throw ParseError(line_no, "key '" + key + "' outside a section");
        auto& seen = section == Section::Run ? seen_run : seen_cavity;
        if (!seen.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");

        try {
            bool known = false;
            if (section == Section::Run) {
                known = set_run_field(spec, key, value);
            } else if (key == "manifest") {
                if (seen_cavity.size() > 1) throw ParseError(line_no, "manifest must come first in [cavity]");
                std::filesystem::path path{std::string(value)};
                if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
                std::ifstream in(path, std::ios::binary);
                if (!in) throw IoError("cannot open manifest " + path.string());
                std::ostringstream buf;
                buf << in.rdbuf();
                spec.cavity = parse_cavity_manifest(buf.str());
                known = true;
            } else {
                known = set_cavity_field(spec.cavity, key, value);
            }
            if (!known) throw ParseError(line_no, "unknown key '" + key + "'");
        } catch (const ValidationError& e) {
            const std::string what = e.what();
            throw ValidationError(e.field(), what.substr(std::min(what.size(), e.field().size() + 2)) + " (line " +
                                                 std::to_string(line_no) + ")");
        }
    }
    validate(spec);
    return spec;
}

ExperimentSpec parse_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str(), path.parent_path());
}

std::string serialize(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "[run]\n"
        << "kind = " << to_string(spec.kind) << '\n'
        << "schemes = " << scheme_list(spec.schemes) << '\n'
        << "taus = " << text::join(spec.taus) << '\n'
        << "tau_scale = " << (spec.tau_scale == TauScale::Absolute ? "absolute" : "gd_threshold") << '\n'
        << "ks = " << text::join(spec.ks) << '\n'
        << "alphas = " << text::join(spec.alphas) << '\n'
        << "noise_levels = " << text::join(spec.noise_levels) << '\n'
        << "mesh_hs = " << text::join(spec.mesh_hs) << '\n'
        << "deltas = " << text::join(spec.deltas) << '\n'
        << "max_outer = " << spec.max_outer << '\n'
        << "tol_cost = " << csv::shortest(spec.tol_cost) << '\n'
        << "tol_step = " << csv::shortest(spec.tol_step) << '\n'
        << "reach_cost = " << csv::shortest(spec.reach_cost) << '\n'
        << "theta0 = " << csv::shortest(spec.theta0) << '\n'
        << "delta0 = " << csv::shortest(spec.delta0) << '\n'
        << "optimize_case_parameters = " << (spec.optimize_case_parameters ? "true" : "false") << '\n'
        << "write_spectrum = " << (spec.write_spectrum ? "true" : "false") << '\n'
        << "output_dir = " << spec.output_dir << '\n'
        << "\n[cavity]\n";
    for (const auto& [k, v] : cavity_fields(spec.cavity)) out << k << " = " << v << '\n';
    return out.str();
}

ExperimentOutputs run_experiment(const ExperimentSpec& spec, std::ostream* progress) {
    validate(spec);
    OutputDir out(spec.output_dir);
    switch (spec.kind) {
        case ExperimentKind::BoundReport: run_bound_report(spec, out, progress); break;
        case ExperimentKind::CertifySweep: run_certify_sweep(spec, out, progress); break;
        default: run_descent_cells(spec, out, progress); break;
    }

    std::ostringstream manifest;
    manifest << "# oneshot " << library_version() << " experiment manifest\n# outputs\n";
    for (const auto& f : out.outputs().files) manifest << "#   " << f << '\n';
    manifest << "# spec (rerun with: oneshot run --spec manifest.txt)\n" << serialize(spec);
    out.open("manifest.txt") << manifest.str();
    return out.outputs();
}

}  // namespace oneshot
