#pragma once

// Experiment specs and the sweep driver behind the command-line tool.
//
// Spec format: '#' comments, "key = value" lines grouped in two sections.
//
//     [run]
//     kind = TauSweep
//     schemes = UsualGD, KStepOneShot
//     taus = 0.5, 0.9
//     tau_scale = gd_threshold      # taus are multiples of 2 / rho(A^T A)
//     ks = 1, 2
//     max_outer = 2000
//
//     [cavity]
//     manifest = cavity.txt         # optional; later keys override it
//     mesh_h = 0.1
//
// Unknown keys and keys outside a section are errors.

#include "oneshot/descent_methods.hpp"
#include "oneshot/helmholtz_toy.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oneshot {

enum class ExperimentKind { TauSweep, KComparison, NoiseStudy, MeshRobustness, DeltaDependence, BoundReport, CertifySweep };
[[nodiscard]] std::string_view to_string(ExperimentKind kind);
[[nodiscard]] ExperimentKind experiment_kind_from_string(std::string_view name);

enum class TauScale { Absolute, GdThreshold };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::TauSweep;
    CavityConfig cavity;

    std::vector<SchemeKind> schemes;
    std::vector<double> taus;
    TauScale tau_scale = TauScale::Absolute;
    std::vector<int> ks{1};
    std::vector<double> alphas{0.0};
    // Empty: use cavity.noise_level.
    std::vector<double> noise_levels;
    std::vector<double> mesh_hs;  // MeshRobustness
    std::vector<double> deltas;   // DeltaDependence

    int max_outer = 1000;
    double tol_cost = 0.0;
    double tol_step = 0.0;
    // Summary reports the first outer iteration with cost <= reach_cost.
    double reach_cost = 1e-8;

    // BoundReport
    double theta0 = 0.39269908169872414;  // pi/8
    double delta0 = 1.0;
    bool optimize_case_parameters = false;
    // CertifySweep: also dump each spectrum.
    bool write_spectrum = false;

    std::string output_dir = "out";

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

// Throws ValidationError naming the offending field.
void validate(const ExperimentSpec& spec);

// Relative manifest paths resolve against base_dir. Throws ParseError (with
// line) for syntax errors and unknown keys, ValidationError for bad values.
[[nodiscard]] ExperimentSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] ExperimentSpec parse_spec_file(const std::filesystem::path& path);

// Canonical text; the cavity is written out in full (no manifest reference).
[[nodiscard]] std::string serialize(const ExperimentSpec& spec);

struct ExperimentOutputs {
    std::filesystem::path directory;
    std::vector<std::string> files;  // relative to directory, in write order
};

// Writes per-cell traces (or the bound / certificate table), summary.csv and
// manifest.txt into spec.output_dir. Deterministic given the spec.
ExperimentOutputs run_experiment(const ExperimentSpec& spec, std::ostream* progress = nullptr);

[[nodiscard]] std::string_view library_version();

}  // namespace oneshot
