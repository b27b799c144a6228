#pragma once

// Desk-scale inverse conductivity problem in a square cavity [-R, R]^2:
//
//     div(sigma0 grad u) + omega^2 u = div(sigma grad u0),   u = 0 on the boundary,
//
// with incident fields u0 (Dirichlet data Y0(omega |x - y_i|)) and Neumann
// data g = sigma0 du/dnu. P1 elements on a structured triangulation (each
// square cell cut along its main diagonal), sigma piecewise constant on the
// triangles of a coarse grid inside the inclusions.
//
// Lengths (mesh_h, domain_radius, inclusions, source_radius) are in units of the
// background wavelength 2 pi sqrt(sigma0_bar) / omega.

#include "oneshot/linear_forward.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oneshot {

struct Inclusion {
    double cx = 0.0;
    double cy = 0.0;
    double edge = 0.0;

    friend bool operator==(const Inclusion&, const Inclusion&) = default;
};

struct CavityConfig {
    double omega = 6.283185307179586;
    double sigma0_bar = 1.0;
    double delta = 0.01;
    double mesh_h = 0.1;
    double domain_radius = 1.0;  // half side of the square
    std::vector<Inclusion> inclusions{{-0.4, 0.3, 0.25}, {0.35, 0.35, 0.25}, {0.0, -0.4, 0.25}};
    // Each inclusion is split into m x m squares, each cut into two triangles:
    // n_sigma = 2 m^2 per inclusion.
    int sigma_subdivisions = 1;
    int n_sources = 6;
    std::optional<double> source_radius;  // default R + wavelength / 4
    // One value for all inclusions, or one per inclusion.
    std::vector<double> sigma_exact{10.0};
    std::vector<double> sigma_init{12.0};
    double noise_level = 0.0;
    std::uint64_t rng_seed = 1;
    bool random_background = true;
    // Every data_stride-th boundary node (corners excluded) carries a measurement.
    int data_stride = 2;

    friend bool operator==(const CavityConfig&, const CavityConfig&) = default;
};

[[nodiscard]] double wavelength(const CavityConfig& config);

// Throws ValidationError naming the offending field.
void validate(const CavityConfig& config);

struct MeshSummary {
    int intervals = 0;       // per side
    double h = 0.0;          // actual spacing 2R / intervals
    int n_elements = 0;
    int n_u = 0;             // interior nodes, one source
    int n_boundary = 0;      // boundary nodes excluding corners
    int n_g = 0;             // measurements, one source
    int n_sigma = 0;
    int n_sources = 0;
    std::vector<int> elements_per_cell;
};

// Discrete operators on the interior nodes of one source's state space.
struct CavityOperators {
    Matrix A11;              // sigma0_bar stiffness - omega^2 mass
    Matrix A12;              // sigma_r stiffness
    std::vector<Matrix> A2;  // per source, n_u x n_sigma
    Matrix H;                // n_g x n_u
    MeshSummary mesh;
};

// Throws ValidationError, or SingularSystemError near a discrete Dirichlet eigenvalue.
[[nodiscard]] CavityOperators assemble(const CavityConfig& config);

struct GeneratedCavity {
    CavityConfig config;
    // B = I_6 (x) B0, B0 = -delta A11^{-1} A12; M = [A11^{-1} A2_1; ...]; F = 0.
    LinearInverseProblem problem;
    Vector exact_sigma;
    Vector init_sigma;
    std::vector<Vector> data_clean;  // one per source
    std::vector<Vector> data_noisy;
    MeshSummary mesh;
};

// Throws ValidationError for bad configs, SingularSystemError near a discrete
// Dirichlet eigenvalue, InvariantError if rho(B) >= 1.
[[nodiscard]] GeneratedCavity generate(const CavityConfig& config);

// Stacked objective: cost = sum_i 1/2 |H u_i - g_i|^2 + alpha/2 |sigma|^2.
[[nodiscard]] Objective multi_source_objective(const GeneratedCavity& cavity, double alpha, bool use_noisy);

// Problem for source i alone.
[[nodiscard]] LinearInverseProblem single_source_problem(const GeneratedCavity& cavity, int source);

// Stacked vector of per-source data.
[[nodiscard]] Vector stack(const std::vector<Vector>& parts);

// key = value text; unknown keys are rejected by parse. Lines starting with '#'
// are comments (the generator records dimensions there).
[[nodiscard]] std::string cavity_manifest(const CavityConfig& config, const MeshSummary* mesh = nullptr);
[[nodiscard]] CavityConfig parse_cavity_manifest(std::string_view text);

// Shared with the experiment parser. Returns false for unknown keys, throws
// ValidationError for malformed values. "inclusion" appends.
bool set_cavity_field(CavityConfig& config, std::string_view key, std::string_view value);
// Serialized key/value pairs in a fixed order.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> cavity_fields(const CavityConfig& config);

}  // namespace oneshot
