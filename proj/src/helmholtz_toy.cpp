#include "oneshot/helmholtz_toy.hpp"

#include "oneshot/bessel.hpp"
#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/text.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace oneshot {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

// Separate stream for measurement noise so that changing noise_level leaves the
// background untouched.
constexpr std::uint64_t kNoiseStream = 0x6a09e667f3bcc909ULL;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Point {
    double x;
    double y;
};

struct Element {
    std::array<int, 3> nodes;
    double area;
    std::array<std::array<double, 3>, 3> stiffness;  // unit coefficient
    int cell;                                         // sigma cell, or -1
};

std::array<std::array<double, 3>, 3> p1_stiffness(const std::array<Point, 3>& p, double& area) {
    const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
    area = 0.5 * std::abs(det);
    std::array<Point, 3> grad{};
    for (int i = 0; i < 3; ++i) {
        const auto& a = p[(i + 1) % 3];
        const auto& b = p[(i + 2) % 3];
        grad[i] = {(a.y - b.y) / det, (b.x - a.x) / det};
    }
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) k[i][j] = area * (grad[i].x * grad[j].x + grad[i].y * grad[j].y);
    }
    return k;
}

double per_inclusion(const std::vector<double>& values, std::size_t q) {
    return values.size() == 1 ? values[0] : values[q];
}

struct Mesh {
    int n = 0;  // intervals per side
    double h = 0.0;
    double radius = 0.0;
    std::vector<Point> nodes;
    std::vector<int> interior;  // node -> interior index or -1
    int n_interior = 0;
    std::vector<int> boundary;  // non-corner boundary nodes, counterclockwise from (-R, -R)
    std::vector<Element> elements;
};

Mesh build_mesh(const CavityConfig& c, double lambda) {
    Mesh m;
    m.radius = c.domain_radius * lambda;
    m.n = static_cast<int>(std::lround(2.0 * c.domain_radius / c.mesh_h));
    m.h = 2.0 * m.radius / m.n;
    const int np = m.n + 1;
    auto id = [np](int i, int j) { return j * np + i; };

    m.nodes.resize(static_cast<std::size_t>(np) * np);
    m.interior.assign(m.nodes.size(), -1);
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
            m.nodes[id(i, j)] = {-m.radius + i * m.h, -m.radius + j * m.h};
            if (i > 0 && i < m.n && j > 0 && j < m.n) m.interior[id(i, j)] = m.n_interior++;
        }
    }
    for (int i = 1; i < m.n; ++i) m.boundary.push_back(id(i, 0));
    for (int j = 1; j < m.n; ++j) m.boundary.push_back(id(m.n, j));
    for (int i = m.n - 1; i >= 1; --i) m.boundary.push_back(id(i, m.n));
    for (int j = m.n - 1; j >= 1; --j) m.boundary.push_back(id(0, j));

    for (int j = 0; j < m.n; ++j) {
        for (int i = 0; i < m.n; ++i) {
            for (const auto& tri : {std::array<int, 3>{id(i, j), id(i + 1, j), id(i + 1, j + 1)},
                                    std::array<int, 3>{id(i, j), id(i + 1, j + 1), id(i, j + 1)}}) {
                Element e{tri, 0.0, {}, -1};
                e.stiffness = p1_stiffness({m.nodes[tri[0]], m.nodes[tri[1]], m.nodes[tri[2]]}, e.area);
                m.elements.push_back(e);
            }
        }
    }
    return m;
}

// Assigns each element to the sigma cell containing its centroid.
void assign_cells(Mesh& m, const CavityConfig& c, double lambda) {
    const int sub = c.sigma_subdivisions;
    const int per_inclusion_cells = 2 * sub * sub;
    for (auto& e : m.elements) {
        const double cx = (m.nodes[e.nodes[0]].x + m.nodes[e.nodes[1]].x + m.nodes[e.nodes[2]].x) / 3.0;
        const double cy = (m.nodes[e.nodes[0]].y + m.nodes[e.nodes[1]].y + m.nodes[e.nodes[2]].y) / 3.0;
        for (std::size_t q = 0; q < c.inclusions.size(); ++q) {
            const auto& inc = c.inclusions[q];
            const double edge = inc.edge * lambda;
            const double s = (cx - (inc.cx * lambda - 0.5 * edge)) / edge * sub;
            const double t = (cy - (inc.cy * lambda - 0.5 * edge)) / edge * sub;
            if (s < 0.0 || t < 0.0 || s >= sub || t >= sub) continue;
            const int a = static_cast<int>(s);
            const int b = static_cast<int>(t);
            const int lower = (s - a) >= (t - b) ? 0 : 1;
            e.cell = static_cast<int>(q) * per_inclusion_cells + (b * sub + a) * 2 + lower;
            break;
        }
    }
}

Point source_position(const CavityConfig& c, double lambda, int i) {
    const double radius = c.source_radius.value_or(c.domain_radius + 0.25) * lambda;
    const double angle = 2.0 * std::numbers::pi * i / c.n_sources;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Matrix dense_block(const SparseMatrix& a, const Mesh& m) {
    Matrix out = Matrix::Zero(m.n_interior, m.n_interior);
    for (int col = 0; col < a.outerSize(); ++col) {
        const int jc = m.interior[col];
        if (jc < 0) continue;
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
            const int ir = m.interior[it.row()];
            if (ir >= 0) out(ir, jc) = it.value();
        }
    }
    return out;
}

// With A12 = L L^T, -delta A11^{-1} A12 is similar to -delta L^T A11^{-1} L, so
// its spectrum is real and a symmetric eigensolve suffices. Empty when A12 is
// not numerically positive definite.
std::optional<double> symmetric_spectral_radius(const Eigen::PartialPivLU<Matrix>& lu11, const Matrix& A12,
                                                double delta) {
    if (delta == 0.0) return 0.0;
    const Eigen::LLT<Matrix> llt(A12);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix L = llt.matrixL();
    Matrix S = L.transpose() * lu11.solve(L);
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) return std::nullopt;
    return delta * eig.eigenvalues().cwiseAbs().maxCoeff();
}

std::string inclusions_to_string(const std::vector<Inclusion>& incs) {
    std::string out;
    for (std::size_t q = 0; q < incs.size(); ++q) {
        if (q) out += "; ";
        out += csv::shortest(incs[q].cx) + ", " + csv::shortest(incs[q].cy) + ", " + csv::shortest(incs[q].edge);
    }
    return out;
}

std::vector<Inclusion> parse_inclusions(std::string_view value) {
    std::vector<Inclusion> out;
    for (auto group : text::split(value, ';')) {
        const auto v = text::parse_double_list("inclusions", group);
        if (v.size() != 3) throw ValidationError("inclusions", "each inclusion is 'cx, cy, edge'");
        out.push_back({v[0], v[1], v[2]});
    }
    return out;
}

}  // namespace

double wavelength(const CavityConfig& config) {
    return 2.0 * std::numbers::pi * std::sqrt(config.sigma0_bar) / config.omega;
}

void validate(const CavityConfig& c) {
    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and > 0");
    };
    positive("omega", c.omega);
    positive("sigma0_bar", c.sigma0_bar);
    positive("domain_radius", c.domain_radius);
    positive("mesh_h", c.mesh_h);
    if (!(c.delta >= 0.0) || !std::isfinite(c.delta)) throw ValidationError("delta", "must be finite and >= 0");
    if (!(c.noise_level >= 0.0) || !std::isfinite(c.noise_level)) {
        throw ValidationError("noise_level", "must be finite and >= 0");
    }
    if (std::lround(2.0 * c.domain_radius / c.mesh_h) < 4) {
        throw ValidationError("mesh_h", "need at least 4 intervals across the domain");
    }
    if (std::lround(2.0 * c.domain_radius / c.mesh_h) > 200) {
        throw ValidationError("mesh_h", "more than 200 intervals per side (dense operators)");
    }
    if (c.sigma_subdivisions < 1) throw ValidationError("sigma_subdivisions", "must be >= 1");
    if (c.n_sources < 1) throw ValidationError("n_sources", "must be >= 1");
    if (c.data_stride < 1) throw ValidationError("data_stride", "must be >= 1");
    if (c.inclusions.empty()) throw ValidationError("inclusions", "at least one inclusion is required");

    // Elements touching the boundary must stay in the background so that the
    // boundary flux of the scattered field has no source term.
    const double n = std::lround(2.0 * c.domain_radius / c.mesh_h);
    const double h = 2.0 * c.domain_radius / n;
    const double limit = c.domain_radius - h;
    for (std::size_t q = 0; q < c.inclusions.size(); ++q) {
        const auto& inc = c.inclusions[q];
        positive("inclusions", inc.edge);
        const double half = 0.5 * inc.edge;
        if (std::abs(inc.cx) + half >= limit || std::abs(inc.cy) + half >= limit) {
            throw ValidationError("inclusions", "inclusion " + std::to_string(q + 1) +
                                                    " is not strictly inside the domain (one cell away from the boundary)");
        }
        for (std::size_t r = 0; r < q; ++r) {
            const auto& o = c.inclusions[r];
            const double reach = 0.5 * (inc.edge + o.edge);
            if (std::abs(inc.cx - o.cx) < reach && std::abs(inc.cy - o.cy) < reach) {
                throw ValidationError("inclusions", "inclusions " + std::to_string(r + 1) + " and " +
                                                        std::to_string(q + 1) + " overlap");
            }
        }
    }

    for (const auto* list : {&c.sigma_exact, &c.sigma_init}) {
        const char* field = list == &c.sigma_exact ? "sigma_exact" : "sigma_init";
        if (list->size() != 1 && list->size() != c.inclusions.size()) {
            throw ValidationError(field, "give one value or one per inclusion");
        }
        for (double v : *list) {
            if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
        }
    }

    if (c.source_radius) positive("source_radius", *c.source_radius);
    for (int i = 0; i < c.n_sources; ++i) {
        const auto p = source_position(c, 1.0, i);
        if (std::max(std::abs(p.x), std::abs(p.y)) <= c.domain_radius) {
            throw ValidationError("source_radius", "source " + std::to_string(i + 1) + " lies inside the domain");
        }
    }
}

CavityOperators assemble(const CavityConfig& config) {
    validate(config);
    const double lambda = wavelength(config);
    const double omega2 = config.omega * config.omega;

    Mesh mesh = build_mesh(config, lambda);
    assign_cells(mesh, config, lambda);
    const int n_sigma = static_cast<int>(config.inclusions.size()) * 2 * config.sigma_subdivisions *
                        config.sigma_subdivisions;

    CavityOperators ops;
    MeshSummary& summary = ops.mesh;
    summary.intervals = mesh.n;
    summary.h = mesh.h / lambda;
    summary.n_elements = static_cast<int>(mesh.elements.size());
    summary.n_u = mesh.n_interior;
    summary.n_boundary = static_cast<int>(mesh.boundary.size());
    summary.n_sigma = n_sigma;
    summary.n_sources = config.n_sources;
    summary.elements_per_cell.assign(n_sigma, 0);
    for (const auto& e : mesh.elements) {
        if (e.cell >= 0) ++summary.elements_per_cell[e.cell];
    }
    for (int j = 0; j < n_sigma; ++j) {
        if (summary.elements_per_cell[j] == 0) {
            throw ValidationError("sigma_subdivisions", "sigma cell " + std::to_string(j) +
                                                            " contains no element; refine mesh_h or reduce subdivisions");
        }
    }

    // sigma_r per element
    std::mt19937_64 rng(config.rng_seed);
    std::vector<double> sigma_r(mesh.elements.size(), 1.0);
    if (config.random_background) {
        for (auto& v : sigma_r) v = unit_uniform(rng);
    }

    Triplets k_unit;
    Triplets k_r;
    Triplets mass;
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& el = mesh.elements[e];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                k_unit.emplace_back(el.nodes[a], el.nodes[b], el.stiffness[a][b]);
                k_r.emplace_back(el.nodes[a], el.nodes[b], sigma_r[e] * el.stiffness[a][b]);
                mass.emplace_back(el.nodes[a], el.nodes[b], el.area / 12.0 * (a == b ? 2.0 : 1.0));
            }
        }
    }
    const auto n_nodes = static_cast<Eigen::Index>(mesh.nodes.size());
    SparseMatrix K(n_nodes, n_nodes), Kr(n_nodes, n_nodes), Ms(n_nodes, n_nodes);
    K.setFromTriplets(k_unit.begin(), k_unit.end());
    Kr.setFromTriplets(k_r.begin(), k_r.end());
    Ms.setFromTriplets(mass.begin(), mass.end());
    const SparseMatrix A1_full = config.sigma0_bar * K + config.delta * Kr - omega2 * Ms;

    ops.A11 = dense_block(SparseMatrix(config.sigma0_bar * K - omega2 * Ms), mesh);
    ops.A12 = dense_block(Kr, mesh);

    {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(ops.A11, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed on the background operator");
        const Vector mags = eig.eigenvalues().cwiseAbs();
        if (!(mags.minCoeff() > 1e-8 * mags.maxCoeff())) {
            throw SingularSystemError("omega^2 is (numerically) a Dirichlet eigenvalue of the discrete background operator");
        }
    }

    // Incident fields: Dirichlet data Y0(omega |x - y_i|) lifted with the full operator.
    const Eigen::PartialPivLU<Matrix> lu1(ops.A11 + config.delta * ops.A12);
    const int n_u = mesh.n_interior;
    for (int s = 0; s < config.n_sources; ++s) {
        const Point y = source_position(config, lambda, s);
        Vector u0 = Vector::Zero(n_nodes);
        for (Eigen::Index v = 0; v < n_nodes; ++v) {
            if (mesh.interior[v] >= 0) continue;
            u0(v) = bessel_y0(config.omega * std::hypot(mesh.nodes[v].x - y.x, mesh.nodes[v].y - y.y));
        }
        const Vector lifted = A1_full * u0;
        Vector rhs(n_u);
        for (Eigen::Index v = 0; v < n_nodes; ++v) {
            if (mesh.interior[v] >= 0) rhs(mesh.interior[v]) = -lifted(v);
        }
        const Vector u0_interior = lu1.solve(rhs);
        for (Eigen::Index v = 0; v < n_nodes; ++v) {
            if (mesh.interior[v] >= 0) u0(v) = u0_interior(mesh.interior[v]);
        }

        Matrix A2 = Matrix::Zero(n_u, n_sigma);
        for (const auto& el : mesh.elements) {
            if (el.cell < 0) continue;
            for (int a = 0; a < 3; ++a) {
                const int row = mesh.interior[el.nodes[a]];
                if (row < 0) continue;
                double acc = 0.0;
                for (int b = 0; b < 3; ++b) acc += el.stiffness[a][b] * u0(el.nodes[b]);
                A2(row, el.cell) += acc;
            }
        }
        ops.A2.push_back(std::move(A2));
    }

    // Conormal flux at boundary node b: (A1 u)_b / h, the interior equations'
    // residual lifted to the boundary (u vanishes there and sigma does not reach it).
    std::vector<int> measured;
    for (std::size_t i = 0; i < mesh.boundary.size(); i += config.data_stride) measured.push_back(mesh.boundary[i]);
    const Eigen::SparseMatrix<double, Eigen::RowMajor> A1_rows = A1_full;
    ops.H = Matrix::Zero(static_cast<Eigen::Index>(measured.size()), n_u);
    for (std::size_t r = 0; r < measured.size(); ++r) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A1_rows, measured[r]); it; ++it) {
            const int col = mesh.interior[it.col()];
            if (col >= 0) ops.H(static_cast<Eigen::Index>(r), col) = it.value() / mesh.h;
        }
    }
    summary.n_g = static_cast<int>(measured.size());
    return ops;
}

GeneratedCavity generate(const CavityConfig& config) {
    CavityOperators ops = assemble(config);
    const int n_u = ops.mesh.n_u;
    const int n_sigma = ops.mesh.n_sigma;
    const int n_g = ops.mesh.n_g;

    const Eigen::PartialPivLU<Matrix> lu11(ops.A11);
    Matrix B0 = config.delta == 0.0 ? Matrix::Zero(n_u, n_u) : Matrix(-config.delta * lu11.solve(ops.A12));
    Matrix M(static_cast<Eigen::Index>(n_u) * config.n_sources, n_sigma);
    for (int s = 0; s < config.n_sources; ++s) {
        M.middleRows(static_cast<Eigen::Index>(s) * n_u, n_u) = lu11.solve(ops.A2[s]);
    }

    Vector exact(n_sigma);
    Vector init(n_sigma);
    const int cells_per_inclusion = 2 * config.sigma_subdivisions * config.sigma_subdivisions;
    for (int j = 0; j < n_sigma; ++j) {
        exact(j) = per_inclusion(config.sigma_exact, static_cast<std::size_t>(j / cells_per_inclusion));
        init(j) = per_inclusion(config.sigma_init, static_cast<std::size_t>(j / cells_per_inclusion));
    }

    ProblemOptions options;
    options.spectral_radius = symmetric_spectral_radius(lu11, ops.A12, config.delta);
    auto problem = LinearInverseProblem::block_replicated(std::move(B0), std::move(M), std::move(ops.H),
                                                          Vector::Zero(static_cast<Eigen::Index>(n_u) * config.n_sources),
                                                          config.n_sources, options);

    const Vector g = problem.apply_H(solve_state_exact(problem, exact));
    std::vector<Vector> clean;
    for (int s = 0; s < config.n_sources; ++s) clean.emplace_back(g.segment(static_cast<Eigen::Index>(s) * n_g, n_g));

    std::vector<Vector> noisy = clean;
    if (config.noise_level > 0.0) {
        std::mt19937_64 noise_rng(config.rng_seed ^ kNoiseStream);
        for (auto& v : noisy) {
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const double eps = config.noise_level * (2.0 * unit_uniform(noise_rng) - 1.0);
                v(i) += eps * v(i);
            }
        }
    }

    return GeneratedCavity{config, std::move(problem), std::move(exact), std::move(init),
                           std::move(clean), std::move(noisy), std::move(ops.mesh)};
}

Vector stack(const std::vector<Vector>& parts) {
    Eigen::Index total = 0;
    for (const auto& p : parts) total += p.size();
    Vector out(total);
    Eigen::Index offset = 0;
    for (const auto& p : parts) {
        out.segment(offset, p.size()) = p;
        offset += p.size();
    }
    return out;
}

Objective multi_source_objective(const GeneratedCavity& cavity, double alpha, bool use_noisy) {
    return Objective(cavity.problem, stack(use_noisy ? cavity.data_noisy : cavity.data_clean), alpha);
}

LinearInverseProblem single_source_problem(const GeneratedCavity& cavity, int source) {
    const auto& p = cavity.problem;
    if (source < 0 || source >= p.replicas()) throw DimensionError("source index out of range");
    const auto nb = p.block_size();
    return LinearInverseProblem(p.B_block(), p.M().middleRows(static_cast<Eigen::Index>(source) * nb, nb),
                                p.H_block(), Vector::Zero(nb));
}

bool set_cavity_field(CavityConfig& c, std::string_view key, std::string_view value) {
    const std::string field(key);
    if (key == "omega") c.omega = text::parse_double(field, value);
    else if (key == "sigma0_bar") c.sigma0_bar = text::parse_double(field, value);
    else if (key == "delta") c.delta = text::parse_double(field, value);
    else if (key == "mesh_h") c.mesh_h = text::parse_double(field, value);
    else if (key == "domain_radius") c.domain_radius = text::parse_double(field, value);
    else if (key == "inclusions") c.inclusions = parse_inclusions(value);
    else if (key == "sigma_subdivisions") c.sigma_subdivisions = text::parse_int(field, value);
    else if (key == "n_sources") c.n_sources = text::parse_int(field, value);
    else if (key == "source_radius") {
        if (text::trim(value) == "auto") c.source_radius.reset();
        else c.source_radius = text::parse_double(field, value);
    }
    else if (key == "sigma_exact") c.sigma_exact = text::parse_double_list(field, value);
    else if (key == "sigma_init") c.sigma_init = text::parse_double_list(field, value);
    else if (key == "noise_level") c.noise_level = text::parse_double(field, value);
    else if (key == "rng_seed") c.rng_seed = text::parse_u64(field, value);
    else if (key == "random_background") c.random_background = text::parse_bool(field, value);
    else if (key == "data_stride") c.data_stride = text::parse_int(field, value);
    else return false;
    return true;
}

std::vector<std::pair<std::string, std::string>> cavity_fields(const CavityConfig& c) {
    return {
        {"omega", csv::shortest(c.omega)},
        {"sigma0_bar", csv::shortest(c.sigma0_bar)},
        {"delta", csv::shortest(c.delta)},
        {"mesh_h", csv::shortest(c.mesh_h)},
        {"domain_radius", csv::shortest(c.domain_radius)},
        {"inclusions", inclusions_to_string(c.inclusions)},
        {"sigma_subdivisions", std::to_string(c.sigma_subdivisions)},
        {"n_sources", std::to_string(c.n_sources)},
        {"source_radius", c.source_radius ? csv::shortest(*c.source_radius) : "auto"},
        {"sigma_exact", text::join(c.sigma_exact)},
        {"sigma_init", text::join(c.sigma_init)},
        {"noise_level", csv::shortest(c.noise_level)},
        {"rng_seed", std::to_string(c.rng_seed)},
        {"random_background", c.random_background ? "true" : "false"},
        {"data_stride", std::to_string(c.data_stride)},
    };
}

std::string cavity_manifest(const CavityConfig& config, const MeshSummary* mesh) {
    std::ostringstream out;
    out << "# oneshot cavity\n";
    for (const auto& [k, v] : cavity_fields(config)) out << k << " = " << v << '\n';
    if (mesh) {
        out << "# intervals = " << mesh->intervals << '\n'
            << "# n_u_per_source = " << mesh->n_u << '\n'
            << "# n_u = " << static_cast<long>(mesh->n_u) * mesh->n_sources << '\n'
            << "# n_g_per_source = " << mesh->n_g << '\n'
            << "# n_sigma = " << mesh->n_sigma << '\n'
            << "# n_elements = " << mesh->n_elements << '\n';
    }
    return out.str();
}

CavityConfig parse_cavity_manifest(std::string_view body) {
    CavityConfig config;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= body.size()) {
        auto end = body.find('\n', start);
        if (end == std::string_view::npos) end = body.size();
        ++line_no;
        const auto line = text::trim(body.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const auto key = text::trim(line.substr(0, eq));
        if (!set_cavity_field(config, key, text::trim(line.substr(eq + 1)))) {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    validate(config);
    return config;
}

}  // namespace oneshot
