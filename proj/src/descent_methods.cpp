#include "oneshot/descent_methods.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 4> kSchemeNames{{
    {SchemeKind::UsualGD, "UsualGD"},
    {SchemeKind::SemiImplicitGD, "SemiImplicitGD"},
    {SchemeKind::KStepOneShot, "KStepOneShot"},
    {SchemeKind::SemiImplicitKStepOneShot, "SemiImplicitKStepOneShot"},
}};

constexpr double kDivergenceCost = 1e12;

void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau", "must be finite and > 0");
}

// sigma - tau M^T p, the common explicit part of every update.
Vector explicit_part(const Objective& objective, const Vector& sigma, const Vector& p, double tau) {
    return sigma - tau * (objective.problem().M().transpose() * p);
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
    for (const auto& [k, name] : kSchemeNames) {
        if (k == kind) return name;
    }
    return "?";
}

SchemeKind scheme_from_string(std::string_view name) {
    for (const auto& [k, n] : kSchemeNames) {
        if (n == name) return k;
    }
    throw ValidationError("scheme", "unknown scheme '" + std::string(name) + "'");
}

bool is_one_shot(SchemeKind kind) {
    return kind == SchemeKind::KStepOneShot || kind == SchemeKind::SemiImplicitKStepOneShot;
}

std::string_view to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Running: return "running";
        case RunStatus::MaxOuter: return "max_outer";
        case RunStatus::CostTolerance: return "converged_cost";
        case RunStatus::StepTolerance: return "converged_step";
        case RunStatus::Diverged: return "diverged";
    }
    return "?";
}

void validate(const RunConfig& config, const LinearInverseProblem& problem) {
    check_tau(config.tau);
    if (config.k < 1) throw ValidationError("k", "must be >= 1");
    if (config.max_outer < 1) throw ValidationError("max_outer", "must be >= 1");
    if (!(config.tol_cost >= 0.0)) throw ValidationError("tol_cost", "must be >= 0");
    if (!(config.tol_step >= 0.0)) throw ValidationError("tol_step", "must be >= 0");
    if (config.sigma0.size() != problem.n_sigma()) throw ValidationError("sigma0", "length must be n_sigma");
    if (config.u0 && config.u0->size() != problem.n_u()) throw ValidationError("u0", "length must be n_u");
    if (config.p0 && config.p0->size() != problem.n_u()) throw ValidationError("p0", "length must be n_u");
    if (config.sigma_ref && config.sigma_ref->size() != problem.n_sigma()) {
        throw ValidationError("sigma_ref", "length must be n_sigma");
    }
}

IterationState step_usual_gd(const Objective& objective, const IterationState& state, double tau) {
    check_tau(tau);
    const auto& problem = objective.problem();
    Vector u = solve_state_exact(problem, state.sigma);
    Vector p = solve_adjoint_exact(problem, u, objective.g());
    Vector sigma = explicit_part(objective, state.sigma, p, tau) - tau * objective.alpha() * state.sigma;
    return {std::move(sigma), std::move(u), std::move(p)};
}

IterationState step_semi_implicit_gd(const Objective& objective, const IterationState& state, double tau) {
    check_tau(tau);
    const auto& problem = objective.problem();
    Vector u = solve_state_exact(problem, state.sigma);
    Vector p = solve_adjoint_exact(problem, u, objective.g());
    Vector sigma = explicit_part(objective, state.sigma, p, tau) / (1.0 + tau * objective.alpha());
    return {std::move(sigma), std::move(u), std::move(p)};
}

IterationState step_k_shot(const Objective& objective, const IterationState& state, double tau, int k) {
    check_tau(tau);
    Vector sigma = explicit_part(objective, state.sigma, state.p, tau) - tau * objective.alpha() * state.sigma;
    auto [u, p] = fixed_point_sweep(objective.problem(), state, sigma, objective.g(), k);
    return {std::move(sigma), std::move(u), std::move(p)};
}

IterationState step_semi_implicit_k_shot(const Objective& objective, const IterationState& state, double tau,
                                         int k) {
    check_tau(tau);
    Vector sigma = explicit_part(objective, state.sigma, state.p, tau) / (1.0 + tau * objective.alpha());
    auto [u, p] = fixed_point_sweep(objective.problem(), state, sigma, objective.g(), k);
    return {std::move(sigma), std::move(u), std::move(p)};
}

IterationState step(const Objective& objective, const IterationState& state, SchemeKind scheme, double tau, int k) {
    switch (scheme) {
        case SchemeKind::UsualGD: return step_usual_gd(objective, state, tau);
        case SchemeKind::SemiImplicitGD: return step_semi_implicit_gd(objective, state, tau);
        case SchemeKind::KStepOneShot: return step_k_shot(objective, state, tau, k);
        case SchemeKind::SemiImplicitKStepOneShot: return step_semi_implicit_k_shot(objective, state, tau, k);
    }
    throw ValidationError("scheme", "unhandled scheme");
}

ConvergenceTrace run(const Objective& objective, const RunConfig& config) {
    const auto& problem = objective.problem();
    validate(config, problem);
    const auto start = std::chrono::steady_clock::now();

    std::optional<Vector> sigma_ref = config.sigma_ref;
    if (!sigma_ref) {
        try {
            sigma_ref = regularized_solution(objective);
        } catch (const RankDeficiencyError&) {
        }
    }
    const double ref_norm = sigma_ref ? sigma_ref->norm() : 0.0;

    ConvergenceTrace trace;
    IterationState state = initial_state(problem, config.sigma0);
    if (config.u0) state.u = *config.u0;
    if (config.p0) state.p = *config.p0;

    const long long inner_per_outer = is_one_shot(config.scheme) ? config.k : 1;

    auto record = [&](int n) {
        TraceRecord r;
        r.n = n;
        r.acc_inner = inner_per_outer * n;
        if (!state.sigma.allFinite()) {
            r.cost = std::numeric_limits<double>::infinity();
            r.grad_norm = std::numeric_limits<double>::infinity();
        } else {
            // Monitoring goes through the cached reduced operator: same J and
            // grad J as the state/adjoint solves, at a fraction of the cost.
            const Vector residual = problem.reduced() * state.sigma + problem.data_offset() - objective.g();
            r.cost = 0.5 * residual.squaredNorm() + 0.5 * objective.alpha() * state.sigma.squaredNorm();
            r.grad_norm = (problem.reduced().transpose() * residual + objective.alpha() * state.sigma).norm();
            if (sigma_ref) {
                const double diff = (state.sigma - *sigma_ref).norm();
                r.rel_err_sigma = ref_norm > 0.0 ? diff / ref_norm : diff;
            }
        }
        if (config.record_wall_time) {
            r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        trace.records.push_back(r);
        return r;
    };

    for (int n = 0;; ++n) {
        const TraceRecord r = record(n);
        if (!std::isfinite(r.cost) || r.cost > kDivergenceCost) {
            trace.status = RunStatus::Diverged;
            break;
        }
        if (r.cost <= config.tol_cost) {
            trace.status = RunStatus::CostTolerance;
            break;
        }
        if (n == config.max_outer) {
            trace.status = RunStatus::MaxOuter;
            break;
        }
        IterationState next = step(objective, state, config.scheme, config.tau, config.k);
        bool small_step = config.tol_step > 0.0 &&
                          (next.sigma - state.sigma).norm() <= config.tol_step * (1.0 + state.sigma.norm());
        if (small_step && is_one_shot(config.scheme)) {
            // sigma can sit still for a step while u and p are far from
            // converged (e.g. from p0 = 0), so the one-shot state must settle too.
            const double du = (next.u - state.u).norm() + (next.p - state.p).norm();
            small_step = du <= config.tol_step * (1.0 + state.u.norm() + state.p.norm());
        }
        state = std::move(next);
        if (small_step) {
            record(n + 1);
            trace.status = RunStatus::StepTolerance;
            break;
        }
    }
    trace.final_state = std::move(state);
    return trace;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
    out << "n,cost,grad_norm,rel_err_sigma,acc_inner,wall_ms,status\n";
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        const RunStatus status = i + 1 == trace.records.size() ? trace.status : RunStatus::Running;
        out << r.n << ',' << csv::fixed17(r.cost) << ',' << csv::fixed17(r.grad_norm) << ','
            << csv::fixed17(r.rel_err_sigma) << ',' << r.acc_inner << ',' << csv::fixed17(r.wall_ms) << ','
            << to_string(status) << '\n';
    }
}

}  // namespace oneshot
