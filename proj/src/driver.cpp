#include "etstir/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "etstir/errors.hpp"
#include "etstir/transport.hpp"

namespace etstir {

void CaseConfig::validate() const {
    geometry.validate();
    if (nx < 4 || ny < 4) throw ConfigError("grid resolution must be at least 4x4");
    if (inlet_mean < 0.0) throw ConfigError("inlet_mean must be non-negative");
    if (!(steady_fraction > 0.0) || !(steady_fraction < 1.0))
        throw ConfigError("steady_fraction must lie in (0, 1)");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
    if (drive.v_rms < 0.0) throw ConfigError("v_rms must be non-negative");
    if (drive.v_rms > 0.0 && !(drive.frequency > 0.0))
        throw ConfigError("frequency must be positive when driven");
    if (!(picard_tol > 0.0) || picard_max < 1)
        throw ConfigError("invalid picard settings");
    if (!(flow_tol > 0.0)) throw ConfigError("flow_tol must be positive");
    if (reaction.k_a < 0.0 || reaction.k_d < 0.0 || reaction.b0 < 0.0 ||
        reaction.a_inlet < 0.0)
        throw ConfigError("reaction constants must be non-negative");
}

CoupledFields couple_steady_fields(const Grid& grid, const CaseConfig& cfg) {
    CoupledFields cf;
    cf.potential = solve_potential(grid, cfg.drive.v_rms);
    cf.e = electric_field(cf.potential, grid);
    cf.joule = joule_heating(cf.e, grid, cfg.props);

    ThermalOptions topt;
    topt.isothermal_walls = cfg.isothermal_walls;

    BodyForceField zero;
    zero.fx = Field2D(grid.nx + 1, grid.ny, 0.0);
    zero.fy = Field2D(grid.nx, grid.ny + 1, 0.0);
    cf.force = zero;
    cf.flow = solve_flow(grid, zero, cfg.inlet_mean, cfg.props, cfg.flow_tol,
                         &cf.flow_info);

    if (cf.joule.max() <= 0.0) {
        // unheated: nothing feeds back, one pass settles everything
        cf.temperature = solve_temperature(grid, cf.joule, &cf.flow, cfg.props,
                                           1e-8, topt, &cf.thermal_balance);
        cf.picard_iterations = 1;
        return cf;
    }

    if (!cfg.thermal_convection) {
        // conduction-only temperature never sees the flow, so the chain
        // is feed-forward and one pass is exact
        cf.temperature = solve_temperature(grid, cf.joule, nullptr, cfg.props,
                                           1e-8, topt, &cf.thermal_balance);
        cf.force = compute_et_force(cf.e, cf.temperature, grid, cfg.props,
                                    cfg.drive);
        cf.flow = solve_flow(grid, cf.force, cfg.inlet_mean, cfg.props,
                             cfg.flow_tol, &cf.flow_info, &cf.flow);
        cf.picard_iterations = 1;
        return cf;
    }

    double prev_umax = cf.flow.u_max_abs();
    double prev_dt_max = 0.0;
    std::ostringstream history;
    for (int iter = 1; iter <= cfg.picard_max; ++iter) {
        cf.temperature = solve_temperature(grid, cf.joule, &cf.flow, cfg.props,
                                           1e-8, topt, &cf.thermal_balance);
        cf.force = compute_et_force(cf.e, cf.temperature, grid, cfg.props,
                                    cfg.drive);
        cf.flow = solve_flow(grid, cf.force, cfg.inlet_mean, cfg.props,
                             cfg.flow_tol, &cf.flow_info, &cf.flow);

        const double dt_max = cf.temperature.max() - cfg.props.t_ref;
        const double umax = cf.flow.u_max_abs();
        const double rel_u =
            std::abs(umax - prev_umax) / std::max(umax, 1e-300);
        const double rel_t =
            std::abs(dt_max - prev_dt_max) / std::max(dt_max, 1e-300);
        history << "iter " << iter << " u_max " << umax << " dT_max " << dt_max
                << " rel_u " << rel_u << " rel_T " << rel_t << "\n";
        cf.picard_iterations = iter;
        if (rel_u < cfg.picard_tol && rel_t < cfg.picard_tol) return cf;
        prev_umax = umax;
        prev_dt_max = dt_max;
    }
    throw SolverError("field coupling did not reach a fixed point in " +
                      std::to_string(cfg.picard_max) + " iterations:\n" +
                      history.str());
}

std::optional<double> detect_steady_state(const std::vector<SamplePoint>& series,
                                          double ab_eq, double fraction) {
    if (series.empty()) throw SolverError("steady-state scan of an empty series");
    if (ab_eq <= 0.0) return std::nullopt;
    const double target = fraction * ab_eq;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k].mean_coverage < target) continue;
        if (k == 0) return series[0].t;
        const SamplePoint& lo = series[k - 1];
        const SamplePoint& hi = series[k];
        const double span = hi.mean_coverage - lo.mean_coverage;
        if (span <= 0.0) return hi.t;
        return lo.t + (hi.t - lo.t) * (target - lo.mean_coverage) / span;
    }
    return std::nullopt;
}

namespace {

void fluid_min_max(const Grid& grid, const Field2D& f, double& mn, double& mx) {
    mn = 1e300;
    mx = -1e300;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.is_fluid(i, j)) {
                mn = std::min(mn, f(i, j));
                mx = std::max(mx, f(i, j));
            }
}

} // namespace

CaseResult run_case(const CaseConfig& cfg, CoupledFields* fields,
                    Field2D* a_final) {
    cfg.validate();
    const auto wall_start = std::chrono::steady_clock::now();

    CaseResult res;
    res.config = cfg;
    res.ab_eq = cfg.reaction.ab_eq();

    const Grid grid = build_grid(cfg.geometry, cfg.nx, cfg.ny);
    CoupledFields cf = couple_steady_fields(grid, cfg);

    res.temperature_rise_max = cf.temperature.max() - cfg.props.t_ref;
    res.u_max = cf.flow.u_max_abs();
    res.v_down_max = cf.flow.v_down_max();
    res.force_max = cf.force.max_abs();
    res.picard_iterations = cf.picard_iterations;

    res.audit.thermal_imbalance = cf.thermal_balance.relative_imbalance;
    res.audit.divergence_max = cf.flow_info.max_divergence;
    const double u_scale = std::max(res.u_max, cfg.inlet_mean);
    res.audit.divergence_scale = u_scale / std::min(grid.dx, grid.dy);
    fluid_min_max(grid, cf.potential.phi, res.audit.phi_min, res.audit.phi_max);
    double t_min, t_max_field;
    fluid_min_max(grid, cf.temperature, t_min, t_max_field);
    res.audit.temperature_min = t_min;

    // transport on the frozen flow
    Field2D a(cfg.nx, cfg.ny, cfg.reaction.a_inlet);
    std::vector<double> ab(grid.reactive_faces.size(), 0.0);
    const double target = cfg.steady_fraction * res.ab_eq;

    double amn, amx;
    fluid_min_max(grid, a, amn, amx);
    res.audit.a_min = amn;
    res.audit.a_max = amx;
    res.series.push_back({0.0, 0.0, amn, amx});

    double t = 0.0;
    double dt_cur = cfg.dt;
    double next_sample = cfg.sample_dt;
    constexpr int kMaxHalvings = 10;
    Field2D a_prev;        // state one accepted step back
    double dt_prev = 0.0;  // that step's size; 0 until one step lands
    Field2D extrap;
    while (t < cfg.t_max - 1e-9) {
        const double dt_step = std::min(dt_cur, cfg.t_max - t);
        // between two equal steps the transient is nearly linear in time,
        // so 2a - a_prev seeds the bulk solve much closer than a alone
        const Field2D* seed = nullptr;
        if (dt_prev > 0.0 && std::abs(dt_step - dt_prev) <= 1e-12 * dt_prev) {
            extrap = a;
            for (std::size_t k = 0; k < extrap.v.size(); ++k)
                extrap.v[k] = 2.0 * a.v[k] - a_prev.v[k];
            seed = &extrap;
        }
        TransportStepResult step = transport_step(grid, &cf.flow, a, ab,
                                                  cfg.reaction, cfg.props,
                                                  dt_step, {}, seed);
        if (step.audit.imbalance_rel > 1e-3) {
            if (res.audit.dt_halvings >= kMaxHalvings)
                throw SolverError(
                    "species balance failed to close after halving dt to " +
                    std::to_string(dt_cur));
            dt_cur *= 0.5;
            ++res.audit.dt_halvings;
            continue; // retry the step from the same state
        }
        a_prev = std::move(a);
        a = std::move(step.a);
        ab = std::move(step.ab);
        dt_prev = dt_step;
        t += dt_step;
        res.audit.species_imbalance_max = std::max(
            res.audit.species_imbalance_max, step.audit.imbalance_rel);
        res.audit.surface_clamps += step.clamped;

        if (t + 1e-9 >= next_sample || t >= cfg.t_max - 1e-9) {
            while (next_sample <= t + 1e-9) next_sample += cfg.sample_dt;
            const double cov =
                grid.reactive_faces.empty() ? 0.0 : mean_coverage(grid, ab);
            fluid_min_max(grid, a, amn, amx);
            res.audit.a_min = std::min(res.audit.a_min, amn);
            res.audit.a_max = std::max(res.audit.a_max, amx);
            res.series.push_back({t, cov, amn, amx});
            if (target > 0.0 && cov >= target) break; // bracketed the crossing
        }
    }
    res.dt_final = dt_cur;
    res.t_steady = detect_steady_state(res.series, res.ab_eq,
                                       cfg.steady_fraction);

    if (fields) *fields = std::move(cf);
    if (a_final) *a_final = std::move(a);
    res.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - wall_start)
                           .count();
    return res;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::electrode_width: return "electrode_width";
        case SweepAxis::gap: return "gap";
        case SweepAxis::frequency: return "frequency";
        case SweepAxis::voltage: return "voltage";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "electrode_width") return SweepAxis::electrode_width;
    if (s == "gap") return SweepAxis::gap;
    if (s == "frequency") return SweepAxis::frequency;
    if (s == "voltage") return SweepAxis::voltage;
    throw ConfigError("unknown sweep axis: " + s);
}

CaseConfig apply_axis_value(const CaseConfig& base, SweepAxis axis,
                            double value) {
    CaseConfig cfg = base;
    switch (axis) {
        case SweepAxis::electrode_width: cfg.geometry.electrode_width = value; break;
        case SweepAxis::gap: cfg.geometry.electrode_gap = value; break;
        case SweepAxis::frequency: cfg.drive.frequency = value; break;
        case SweepAxis::voltage: cfg.drive.v_rms = value; break;
    }
    return cfg;
}

std::vector<SweepRow> run_sweep(const CaseConfig& base, SweepAxis axis,
                                const std::vector<double>& values, int workers) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<SweepRow> rows(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) rows[k].value = values[k];

    const int n = static_cast<int>(values.size());
    const int nw = std::max(1, std::min(workers, n));
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= n) return;
            try {
                const CaseConfig cfg = apply_axis_value(base, axis, values[k]);
                rows[k].result = run_case(cfg);
            } catch (const std::exception& e) {
                rows[k].error = e.what();
            }
        }
    };
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace etstir
