#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etstir/electrostatics.hpp"
#include "etstir/etforce.hpp"
#include "etstir/flow.hpp"
#include "etstir/geometry.hpp"
#include "etstir/grid.hpp"
#include "etstir/props.hpp"
#include "etstir/thermal.hpp"

namespace etstir {

/// Everything one simulation needs. Defaults reproduce the production
/// operating point; sweeps vary one knob at a time.
struct CaseConfig {
    Geometry geometry;
    int nx = 256;
    int ny = 96;
    FluidProps props;
    ReactionParams reaction;
    DriveSpec drive;
    double inlet_mean = 1e-4;      // m/s
    double steady_fraction = 0.99; // of equilibrium coverage
    double t_max = 2000.0;         // s
    double dt = 0.5;               // s
    double sample_dt = 2.0;        // s between recorded samples
    bool thermal_convection = true;
    bool isothermal_walls = false;
    double picard_tol = 1e-4;
    int picard_max = 50;
    double flow_tol = 1e-5;

    void validate() const; // throws ConfigError
};

/// Steady coupled fields: potential and E solved once, then temperature,
/// body force and flow iterated to a fixed point.
struct CoupledFields {
    PotentialField potential;
    EField e;
    Field2D joule;       // W/m^3
    Field2D temperature; // K
    BodyForceField force;
    FlowField flow;
    int picard_iterations = 0;
    FlowSolveInfo flow_info;
    ThermalBalance thermal_balance;
};

struct SamplePoint {
    double t = 0.0;             // s
    double mean_coverage = 0.0; // mol/m^2
    double min_a = 0.0;         // mol/m^3 over fluid cells
    double max_a = 0.0;
};

/// Conservation and bound checks accumulated over a whole case.
struct AuditSummary {
    double species_imbalance_max = 0.0; // relative, worst step
    double thermal_imbalance = 0.0;     // relative
    double divergence_max = 0.0;        // 1/s
    double divergence_scale = 0.0;      // u_scale / min(dx,dy), 1/s
    double phi_min = 0.0, phi_max = 0.0;
    double temperature_min = 0.0;
    double a_min = 0.0, a_max = 0.0; // over the whole run
    int surface_clamps = 0;
    int dt_halvings = 0;
};

struct CaseResult {
    std::vector<SamplePoint> series;
    double temperature_rise_max = 0.0; // K above reference
    double u_max = 0.0;                // m/s, any component
    double v_down_max = 0.0;           // m/s
    double force_max = 0.0;            // N/m^3
    std::optional<double> t_steady;    // s; empty = not reached by t_max
    double ab_eq = 0.0;                // mol/m^2
    int picard_iterations = 0;
    double dt_final = 0.0; // after any halvings
    AuditSummary audit;
    double wall_seconds = 0.0;
    CaseConfig config; // resolved echo
};

CoupledFields couple_steady_fields(const Grid& grid, const CaseConfig& cfg);

/// fields/a_final, when given, receive the converged coupled fields and the
/// final bulk concentration (for dumps); the result is the same either way.
CaseResult run_case(const CaseConfig& cfg, CoupledFields* fields = nullptr,
                    Field2D* a_final = nullptr);

/// First time the series reaches fraction * ab_eq, linearly interpolated
/// between the bracketing samples. Empty when never reached (always, if
/// ab_eq <= 0). Throws SolverError on an empty series.
std::optional<double> detect_steady_state(const std::vector<SamplePoint>& series,
                                          double ab_eq, double fraction);

enum class SweepAxis { electrode_width, gap, frequency, voltage };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Returns a copy of base with the axis value applied.
CaseConfig apply_axis_value(const CaseConfig& base, SweepAxis axis,
                            double value);

struct SweepRow {
    double value = 0.0;
    std::optional<CaseResult> result; // empty on failure
    std::string error;                // failure diagnostic, empty on success
};

/// Runs one case per value across `workers` threads; rows keep input order
/// and per-row failures do not abort the sweep.
std::vector<SweepRow> run_sweep(const CaseConfig& base, SweepAxis axis,
                                const std::vector<double>& values, int workers);

} // namespace etstir
