#pragma once

#include <cmath>

namespace etstir {

inline constexpr double kVacuumPermittivity = 8.854e-12; // F/m

/// Medium constants. Defaults are the aqueous buffer used throughout:
/// sigma and eps_rel as measured, cp and k_thermal standard water values
/// at 300 K. alpha_sigma and alpha_eps are the relative temperature
/// derivatives (1/sigma)(dsigma/dT) and (1/eps)(deps/dT).
struct FluidProps {
    double rho = 1e3;          // kg/m^3
    double cp = 4184.0;        // J/(kg K), water
    double k_thermal = 0.6;    // W/(m K), water
    double sigma = 5.75e-2;    // S/m
    double eps_rel = 80.2;     // relative permittivity
    double eta = 1e-3;         // Pa s
    double alpha_sigma = 0.02;   // 1/K
    double alpha_eps = -0.004;   // 1/K
    double diffusivity = 1e-10;  // m^2/s, analyte
    double t_ref = 300.0;        // K, electrode and inlet temperature

    double eps() const { return eps_rel * kVacuumPermittivity; } // F/m
};

/// Langmuir surface kinetics constants, SI units throughout
/// (concentrations mol/m^3, k_a m^3/(mol s)).
struct ReactionParams {
    double k_a = 2600.0;   // m^3/(mol s)
    double k_d = 0.01;     // 1/s
    double b0 = 3e-8;      // mol/m^2, ligand surface density
    double a_inlet = 1e-5; // mol/m^3, analyte feed concentration

    /// Equilibrium coverage of the surface complex under feed conditions.
    double ab_eq() const {
        const double denom = a_inlet + k_d / k_a;
        return denom > 0.0 ? b0 * a_inlet / denom : 0.0;
    }
    /// Exponential rate of the well-mixed binding transient, 1/s.
    double wellmixed_rate() const { return k_a * a_inlet + k_d; }
};

/// AC drive: rms voltage difference across the electrode pair.
struct DriveSpec {
    double frequency = 1e5; // Hz
    double v_rms = 0.0;     // V

    double omega() const { return 2.0 * M_PI * frequency; } // rad/s
};

} // namespace etstir
