// gapsol: leapfrog advancement of the coupled Maxwell-Bloch system.
//
// One step from (E^n, H^{n+1/2}, s^n) where s = (u,v,w):
//   1. curl-only predictor  Ebar_i = E^n_i - S*(H_{i+1/2} - H_{i-1/2})
//   2. Bloch update at medium cells with the drive frozen at the half-level
//      interpolant (E^n + Ebar)/2; the polarization source enters E through
//      the increment delta-u of the same step:  E^{n+1} = Ebar - (omega_c/Omega0)*delta_u
//   3. absorbing (mur1) or reflecting (pec) closure at the end nodes
//   4. H^{n+3/2}_{i+1/2} = H^{n+1/2}_{i+1/2} - S*(E^{n+1}_{i+1} - E^{n+1}_i)
#pragma once

#include <string>
#include <vector>

#include "gapsol/bloch.hpp"
#include "gapsol/grid.hpp"
#include "gapsol/medium.hpp"
#include "gapsol/pulse.hpp"
#include "gapsol/sim_state.hpp"

namespace gapsol {

enum class BlochScheme { Rk4, Cn };
enum class BoundaryKind { Mur1, Pec };

struct StepperConfig {
    BlochScheme scheme = BlochScheme::Rk4;
    BoundaryKind boundary = BoundaryKind::Mur1;
    long divergence_check_stride = 100;
};

BlochScheme parse_scheme(const std::string& name);
BoundaryKind parse_boundary(const std::string& name);
std::string scheme_name(BlochScheme s);
std::string boundary_name(BoundaryKind b);

// End-node closure. e_new holds the freshly curl-updated interior values;
// e_old is the field of the previous step. Both end entries are written.
void apply_boundary(std::vector<double>& e_new, const std::vector<double>& e_old,
                    const Grid& grid, BoundaryKind kind);

class Stepper {
public:
    Stepper(const Grid& grid, const MediumProfile& profile, const PulseSpec& pulse,
            const RelaxationSpec& relax, const StepperConfig& cfg);

    void step(SimState& state);

    // Time-centered discrete EM energy sum(E^2)*dxi + sum(H_old*H_new)*dxi of
    // the last step taken with tracing enabled; exactly conserved by the
    // vacuum scheme under pec closure.
    void set_energy_trace(bool on) { trace_energy_ = on; }
    double last_centered_energy() const { return last_energy_; }

    // Instantaneous sum(E^2 + H^2)*dxi over nodes with node_xi in [a, b).
    double em_energy_in(const SimState& state, double a, double b) const;
    double em_energy(const SimState& state) const;

    const Grid& grid() const { return grid_; }
    const StepperConfig& config() const { return cfg_; }

private:
    void check_finite(const SimState& state) const;

    Grid grid_;
    const MediumProfile profile_;
    StepperConfig cfg_;
    BlochRates rates_;
    double courant_ = 0.0;
    double mur_coef_ = 0.0;
    std::vector<double> source_ratio_; // omega_c/Omega0 per node
    std::vector<double> e_scratch_;
    std::vector<double> h_old_;
    bool trace_energy_ = false;
    double last_energy_ = 0.0;
};

} // namespace gapsol
