#pragma once

#include <complex>
#include <string>
#include <vector>

#include "emq/errors.hpp"

namespace emq {

/// One resonant contribution Omega^2 / (omega0^2 - 2i*gamma*omega - omega^2)
/// to the frequency response. omega0 == 0 is a Drude pole.
struct LorentzPole {
    double coupling = 0.0;   // Omega, rad/s, > 0
    double resonance = 0.0;  // omega0, rad/s, >= 0
    double damping = 0.0;    // gamma, rad/s, >= 0 (physical rate)
};

struct MediumSpec {
    std::vector<LorentzPole> electric_poles;
    std::vector<LorentzPole> magnetic_poles;
    double eps0 = 1.0;  // F/m
    double mu0 = 1.0;   // H/m

    std::size_t pole_count() const {
        return std::max(electric_poles.size(), magnetic_poles.size());
    }
};

enum class MediumClass { Vacuum, LosslessLorentz, Drude, LossyLorentz };

std::string to_string(MediumClass c);

enum class Branch { Electric, Magnetic };

/// Checks sign constraints on every pole and classifies the medium.
MediumClass validate_medium(const MediumSpec& spec);

/// Complex permittivity (electric branch) or permeability (magnetic branch)
/// at real angular frequency omega. Throws PoleSingularity when omega hits
/// an undamped resonance.
std::complex<double> response_at(const MediumSpec& spec, double omega, Branch branch);

}  // namespace emq
