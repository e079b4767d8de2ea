#include "emq/medium.hpp"

#include <cmath>
#include <sstream>

namespace emq {

std::string to_string(MediumClass c) {
    switch (c) {
        case MediumClass::Vacuum: return "vacuum";
        case MediumClass::LosslessLorentz: return "lossless-lorentz";
        case MediumClass::Drude: return "drude";
        case MediumClass::LossyLorentz: return "lossy-lorentz";
    }
    return "?";
}

namespace {

void check_poles(const std::vector<LorentzPole>& poles, const char* branch) {
    for (std::size_t l = 0; l < poles.size(); ++l) {
        const auto& p = poles[l];
        std::ostringstream where;
        where << branch << " pole " << l;
        if (p.damping < 0.0)
            throw NegativeDamping(where.str() + ": damping must be >= 0");
        if (p.coupling <= 0.0)
            throw NonPositiveCoupling(where.str() + ": coupling must be > 0");
        if (p.resonance < 0.0)
            throw NonPositiveCoupling(where.str() + ": resonance must be >= 0");
    }
}

}  // namespace

MediumClass validate_medium(const MediumSpec& spec) {
    if (spec.eps0 <= 0.0 || spec.mu0 <= 0.0)
        throw ValidationError("eps0 and mu0 must be positive");
    check_poles(spec.electric_poles, "electric");
    check_poles(spec.magnetic_poles, "magnetic");

    if (spec.electric_poles.empty() && spec.magnetic_poles.empty())
        return MediumClass::Vacuum;

    bool any_drude = false;
    bool any_damped = false;
    bool any_resonant = false;
    auto scan = [&](const std::vector<LorentzPole>& poles) {
        for (const auto& p : poles) {
            if (p.resonance == 0.0) any_drude = true;
            if (p.resonance > 0.0) any_resonant = true;
            if (p.damping > 0.0) any_damped = true;
        }
    };
    scan(spec.electric_poles);
    scan(spec.magnetic_poles);

    if (any_drude) return MediumClass::Drude;
    if (!any_damped && any_resonant) return MediumClass::LosslessLorentz;
    return MediumClass::LossyLorentz;
}

std::complex<double> response_at(const MediumSpec& spec, double omega, Branch branch) {
    const auto& poles = (branch == Branch::Electric) ? spec.electric_poles : spec.magnetic_poles;
    const double base = (branch == Branch::Electric) ? spec.eps0 : spec.mu0;

    std::complex<double> sum = 0.0;
    for (const auto& p : poles) {
        const std::complex<double> denom(p.resonance * p.resonance - omega * omega,
                                         -2.0 * p.damping * omega);
        if (std::abs(denom) == 0.0)
            throw PoleSingularity("response evaluated at an undamped resonance");
        sum += p.coupling * p.coupling / denom;
    }
    return base * (1.0 + sum);
}

}  // namespace emq
