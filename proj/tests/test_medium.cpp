#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "emq/medium.hpp"

using namespace emq;

namespace {

MediumSpec lorentz(double coupling, double resonance, double damping) {
    MediumSpec m;
    m.electric_poles.push_back({coupling, resonance, damping});
    return m;
}

}  // namespace

TEST_CASE("classification") {
    CHECK(validate_medium(MediumSpec{}) == MediumClass::Vacuum);
    CHECK(validate_medium(lorentz(1.0, 2.0, 0.0)) == MediumClass::LosslessLorentz);
    CHECK(validate_medium(lorentz(1.0, 2.0, 0.1)) == MediumClass::LossyLorentz);
    CHECK(validate_medium(lorentz(1.0, 0.0, 0.1)) == MediumClass::Drude);

    MediumSpec mixed = lorentz(1.0, 2.0, 0.1);
    mixed.magnetic_poles.push_back({0.5, 0.0, 0.2});
    CHECK(validate_medium(mixed) == MediumClass::Drude);
}

TEST_CASE("validation rejects bad poles") {
    CHECK_THROWS_AS(validate_medium(lorentz(1.0, 2.0, -0.1)), NegativeDamping);
    CHECK_THROWS_AS(validate_medium(lorentz(0.0, 2.0, 0.1)), NonPositiveCoupling);
    CHECK_THROWS_AS(validate_medium(lorentz(-1.0, 2.0, 0.1)), NonPositiveCoupling);

    MediumSpec bad = lorentz(1.0, 2.0, 0.1);
    bad.eps0 = 0.0;
    CHECK_THROWS_AS(validate_medium(bad), ValidationError);
}

TEST_CASE("response at a damped resonance") {
    // single pole, coupling 1, resonance 1, damping 0.05, probed at omega = 1:
    // denominator is -0.1i, so the susceptibility is exactly 10i
    const MediumSpec m = lorentz(1.0, 1.0, 0.05);
    const auto eps = response_at(m, 1.0, Branch::Electric);
    CHECK(std::abs(eps - std::complex<double>(1.0, 10.0)) < 1e-12);

    // magnetic branch has no poles: plain mu0
    CHECK(std::abs(response_at(m, 1.0, Branch::Magnetic) - 1.0) < 1e-15);
}

TEST_CASE("drude response") {
    const MediumSpec m = lorentz(2.0, 0.0, 0.5);
    const double w = 1.5;
    const std::complex<double> denom(-w * w, -2.0 * 0.5 * w);
    const auto expected = 1.0 + 4.0 / denom;
    CHECK(std::abs(response_at(m, w, Branch::Electric) - expected) < 1e-14);
}

TEST_CASE("undamped resonance is singular") {
    const MediumSpec m = lorentz(1.0, 3.0, 0.0);
    CHECK_THROWS_AS(response_at(m, 3.0, Branch::Electric), PoleSingularity);
    CHECK_NOTHROW(response_at(m, 2.9, Branch::Electric));
}

TEST_CASE("response symmetries") {
    MediumSpec m = lorentz(1.3, 2.1, 0.4);
    m.electric_poles.push_back({0.7, 0.0, 0.2});
    m.eps0 = 2.5;

    for (double w : {0.3, 1.0, 2.1, 5.0}) {
        const auto plus = response_at(m, w, Branch::Electric);
        const auto minus = response_at(m, -w, Branch::Electric);
        CHECK(std::abs(plus - std::conj(minus)) < 1e-12);   // real-field symmetry
        CHECK(plus.imag() > 0.0);                           // passivity
    }
    // zero-damping response is real off resonance
    const auto cold = response_at(lorentz(1.0, 2.0, 0.0), 1.0, Branch::Electric);
    CHECK(cold.imag() == 0.0);
}
