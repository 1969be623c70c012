#include <cmath>

#include "doctest.h"
#include "escape/errors.hpp"
#include "escape/geometry.hpp"

using namespace escape;

TEST_SUITE("geometry") {

TEST_CASE("eval_volume examples") {
    CHECK(eval_volume(VolumeProfile::power_global(3.0), 0.0, 2.0) == doctest::Approx(8.0));
    const auto tr = VolumeProfile::two_regime(2.0, 3.0);
    CHECK(eval_volume(tr, 0.0, 0.5) == doctest::Approx(0.25));
    CHECK(eval_volume(tr, 0.0, 2.0) == doctest::Approx(8.0));
    CHECK(eval_volume(VolumeProfile::weighted(1.0, 1.0), 0.0, 1.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(eval_volume(tr, 0.0, 0.0), domain_error);
    CHECK_THROWS_AS(eval_volume(tr, 0.0, -1.0), domain_error);
}

TEST_CASE("eval_phi examples") {
    CHECK(eval_phi(ScaleFunction::power(2.0), 3.0) == doctest::Approx(9.0));
    const auto s12 = ScaleFunction::two_regime(1.0, 2.0);
    CHECK(eval_phi(s12, 0.5) == doctest::Approx(0.5));
    CHECK(eval_phi(s12, 4.0) == doctest::Approx(16.0));
    CHECK(eval_phi(s12, 0.0) == 0.0);
    CHECK(eval_phi(s12, 1.0) == doctest::Approx(1.0));  // continuous at the seam
    CHECK_THROWS_AS(eval_phi(s12, -1.0), domain_error);
}

TEST_CASE("eval_phi_inv examples") {
    CHECK(eval_phi_inv(ScaleFunction::power(2.0), 4.0) == doctest::Approx(2.0));
    const auto s12 = ScaleFunction::two_regime(1.0, 2.0);
    CHECK(eval_phi_inv(s12, 0.25) == doctest::Approx(0.25));
    CHECK(eval_phi_inv(s12, 9.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(eval_phi_inv(s12, -1.0), domain_error);
}

TEST_CASE("phi round trip to 1e-12 on [0, 1e12]") {
    for (const auto& s : {ScaleFunction::power(2.0), ScaleFunction::two_regime(1.0, 2.0),
                          ScaleFunction::two_regime(3.0, 1.5)}) {
        for (int i = 0; i <= 60; ++i) {
            const double t = std::pow(10.0, -6.0 + 18.0 * i / 60.0);
            CHECK(eval_phi(s, eval_phi_inv(s, t)) == doctest::Approx(t).epsilon(1e-12));
        }
    }
}

TEST_CASE("monotonicity of volume and phi") {
    const auto w = VolumeProfile::weighted(2.0, -0.5);
    const auto s = ScaleFunction::two_regime(2.5, 1.5);
    double prev_v = 0.0, prev_p = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double r = std::pow(10.0, -4.0 + 8.0 * i / 100.0);
        const double v = eval_volume(w, 1.0, r), p = eval_phi(s, r);
        CHECK(v >= prev_v);
        CHECK(p >= prev_p);
        prev_v = v;
        prev_p = p;
    }
}

TEST_CASE("audit_doubling passes for correctly declared profiles") {
    CHECK(audit_doubling(VolumeProfile::power_global(3.0), 1000, 7).pass);
    CHECK(audit_doubling(VolumeProfile::two_regime(2.0, 3.0), 1000, 7).pass);
    CHECK(audit_doubling(VolumeProfile::two_regime(3.0, 2.0), 1000, 7).pass);
    CHECK(audit_doubling(VolumeProfile::weighted(2.0, 1.0), 1000, 7).pass);
    CHECK(audit_doubling(VolumeProfile::weighted(2.0, -0.75), 1000, 7).pass);

    // PowerGlobal saturates the bracket exactly.
    const auto rep = audit_doubling(VolumeProfile::power_global(3.0), 1000, 3);
    CHECK(rep.worst_lower_margin == doctest::Approx(1.0));
    CHECK(rep.worst_upper_margin == doctest::Approx(1.0));
}

TEST_CASE("audit_doubling fails for a wrong declaration") {
    auto p = VolumeProfile::two_regime(3.0, 2.0);
    p.exponents.d1 = 3.0;  // r<1<R pairs drop below exponent 3
    p.exponents.d2 = 3.0;
    const auto rep = audit_doubling(p, 1000, 7);
    CHECK_FALSE(rep.pass);
    CHECK(rep.violations > 0);
}

TEST_CASE("audit_scale passes and fails as declared") {
    CHECK(audit_scale(ScaleFunction::power(2.0), 1000, 5).pass);
    CHECK(audit_scale(ScaleFunction::two_regime(1.0, 2.0), 1000, 5).pass);
    auto bad = ScaleFunction::two_regime(1.0, 2.0);
    bad.d4 = 1.5;
    CHECK_FALSE(audit_scale(bad, 1000, 5).pass);
}

TEST_CASE("validation guards") {
    CHECK_THROWS_AS(VolumeProfile::power_global(-1.0), domain_error);
    CHECK_THROWS_AS(VolumeProfile::weighted(1.0, -0.5), domain_error);
    CHECK_THROWS_AS(ScaleFunction::power(0.0), domain_error);
    DoublingExponents bad{1.0, 1.0, 2.0, 1.0};  // d2 < d1
    CHECK_THROWS_AS(bad.validate(), domain_error);
}

}  // TEST_SUITE
