#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chemsim/errors.hpp"
#include "chemsim/sensitivity.hpp"

#include <cmath>

using namespace chemsim;

namespace {
SampleBox unit_box(double s_min = 0.0) {
    SampleBox b;
    b.gamma = 1.0;
    b.n_max = 10.0;
    b.s_min = s_min;
    return b;
}
} // namespace

TEST_CASE("identity: |I| constant, no n-dependence") {
    auto m = make_sensitivity("identity");
    auto rep = validate_sensitivity(m, unit_box(), 10000, 1);
    CHECK(!rep.violation);
    CHECK(rep.worst_margin >= -1e-12); // S0 = sqrt(2) = |I|_F exactly
    Mat2 s = m.tensor(0.3, 0.7, 2.0, 0.5);
    CHECK(s.frobenius() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rotation tensor under the Frobenius convention") {
    auto m = make_sensitivity("rotation(0.7)");
    // |c Rot(theta)|_F = sqrt(2) c <= 2 c, margin (2 - sqrt(2)) c >= 0
    Mat2 s = m.tensor(0.0, 0.0, 1.0, 0.8);
    CHECK(s.frobenius() == doctest::Approx(std::sqrt(2.0) * 0.8));
    auto rep = validate_sensitivity(m, unit_box(), 10000, 2);
    CHECK(!rep.violation);
    CHECK(rep.worst_margin >= -1e-12);
}

TEST_CASE("singular radial chi = 1/c at the equality case") {
    auto m = make_sensitivity("radial:inv_c");
    CHECK(m.singular_at_zero);
    auto rep = validate_sensitivity(m, unit_box(0.1), 10000, 3);
    CHECK(!rep.violation);
    CHECK(rep.worst_margin >= -1e-9); // chi0(s) = 1/s exactly matches
    CHECK(rep.worst_margin <= 1e-6);
}

TEST_CASE("every shipped preset validates at 1e4 samples") {
    for (const char* name : {"identity", "chi_c", "rotation(0.5)", "modulated", "zero",
                             "radial:const(1)", "radial:chi_c", "radial:inv_c",
                             "radial:saturating"}) {
        auto m = make_sensitivity(name);
        auto rep = validate_sensitivity(m, unit_box(m.singular_at_zero ? 0.05 : 0.0), 10000,
                                        42);
        CAPTURE(name);
        CHECK(!rep.violation);
    }
}

TEST_CASE("a model violating its bound is flagged") {
    SensitivityModel bad = make_sensitivity("radial:inv_c");
    bad.chi = [](double, double, double c) { return 2.0 / c; }; // bound still 1/s
    auto rep = validate_sensitivity(bad, unit_box(0.1), 1000, 4);
    CHECK(rep.violation);
    CHECK(rep.worst_margin < 0.0);
}

TEST_CASE("singular model requires s_min > 0") {
    auto m = make_sensitivity("radial:inv_c");
    CHECK_THROWS_AS(validate_sensitivity(m, unit_box(0.0), 100, 5), ConfigError);
}

TEST_CASE("preset parsing errors") {
    CHECK_THROWS_AS(make_sensitivity("warp"), ConfigError);
    CHECK_THROWS_AS(make_sensitivity("rotation(abc)"), ConfigError);
    CHECK_THROWS_AS(make_sensitivity("rotation(0.3"), ConfigError);
}

TEST_CASE("validation report carries the worst sample") {
    auto m = make_sensitivity("chi_c");
    auto rep = validate_sensitivity(m, unit_box(), 500, 6);
    CHECK(rep.samples == 500);
    CHECK(std::isfinite(rep.worst_n));
    CHECK(rep.worst_c >= 0.0);
    CHECK(rep.worst_c <= 1.0);
}
