#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "floq/floquet.hpp"
#include "floq/rigidity.hpp"

using namespace floq;

TEST_CASE("constructed pairs are genuine and verified") {
    LatticeSpec spec{{2, 3}};
    SeparabilityPattern p{{1, 1}};
    SUBCASE("whole-lattice translation") {
        auto [v, y] = isospectral_pair(spec, 11, PairMode::translate);
        CHECK(v.is_real());
        CHECK(floquet_isospectral(v, y).accepted);
        double diff = 0.0;
        for (size_t i = 0; i < v.values.size(); ++i)
            diff = std::max(diff, std::abs(v.values[i] - y.values[i]));
        CHECK(diff > 1e-6);  // the partner is not the potential itself
    }
    SUBCASE("independent per-component translation") {
        auto [v, y] = isospectral_pair(spec, 12, PairMode::component_translate, p);
        CHECK(floquet_isospectral(v, y).accepted);
        CHECK(is_separable(dft(v), p).separable);
        CHECK(is_separable(dft(y), p).separable);
    }
    SUBCASE("complex draws when requested") {
        auto [v, y] = isospectral_pair(spec, 13, PairMode::translate, {}, false);
        CHECK_FALSE(v.is_real());
        CHECK(floquet_isospectral(v, y).accepted);
    }
}

TEST_CASE("separability transfers across isospectrality") {
    auto r1 = verify_thm_main2(LatticeSpec{{2, 3}}, SeparabilityPattern{{1, 1}}, 6, 21);
    CHECK(r1.all_passed());
    auto r2 = verify_thm_main2(LatticeSpec{{2, 2, 2}}, SeparabilityPattern{{1, 2}}, 6, 22);
    CHECK(r2.all_passed());
    // The report carries one entry per property, all with measured values.
    REQUIRE(r1.checks.size() == 4);
    for (const auto& c : r1.checks) CHECK(c.value <= c.tolerance);
}

TEST_CASE("separable components are isospectral blockwise") {
    auto r = verify_thm_main3(LatticeSpec{{2, 3}}, SeparabilityPattern{{1, 1}}, 4, 31);
    CHECK(r.all_passed());
    auto r2 = verify_thm_main3(LatticeSpec{{2, 2, 2}}, SeparabilityPattern{{1, 2}}, 3, 32);
    CHECK(r2.all_passed());
}

TEST_CASE("invariants agree on constructed isospectral pairs") {
    LatticeSpec spec{{2, 3}};
    auto [v, y] = isospectral_pair(spec, 41, PairMode::translate);
    auto rep = verify_key1_key4(v, y);
    CHECK(rep.all_passed());
    REQUIRE(rep.checks.size() == 4);
    CHECK(rep.checks[0].name == "means agree");
    CHECK(rep.checks[3].name == "floquet isospectrality");
}

TEST_CASE("the invariants alone do not pin the spectrum") {
    // Swap the Fourier coefficients at the conjugate cross indices (1,1) and
    // (1,2) of a real potential on q=(2,3). Realness, the mean, the Green
    // pairing and every power sum survive the swap (the two magnitudes are
    // equal), yet the spectrum moves: necessary invariants, not sufficient.
    LatticeSpec spec{{2, 3}};
    Potential v = random_potential(spec, 0x5eed, RandomMode::real());
    FourierTable f = dft(v);
    const int i1 = flatten(spec, {1, 1});
    const int i2 = flatten(spec, {1, 2});
    REQUIRE(std::abs(f.coefficients[i1].imag()) > 1e-3);  // a real swap, not a no-op
    std::swap(f.coefficients[i1], f.coefficients[i2]);
    Potential y = idft(f);
    for (Complex& x : y.values) x = Complex{x.real(), 0.0};  // conjugate symmetry held
    CHECK(dft(y).max_abs() > 0.0);

    auto rep = verify_key1_key4(v, y, SeparabilityPattern{{1, 1}});
    REQUIRE(rep.checks.size() == 4);
    CHECK(rep.checks[0].passed);        // means
    CHECK(rep.checks[1].passed);        // green pairing
    CHECK(rep.checks[2].passed);        // power sums
    CHECK_FALSE(rep.checks[3].passed);  // the spectrum itself
    CHECK_FALSE(rep.all_passed());
}

TEST_CASE("aggregated invariant suite passes on generated pairs") {
    auto rep = verify_key_suite(LatticeSpec{{2, 3}}, 5, 51);
    CHECK(rep.all_passed());
}

TEST_CASE("triangular suite: dual forms, translates, transfer") {
    auto r1 = verify_triangular({2, 2}, 6, 61);
    CHECK(r1.all_passed());
    auto r2 = verify_triangular({2, 3}, 6, 62);
    CHECK(r2.all_passed());
}
