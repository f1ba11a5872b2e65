#include <catch_amalgamated.hpp>

#include "curlmat/spectral.hpp"

using namespace curlmat;

namespace {

const GridSpec grid16 = GridSpec::cube(16, 2 * std::numbers::pi);

double max_abs(const TensorField& f)
{
    double m = 0.0;
    for (const auto& v : f.data()) m = std::max(m, std::abs(v));
    return m;
}

double rel_diff(const TensorField& a, const TensorField& b) { return relative(l2_norm(a - b), l2_norm(b)); }

TensorField real_noise(const GridSpec& g, int l, FieldBasis basis, std::uint64_t seed)
{
    TensorField f(l, basis, g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (auto& v : f.data()) v = gauss(rng);
    return f;
}

} // namespace

TEST_CASE("grid geometry")
{
    const GridSpec g{{8, 4, 2}, {4.0, 2.0, 1.0}};
    CHECK(g.size() == 64);
    CHECK(g.spacing(0) == 0.5);
    CHECK(g.coordinate(0, 0) == -2.0);
    CHECK(g.coordinate(0, 4) == 0.0);
    CHECK(g.mode_number(0, 5) == -3);
    CHECK(g.is_nyquist(0, 4));
    CHECK(g.wavevector(4, 1, 0)[0] == 0.0);
    CHECK(g.wavevector(4, 1, 0)[1] == Catch::Approx(std::numbers::pi));
    CHECK(g.index(1, 2, 1) == 1 + 8 * 2 + 32);
    CHECK_THROWS_AS((GridSpec{{7, 8, 8}, {1, 1, 1}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{{8, 8, 8}, {1, -1, 1}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS(TensorField(3, FieldBasis::cartesian, g), std::invalid_argument);
}

TEST_CASE("transform round trip")
{
    const TensorField f = random_bandlimited(grid16, 2, FieldBasis::spherical, 7, 11);
    const TensorField back = from_spectral(to_spectral(f), 2, FieldBasis::spherical, grid16);
    CHECK(rel_diff(back, f) <= 1e-12);
    const TensorField noise = real_noise(grid16, 1, FieldBasis::cartesian, 3);
    CHECK(rel_diff(from_spectral(to_spectral(noise), 1, FieldBasis::cartesian, grid16), noise) <= 1e-12);
}

TEST_CASE("random_bandlimited is normalised and band-limited")
{
    const TensorField f = random_bandlimited(grid16, 1, FieldBasis::cartesian, 3, 5);
    double s = 0.0;
    for (const auto& v : f.data()) s += std::norm(v);
    CHECK(s / grid16.size() == Catch::Approx(1.0).epsilon(1e-12));
    const auto spec = to_spectral(f);
    for (int ix = 0; ix < 16; ++ix) {
        const std::size_t i = grid16.index(ix, 0, 0);
        if (std::abs(grid16.mode_number(0, ix)) > 3 || grid16.is_nyquist(0, ix)) CHECK(std::abs(spec[i]) < 1e-9);
    }
    CHECK(random_bandlimited(grid16, 1, FieldBasis::cartesian, 3, 5).data() == f.data());
}

TEST_CASE("apply_operator is linear and maps zero to zero")
{
    const OpMatrix c2 = build_curl_cg(2);
    const TensorField a = random_bandlimited(grid16, 2, FieldBasis::spherical, 5, 1);
    const TensorField b = random_bandlimited(grid16, 2, FieldBasis::spherical, 5, 2);
    const cplx alpha(0.3, -1.2), beta(-2.0, 0.5);
    const TensorField lhs = apply_operator(c2, alpha * a + beta * b);
    const TensorField rhs = alpha * apply_operator(c2, a) + beta * apply_operator(c2, b);
    CHECK(rel_diff(lhs, rhs) <= 1e-12);
    CHECK(max_abs(apply_operator(c2, TensorField(2, FieldBasis::spherical, grid16))) == 0.0);
}

TEST_CASE("apply_operator layout checks")
{
    const TensorField v1(1, FieldBasis::spherical, grid16);
    CHECK_THROWS_AS(apply_operator(build_curl_cg(2), v1), shape_error);
    CHECK_THROWS_AS(apply_operator(cartesian_curl(), v1), shape_error);
    const TensorField out = apply_operator(build_grad(1), v1);
    CHECK(out.l() == 2);
    CHECK(out.basis() == FieldBasis::spherical);
    CHECK(apply_operator(build_div(1), v1).l() == 0);
}

TEST_CASE("plane-wave helicity modes are curl eigenfunctions")
{
    for (int l = 1; l <= 3; ++l)
        for (int m = -l; m <= l; ++m) {
            INFO("l = " << l << ", m = " << m);
            const std::array<int, 3> j{1, -2, 3};
            const TensorField f = plane_wave(grid16, l, m, j, cplx(0.5, 0.25));
            const double kn = std::sqrt(1.0 + 4.0 + 9.0);
            const TensorField cf = apply_operator(build_curl_cg(l), f);
            CHECK(l2_norm(cf - cplx(m * kn / l) * f) <= 1e-9 * l2_norm(f));
        }
    CHECK_THROWS_AS(plane_wave(grid16, 1, 1, {8, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(helicity_vector(1, 2, {0, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(helicity_vector(1, 1, {0, 0, 0}), std::domain_error);
}

TEST_CASE("curl of a gradient vanishes")
{
    const TensorField g = real_noise(grid16, 0, FieldBasis::cartesian, 9);
    const TensorField grad = apply_operator(cartesian_grad(), g);
    CHECK(relative(l2_norm(apply_operator(cartesian_curl(), grad)), gradient_seminorm(grad)) <= 1e-10);
    const TensorField s = random_bandlimited(grid16, 0, FieldBasis::spherical, 6, 4);
    const TensorField sg = apply_operator(build_grad(0), s);
    CHECK(relative(l2_norm(apply_operator(build_curl_cg(1), sg)), gradient_seminorm(sg)) <= 1e-10);
}

TEST_CASE("real input gives real output")
{
    const TensorField f = real_noise(grid16, 1, FieldBasis::cartesian, 21);
    const TensorField c = apply_operator(cartesian_curl(), f);
    double im = 0.0;
    for (const auto& v : c.data()) im = std::max(im, std::abs(v.imag()));
    CHECK(im <= 1e-12 * max_abs(c));
}

TEST_CASE("field-level identities on random band-limited fields")
{
    const TensorField t1 = random_bandlimited(grid16, 1, FieldBasis::spherical, 6, 31);
    const OpMatrix c1 = build_curl_cg(1);
    CHECK(relative(l2_norm(apply_operator(build_div(1), apply_operator(c1, t1))), gradient_seminorm(t1)) <= 1e-10);

    for (int l = 1; l <= 3; ++l) {
        INFO("l = " << l);
        const TensorField t = random_bandlimited(grid16, l, FieldBasis::spherical, 6, 40 + l);
        const OpMatrix c = build_curl_cg(l);
        const TensorField lhs = apply_operator(c, apply_operator(c, t));
        const TensorField rhs = cplx(double(2 * l - 1) / l) * apply_operator(build_grad(l - 1), apply_operator(build_div(l), t)) -
                                apply_operator(laplacian_times(OpMatrix::identity(2 * l + 1), 1), t);
        CHECK(rel_diff(lhs, rhs) <= 1e-10);
    }

    const TensorField lhs = apply_operator(build_curl_cg(2), apply_operator(build_grad(1), t1));
    const TensorField rhs = cplx(0.5) * apply_operator(build_grad(1), apply_operator(c1, t1));
    CHECK(rel_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("basis changes round trip and intertwine the curls")
{
    for (int l = 0; l <= 2; ++l) {
        const TensorField f = random_bandlimited(grid16, l, FieldBasis::spherical, 5, 60 + l);
        CHECK(rel_diff(to_spherical_field(to_cartesian_field(f)), f) <= 1e-14);
    }
    const TensorField v = random_bandlimited(grid16, 1, FieldBasis::spherical, 5, 70);
    CHECK(rel_diff(to_cartesian_field(apply_operator(build_curl_cg(1), v)), apply_operator(cartesian_curl(), to_cartesian_field(v))) <= 1e-12);

    const TensorField t = random_bandlimited(grid16, 2, FieldBasis::spherical, 5, 71);
    CHECK(rel_diff(to_cartesian_field(apply_operator(build_curl_cg(2), t)), curl_rank2_field(to_cartesian_field(t))) <= 1e-12);
    CHECK_THROWS_AS(to_cartesian_field(to_cartesian_field(v)), shape_error);
    CHECK_THROWS_AS(to_spherical_field(v), shape_error);
}

TEST_CASE("packed rank-2 fields unpack symmetric and traceless")
{
    const TensorField t = to_cartesian_field(random_bandlimited(grid16, 2, FieldBasis::spherical, 4, 72));
    const auto full = unpack_rank2(t);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rank2_value_ops<std::valarray<cplx>>::magnitude(full[i][j] - full[j][i]) == 0.0);
    CHECK(rank2_value_ops<std::valarray<cplx>>::magnitude(full[0][0] + full[1][1] + full[2][2]) == 0.0);
    auto broken = full;
    broken[0][1] += cplx(1.0);
    CHECK_THROWS_AS(curl_rank2_cartesian(broken, [&](int a, const std::valarray<cplx>& x) { return spectral_partial(grid16, a, x); }),
                    std::invalid_argument);
}

TEST_CASE("complex curl of fields")
{
    const TensorField u = random_bandlimited(grid16, 1, FieldBasis::cartesian, 5, 80);
    const TensorField v = random_bandlimited(grid16, 1, FieldBasis::cartesian, 5, 81);
    const TensorField cc = complex_curl_field(u, v);
    const TensorField expect = apply_operator(build_cartesian_curls().complex_curl, u + cplx(0, 1) * v);
    CHECK(rel_diff(cc, expect) <= 1e-12);

    const TensorField zero(1, FieldBasis::cartesian, grid16);
    CHECK(rel_diff(complex_curl_field(u, zero), cplx(1, 1) * apply_operator(cartesian_curl(), u)) <= 1e-12);
    const TensorField same = complex_curl_field(u, u);
    CHECK(rel_diff(same, cplx(0, 2) * apply_operator(cartesian_curl(), u)) <= 1e-12);
    CHECK_THROWS_AS(complex_curl_field(random_bandlimited(grid16, 1, FieldBasis::spherical, 2, 1), zero), shape_error);
}

TEST_CASE("Example 1 on the band-limited periodization")
{
    const GridSpec g{{256, 256, 2}, {8.0, 8.0, 1.0}};
    const Example1Fields ex = example1_fields(g);
    const TensorField cc = complex_curl_field(ex.u, ex.v);
    double err = 0.0;
    std::size_t points = 0;
    for (int iy = 0; iy < g.n[1]; ++iy)
        for (int ix = 0; ix < g.n[0]; ++ix) {
            const double x = g.coordinate(0, ix), y = g.coordinate(1, iy);
            if (std::abs(x) > ex.plateau || std::abs(y) > ex.plateau) continue;
            ++points;
            const cplx expect(2 * (x - 1), -2 * (x + 1));
            err = std::max(err, std::abs(cc.at(2, ix, iy, 0) - expect));
            err = std::max(err, std::abs(cc.at(0, ix, iy, 0)) + std::abs(cc.at(1, ix, iy, 0)));
        }
    INFO("max error " << err << " over " << points << " points");
    CHECK(points > 1000);
    CHECK(err <= 1e-6);
}

TEST_CASE("Helmholtz decomposition")
{
    const GridSpec g = GridSpec::cube(16, 3.0);
    const TensorField f = random_bandlimited(g, 1, FieldBasis::cartesian, 6, 90);
    const auto [perp, par] = helmholtz(f);
    CHECK(rel_diff(perp + par, f) <= 1e-12);
    CHECK(relative(l2_norm(apply_operator(cartesian_div(), perp)), gradient_seminorm(perp)) <= 1e-10);
    CHECK(relative(l2_norm(complex_curl_field(par, TensorField(1, FieldBasis::cartesian, g))), gradient_seminorm(par)) <= 1e-10);

    const auto again = helmholtz(perp);
    CHECK(rel_diff(again.perp, perp) <= 1e-10);
    CHECK(l2_norm(again.par) <= 1e-10 * l2_norm(perp));

    const TensorField grad = apply_operator(cartesian_grad(), real_noise(g, 0, FieldBasis::cartesian, 91));
    CHECK(l2_norm(helmholtz(grad).perp) <= 1e-10 * l2_norm(grad));
    const TensorField curl = apply_operator(cartesian_curl(), real_noise(g, 1, FieldBasis::cartesian, 92));
    CHECK(l2_norm(helmholtz(curl).par) <= 1e-10 * l2_norm(curl));

    TensorField constant(1, FieldBasis::cartesian, g);
    for (auto& v : constant.data()) v = 2.5;
    CHECK(l2_norm(helmholtz(constant).perp) <= 1e-12);
    CHECK_THROWS_AS(helmholtz(random_bandlimited(g, 1, FieldBasis::spherical, 2, 1)), shape_error);
}

TEST_CASE("plateau window")
{
    CHECK(plateau_window(0.1, 0.2, 0.5) == 1.0);
    CHECK(plateau_window(-0.6, 0.2, 0.5) == 0.0);
    const double mid = plateau_window(0.35, 0.2, 0.5);
    CHECK(mid == Catch::Approx(0.5));
}
