#include <catch_amalgamated.hpp>

#include <fstream>

#include "curlmat/builders.hpp"
#include "curlmat/format.hpp"

using namespace curlmat;

namespace {

const ExactScalar I = ExactScalar::i();
ExactScalar frac(long long n, long long d) { return ExactScalar::rational(n, d); }
ExactScalar sq(long long n) { return ExactScalar::sqrt(Rational(n)); }

Rank2Tensor<DiffPoly> constant_tensor(const ExactMatrix& m, const DiffPoly& weight)
{
    Rank2Tensor<DiffPoly> t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m(i, j) * weight;
    return t;
}

} // namespace

TEST_CASE("curl tables are reproduced exactly")
{
    CHECK(build_curl_cg(1) == reference::curl_l1());
    CHECK(build_curl_cg(2) == reference::curl_l2());
    CHECK(compose(build_curl_cg(1), build_curl_cg(1)) == reference::curl_l1_squared());
    CHECK(build_curl_hermitian(1) == reference::curl_hermitian_l1());
    CHECK(build_curl_complex(1) == reference::curl_complex_l1());
    const auto parts = split_symmetry(build_curl_cg(1));
    CHECK(parts.real.part == reference::curl_l1_real_part());
    CHECK(parts.imag.part == reference::curl_l1_imag_part());

    const OpMatrix c1 = build_curl_cg(1);
    CHECK(c1(0, 0) == I.inverse() * dz());
    CHECK(c1(0, 1) == I.inverse() * frac(1, 2) * sq(2) * (dx() - I * dy()));
    const OpMatrix c2 = build_curl_cg(2);
    CHECK(c2(1, 2) == (ExactScalar(2) * I).inverse() * frac(1, 2) * sq(6) * (dx() - I * dy()));
}

TEST_CASE("gradient and divergence tables")
{
    CHECK(build_grad(1) == reference::grad_l1());
    const OpMatrix div2 = build_div(2);
    const OpMatrix table = reference::div_l2();
    CHECK(div2(0, 0) == -(dx() + I * dy()));
    CHECK(div2(0, 1) == dz());
    // the transcribed table differs only by the sign of dy in two entries
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 5; ++c) {
            INFO("entry " << r << "," << c);
            const bool erratum = (r == 1 && c == 1) || (r == 2 && c == 2);
            CHECK((div2(r, c) == table(r, c)) != erratum);
        }
    CHECK(div2(1, 1) == -(sq(2).inverse()) * (dx() + I * dy()));
    CHECK(div2(2, 2) == -(sq(6).inverse()) * (dx() + I * dy()));
}

TEST_CASE("shapes and tags")
{
    for (int l = 1; l <= max_angular_l; ++l) {
        const std::size_t n = 2 * l + 1;
        CHECK(build_div(l).rows() == n - 2);
        CHECK(build_div(l).cols() == n);
        CHECK(build_grad(l).rows() == n + 2);
        CHECK(build_grad(l).cols() == n);
        CHECK(build_curl_cg(l).rows() == n);
        CHECK(build_curl_cg(l).tag() == BasisTag::spherical(l, l));
    }
    CHECK(build_grad(0).rows() == 3);
    CHECK(build_grad(0).cols() == 1);
    CHECK(build_div(3).rows() == 5);
    CHECK(build_div(3).cols() == 7);
    CHECK_THROWS(build_div(0));
    CHECK_THROWS(build_curl_cg(0));
    CHECK_THROWS(build_grad(-1));
}

TEST_CASE("compositions that vanish")
{
    CHECK(compose(build_div(1), build_curl_cg(1)).is_zero());
    CHECK(compose(build_curl_cg(1), build_grad(0)).is_zero());
}

TEST_CASE("CG and angular-momentum constructions agree for l = 1..8")
{
    for (int l = 1; l <= max_angular_l; ++l) {
        INFO("l = " << l);
        CHECK(build_curl_cg(l) == build_curl_ldotgrad(l));
        CHECK(build_curl_ladder(l) == build_curl_ldotgrad(l));
    }
    CHECK(build_curl_ldotgrad(1) == reference::curl_l1());
    CHECK(build_curl_ldotgrad(2) == reference::curl_l2());
    CHECK_FALSE(build_curl_ladder(1, LadderDerivatives::real_pair) == reference::curl_l1());
    CHECK_THROWS_AS(build_curl_ldotgrad(9), std::domain_error);
}

TEST_CASE("hermitian and complex curls")
{
    for (int l = 1; l <= 4; ++l) {
        const OpMatrix c = build_curl_cg(l);
        CHECK(build_curl_complex(l) == scale(1 + I, c));
        CHECK(build_curl_complex(l) == scale(1 - I, build_curl_hermitian(l)));
        CHECK(formal_adjoint(build_curl_hermitian(l)) == build_curl_hermitian(l));
    }
}

TEST_CASE("convention ledger")
{
    const auto& ledger = convention_ledger();
    CHECK(ledger.candidates_examined == convention_candidates().size());
    CHECK(ledger.candidates_examined == 32);
    CHECK(ledger.candidates_accepted == 1);
    CHECK(ledger.selected.reading == CouplingReading::clebsch_gordan);
    CHECK(ledger.selected.curl_sign == 1);
    CHECK(ledger.selected.derivative.plus_sign == -1);
    CHECK(ledger.selected.derivative.minus_sign == 1);
    CHECK(ledger.selected.derivative.conjugate);

    std::vector<std::string> ids;
    for (const auto& e : ledger.errata) ids.push_back(e.id);
    CHECK(ids == std::vector<std::string>{"curl-prefactor-sign", "coupling-reading", "ladder-derivatives", "div-l2-table",
                                          "spherical-to-cartesian-table"});

    int accepted = 0;
    for (const auto& c : convention_candidates()) accepted += reproduces_curl_tables(c);
    CHECK(accepted == 1);

    std::ifstream in(std::string(CURLMAT_DATA_DIR) + "/convention_ledger.json");
    REQUIRE(in);
    CHECK(nlohmann::json::parse(in) == to_json(ledger));
}

TEST_CASE("spherical to cartesian transform")
{
    const ExactMatrix& s = cartesian_transform_matrix();
    CHECK(s * s.adjoint() == ExactMatrix::identity(3));
    CHECK(s.adjoint() * s == ExactMatrix::identity(3));
    CHECK(s(1, 0) == -I * sq(2).inverse());
    CHECK(s(1, 1).is_zero());
    CHECK(s(1, 2) == -I * sq(2).inverse());
    CHECK(detail::determinant3(reference::spherical_to_cartesian_table()).is_zero());

    CHECK(to_cartesian(build_curl_cg(1)) == reference::cartesian_curl());
    CHECK(to_cartesian(build_curl_cg(1)).tag() == BasisTag::cartesian());
    CHECK(to_cartesian(OpMatrix::identity(3)) == OpMatrix::identity(3));
    CHECK(compose(cartesian_transform(), cartesian_transform_inverse()) == OpMatrix::identity(3));
    CHECK_THROWS_AS(to_cartesian(build_curl_cg(2)), shape_error);
    CHECK_THROWS_AS(to_cartesian(build_grad(1)), shape_error);
    CHECK(detail::cartesian_transform_candidates(build_curl_cg(1)).size() == 1);
}

TEST_CASE("cartesian curls")
{
    const auto curls = build_cartesian_curls();
    CHECK(curls.curl == reference::cartesian_curl());
    CHECK(curls.complex_curl == scale(1 + I, curls.curl));
    CHECK(compose(curls.complex_curl, curls.complex_curl) == scale(2 * I, compose(curls.curl, curls.curl)));
    CHECK(formal_adjoint(curls.hermitian_curl) == curls.hermitian_curl);
    CHECK(compose(cartesian_div(), curls.curl).is_zero());
    CHECK(compose(curls.curl, cartesian_grad()).is_zero());
}

TEST_CASE("rank-2 curl of a tensor with only T12 = T21")
{
    Rank2Tensor<DiffPoly> t;
    t[0][1] = t[1][0] = DiffPoly(1);
    const auto out = curl_rank2_cartesian(t, symbolic_derivative);
    CHECK(out[0][0] == -dz());
    CHECK(out[1][1] == dz());
    CHECK(out[2][2].is_zero());
    CHECK(out[0][1].is_zero());
    CHECK(out[0][2] == frac(1, 2) * dx());
    CHECK(out[1][2] == frac(-1, 2) * dy());
    CHECK(out[2][1] == out[1][2]);

    Rank2Tensor<DiffPoly> zero;
    const auto z = curl_rank2_cartesian(zero, symbolic_derivative);
    for (const auto& row : z)
        for (const auto& v : row) CHECK(v.is_zero());
}

TEST_CASE("rank-2 curl rejects invalid input")
{
    Rank2Tensor<DiffPoly> asym;
    asym[0][1] = DiffPoly(1);
    CHECK_THROWS_AS(curl_rank2_cartesian(asym, symbolic_derivative), std::invalid_argument);
    Rank2Tensor<DiffPoly> trace;
    trace[0][0] = DiffPoly(1);
    CHECK_THROWS_AS(curl_rank2_cartesian(trace, symbolic_derivative), std::invalid_argument);
}

TEST_CASE("rank-2 basis is orthonormal, symmetric and traceless")
{
    const auto& basis = rank2_basis();
    for (int a = 0; a < 5; ++a) {
        ExactScalar tr;
        for (int i = 0; i < 3; ++i) tr += basis[a](i, i);
        CHECK(tr.is_zero());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(basis[a](i, j) == basis[a](j, i));
        for (int b = 0; b < 5; ++b) {
            ExactScalar dot;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) dot += basis[a](i, j).conj() * basis[b](i, j);
            CHECK(dot == ExactScalar(a == b ? 1 : 0));
        }
    }
}

TEST_CASE("l = 2 curl intertwines with the cartesian rank-2 curl")
{
    // For each spherical basis vector e_m: sum_m' B_m' CURL2(m', m) == curl(B_m), symbolically.
    const auto& basis = rank2_basis();
    const OpMatrix c2 = build_curl_cg(2);
    for (int col = 0; col < 5; ++col) {
        INFO("column " << col);
        const auto rhs = curl_rank2_cartesian(constant_tensor(basis[col], DiffPoly(1)), symbolic_derivative);
        Rank2Tensor<DiffPoly> lhs;
        for (int row = 0; row < 5; ++row) {
            const auto term = constant_tensor(basis[row], c2(row, col));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) lhs[i][j] += term[i][j];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(lhs[i][j] == rhs[i][j]);
    }
}
