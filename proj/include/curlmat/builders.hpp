#ifndef CURLMAT_BUILDERS_HPP
#define CURLMAT_BUILDERS_HPP

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "curlmat/angular.hpp"
#include "curlmat/diffop.hpp"
#include "curlmat/format.hpp"
#include "curlmat/reference.hpp"

namespace curlmat {

// ---------------------------------------------------------------------------
// Conventions

/// Spherical derivative components
///   d_{+1} = plus_sign * (dx + i dy)/sqrt2,  d_0 = dz,  d_{-1} = minus_sign * (dx - i dy)/sqrt2,
/// optionally conjugated (coefficients only) before entering the coupling sum.
/// The sign of d_0 is fixed: flipping it is equivalent to a global phase.
struct DerivativeConvention
{
    int plus_sign = -1;
    int minus_sign = 1;
    bool conjugate = true;

    friend bool operator==(const DerivativeConvention&, const DerivativeConvention&) = default;
};

enum class CouplingReading { clebsch_gordan, wigner_3j };

inline std::string to_string(CouplingReading r)
{
    return r == CouplingReading::clebsch_gordan ? "clebsch-gordan" : "wigner-3j";
}

struct OperatorConvention
{
    DerivativeConvention derivative;
    CouplingReading reading = CouplingReading::clebsch_gordan;
    int curl_sign = 1; // curl prefactor is curl_sign * i * sqrt(l(l+1)) / l

    friend bool operator==(const OperatorConvention&, const OperatorConvention&) = default;
};

inline DiffPoly spherical_derivative(int q, const DerivativeConvention& conv)
{
    const ExactScalar r = ExactScalar::sqrt(Rational(1, 2));
    const ExactScalar i = ExactScalar::i();
    switch (q) {
    case 1:
        return ExactScalar(conv.plus_sign) * r * (dx() + i * dy());
    case 0:
        return dz();
    case -1:
        return ExactScalar(conv.minus_sign) * r * (dx() - i * dy());
    default:
        throw std::domain_error("spherical derivative component must be -1, 0 or 1");
    }
}

/// The derivative component that multiplies the coupling coefficient.
inline DiffPoly coupled_derivative(int q, const DerivativeConvention& conv)
{
    DiffPoly d = spherical_derivative(q, conv);
    return conv.conjugate ? d.conj() : d;
}

inline ExactScalar coupling_coefficient(CouplingReading reading, int l, int l_out, int q, int m_in, int m_out)
{
    if (reading == CouplingReading::clebsch_gordan) return clebsch_gordan(1, q, l, m_in, l_out, m_out);
    return wigner_3j(1, l, l_out, q, m_in, m_out);
}

namespace detail {

// Entry (m_out, m_in) = prefactor * coupling(1, m_out - m_in; l, m_in | l_out, m_out) * d*_{m_out - m_in}.
inline OpMatrix assemble_coupled(int l, int l_out, const ExactScalar& prefactor, const OperatorConvention& conv)
{
    OpMatrix out(2 * l_out + 1, 2 * l + 1, BasisTag::spherical(l, l_out));
    for (int m_out = l_out; m_out >= -l_out; --m_out)
        for (int m_in = l; m_in >= -l; --m_in) {
            const int q = m_out - m_in;
            if (q < -1 || q > 1) continue;
            const ExactScalar c = coupling_coefficient(conv.reading, l, l_out, q, m_in, m_out);
            if (c.is_zero()) continue;
            out(basis_index(l_out, m_out), basis_index(l, m_in)) = (prefactor * c) * coupled_derivative(q, conv.derivative);
        }
    return out;
}

} // namespace detail

inline OpMatrix build_div(int l, const OperatorConvention& conv)
{
    if (l < 1) throw std::domain_error("build_div: l must be >= 1");
    const ExactScalar pref = -ExactScalar::sqrt(Rational(l * (2 * l + 1), 2 * l - 1));
    return detail::assemble_coupled(l, l - 1, pref, conv);
}

inline OpMatrix build_grad(int l, const OperatorConvention& conv)
{
    if (l < 0) throw std::domain_error("build_grad: l must be >= 0");
    const ExactScalar pref = ExactScalar::sqrt(Rational(1, l + 1));
    return detail::assemble_coupled(l, l + 1, pref, conv);
}

inline OpMatrix build_curl_cg(int l, const OperatorConvention& conv)
{
    if (l < 1) throw std::domain_error("build_curl_cg: l must be >= 1");
    const ExactScalar pref =
        ExactScalar(conv.curl_sign) * ExactScalar::i() * ExactScalar::sqrt(Rational(l * (l + 1))) * ExactScalar::rational(1, l);
    return detail::assemble_coupled(l, l, pref, conv);
}

// ---------------------------------------------------------------------------
// Curl from angular momentum matrices

/// (Lx dx + Ly dy + Lz dz) / (i l).
inline OpMatrix build_curl_ldotgrad(int l)
{
    const AngularMatrices am = angular_matrices(l);
    const std::size_t n = 2 * l + 1;
    OpMatrix out(n, n, BasisTag::spherical(l, l));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = am.Lx(r, c) * dx() + am.Ly(r, c) * dy() + am.Lz(r, c) * dz();
    return scale((ExactScalar::i() * ExactScalar(l)).inverse(), out);
}

/// How the ladder derivatives pair with L+ and L-.
enum class LadderDerivatives {
    complex_pair, // d_pm = dx +- i dy
    real_pair     // d_pm = dx +- dy
};

/// [Lz dz + (L+ d_- + L- d_+) / 2] / (i l).
inline OpMatrix build_curl_ladder(int l, LadderDerivatives form = LadderDerivatives::complex_pair)
{
    const AngularMatrices am = angular_matrices(l);
    const ExactScalar unit = form == LadderDerivatives::complex_pair ? ExactScalar::i() : ExactScalar(1);
    const DiffPoly d_plus = dx() + unit * dy();
    const DiffPoly d_minus = dx() - unit * dy();
    const ExactScalar half = ExactScalar::rational(1, 2);
    const std::size_t n = 2 * l + 1;
    OpMatrix out(n, n, BasisTag::spherical(l, l));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out(r, c) = am.Lz(r, c) * dz() + (half * am.Lplus(r, c)) * d_minus + (half * am.Lminus(r, c)) * d_plus;
    return scale((ExactScalar::i() * ExactScalar(l)).inverse(), out);
}

// ---------------------------------------------------------------------------
// Convention ledger

struct Erratum
{
    std::string id;
    std::string detail;
};

struct ConventionLedger
{
    int version = 1;
    OperatorConvention selected;
    std::size_t candidates_examined = 0;
    std::size_t candidates_accepted = 0;
    std::map<std::string, ExactScalar> global_phase;
    ExactMatrix cartesian_transform;
    std::vector<Erratum> errata;
};

/// Every (derivative signs, conjugation, coupling reading, curl sign) combination.
inline std::vector<OperatorConvention> convention_candidates()
{
    std::vector<OperatorConvention> out;
    for (int plus : {-1, 1})
        for (int minus : {1, -1})
            for (bool conj : {true, false})
                for (auto reading : {CouplingReading::clebsch_gordan, CouplingReading::wigner_3j})
                    for (int sign : {1, -1}) out.push_back({{plus, minus, conj}, reading, sign});
    return out;
}

inline bool reproduces_curl_tables(const OperatorConvention& conv)
{
    return build_curl_cg(1, conv) == reference::curl_l1() && build_curl_cg(2, conv) == reference::curl_l2();
}

namespace detail {

inline ExactScalar determinant3(const ExactMatrix& m)
{
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline OpMatrix similarity(const ExactMatrix& s, const OpMatrix& a)
{
    return compose(compose(OpMatrix::constant(s), a), OpMatrix::constant(s.adjoint()));
}

// Keeps rows 1 and 3 of the transcribed table and searches row 2 over
// unit-modulus multiples of 1/sqrt2 in the two nonzero slots.
inline std::vector<ExactMatrix> cartesian_transform_candidates(const OpMatrix& curl1)
{
    const ExactMatrix table = reference::spherical_to_cartesian_table();
    const ExactScalar r = ExactScalar::sqrt(Rational(1, 2));
    const ExactScalar i = ExactScalar::i();
    const std::array<ExactScalar, 4> phases = {ExactScalar(1), ExactScalar(-1), i, -i};
    const OpMatrix target = reference::cartesian_curl();
    std::vector<ExactMatrix> out;
    for (const auto& a : phases)
        for (const auto& b : phases) {
            ExactMatrix s = table;
            s(1, 0) = a * r;
            s(1, 2) = b * r;
            if (!(s * s.adjoint() == ExactMatrix::identity(3))) continue;
            if (similarity(s, curl1).entries() == target.entries()) out.push_back(s);
        }
    return out;
}

inline std::string describe_mismatches(const OpMatrix& built, const OpMatrix& table)
{
    std::string out;
    for (std::size_t r = 0; r < built.rows(); ++r)
        for (std::size_t c = 0; c < built.cols(); ++c) {
            if (built(r, c) == table(r, c)) continue;
            if (!out.empty()) out += "; ";
            out += "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + "): table " + to_string(table(r, c)) +
                   ", construction " + to_string(built(r, c));
        }
    return out;
}

inline ConventionLedger select_conventions()
{
    ConventionLedger ledger;
    std::vector<OperatorConvention> accepted;
    for (const auto& conv : convention_candidates()) {
        ++ledger.candidates_examined;
        if (reproduces_curl_tables(conv)) accepted.push_back(conv);
    }
    ledger.candidates_accepted = accepted.size();
    if (accepted.size() != 1)
        throw std::logic_error("convention oracle expected exactly one candidate, found " + std::to_string(accepted.size()));
    ledger.selected = accepted.front();
    const OperatorConvention& conv = ledger.selected;

    ledger.global_phase["div"] = ExactScalar(1);
    ledger.global_phase["grad"] = ExactScalar(1);
    ledger.global_phase["curl"] = ExactScalar(conv.curl_sign);

    auto& errata = ledger.errata;
    if (conv.curl_sign == 1)
        errata.push_back({"curl-prefactor-sign",
                          "alternate curl prefactor -i*sqrt(l(l+1))/l does not reproduce the l=1,2 curl tables; "
                          "+i*sqrt(l(l+1))/l selected"});
    else
        errata.push_back({"curl-prefactor-sign",
                          "curl prefactor +i*sqrt(l(l+1))/l does not reproduce the l=1,2 curl tables; "
                          "-i*sqrt(l(l+1))/l selected"});
    errata.push_back({"coupling-reading",
                      "coefficient arrays read as " + to_string(conv.reading) +
                          " coefficients <1 m1-m2; l m2 | l' m1>; the other reading fails the curl tables"});

    if (build_curl_ladder(1, LadderDerivatives::real_pair) != reference::curl_l1() &&
        build_curl_ladder(1, LadderDerivatives::complex_pair) == reference::curl_l1())
        errata.push_back({"ladder-derivatives",
                          "ladder form with d_pm = dx +- dy does not reproduce the l=1 curl; d_pm = dx +- i*dy used"});

    if (auto m = describe_mismatches(build_grad(1, conv), reference::grad_l1()); !m.empty())
        errata.push_back({"grad-l1-table", m + " (construction taken as ground truth)"});
    if (auto m = describe_mismatches(build_div(2, conv), reference::div_l2()); !m.empty())
        errata.push_back({"div-l2-table", m + " (construction taken as ground truth)"});

    const OpMatrix curl1 = build_curl_cg(1, conv);
    const auto transforms = cartesian_transform_candidates(curl1);
    if (transforms.size() != 1)
        throw std::logic_error("cartesian transform oracle expected one candidate, found " + std::to_string(transforms.size()));
    ledger.cartesian_transform = transforms.front();
    if (determinant3(reference::spherical_to_cartesian_table()).is_zero()) {
        const ExactMatrix& s = ledger.cartesian_transform;
        errata.push_back({"spherical-to-cartesian-table",
                          "transcribed transform is singular (row 2 = i * row 1); unitary transform with row 2 = (" +
                              to_string(s(1, 0)) + ", 0, " + to_string(s(1, 2)) + ") used"});
    }
    return ledger;
}

} // namespace detail

/// Selected once on first use by enumerating all conventions against the
/// closed-form curl tables; immutable afterwards.
inline const ConventionLedger& convention_ledger()
{
    static const ConventionLedger ledger = detail::select_conventions();
    return ledger;
}

inline const OperatorConvention& selected_convention() { return convention_ledger().selected; }

inline nlohmann::json to_json(const ConventionLedger& ledger)
{
    const auto& c = ledger.selected;
    nlohmann::json phases = nlohmann::json::object();
    for (const auto& [k, v] : ledger.global_phase) phases[k] = to_string(v);
    nlohmann::json transform = nlohmann::json::array();
    for (std::size_t r = 0; r < 3; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t col = 0; col < 3; ++col) row.push_back(to_string(ledger.cartesian_transform(r, col)));
        transform.push_back(row);
    }
    nlohmann::json errata = nlohmann::json::array();
    for (const auto& e : ledger.errata) errata.push_back({{"id", e.id}, {"detail", e.detail}});
    return {{"version", ledger.version},
            {"spherical_derivative",
             {{"plus_sign", c.derivative.plus_sign},
              {"minus_sign", c.derivative.minus_sign},
              {"conjugate", c.derivative.conjugate}}},
            {"coupling_reading", to_string(c.reading)},
            {"curl_sign", c.curl_sign},
            {"candidates_examined", ledger.candidates_examined},
            {"candidates_accepted", ledger.candidates_accepted},
            {"global_phase", phases},
            {"cartesian_transform", transform},
            {"errata", errata}};
}

// ---------------------------------------------------------------------------
// Operators under the selected convention

inline OpMatrix build_div(int l) { return build_div(l, selected_convention()); }
inline OpMatrix build_grad(int l) { return build_grad(l, selected_convention()); }
inline OpMatrix build_curl_cg(int l) { return build_curl_cg(l, selected_convention()); }

/// i * CURL(l); hermitian under formal_adjoint.
inline OpMatrix build_curl_hermitian(int l)
{
    return scale(ExactScalar::i(), build_curl_cg(l));
}

/// CURL_H(l) + CURL(l) = (1 + i) CURL(l) = (1 - i) CURL_H(l).
inline OpMatrix build_curl_complex(int l)
{
    return build_curl_hermitian(l) + build_curl_cg(l);
}

/// Unitary spherical-to-cartesian transform for l = 1 (rows x, y, z).
inline const ExactMatrix& cartesian_transform_matrix() { return convention_ledger().cartesian_transform; }

inline OpMatrix cartesian_transform() { return OpMatrix::constant(cartesian_transform_matrix()); }
inline OpMatrix cartesian_transform_inverse() { return OpMatrix::constant(cartesian_transform_matrix().adjoint()); }

/// S A S^-1 for an l = 1 spherical operator.
inline OpMatrix to_cartesian(const OpMatrix& a)
{
    const auto& t = a.tag();
    const bool ok = a.rows() == 3 && a.cols() == 3 &&
                    (t.kind == BasisKind::generic || (t.kind == BasisKind::spherical && t.l_in == 1 && t.l_out == 1));
    if (!ok) throw shape_error("to_cartesian: expected a 3x3 operator on l = 1 tensors, got " + to_string(t));
    return detail::similarity(cartesian_transform_matrix(), a.with_tag(BasisTag::generic()))
        .with_tag(BasisTag::cartesian());
}

inline OpMatrix cartesian_curl() { return reference::cartesian_curl(); }

inline OpMatrix cartesian_grad()
{
    OpMatrix g(3, 1, BasisTag::cartesian());
    for (int a = 0; a < 3; ++a) g(a, 0) = DiffPoly::d(a);
    return g;
}

inline OpMatrix cartesian_div() { return transpose(cartesian_grad()); }

struct CartesianCurls
{
    OpMatrix curl;           // standard curl
    OpMatrix complex_curl;   // curl + i curl
    OpMatrix hermitian_curl; // i curl
};

inline CartesianCurls build_cartesian_curls()
{
    const OpMatrix c = cartesian_curl();
    return {c, c + scale(ExactScalar::i(), c), scale(ExactScalar::i(), c)};
}

// ---------------------------------------------------------------------------
// Rank-2 cartesian curl

template <class V>
using Rank2Tensor = std::array<std::array<V, 3>, 3>;

/// Entry operations for curl_rank2_cartesian. Specialised for DiffPoly here
/// and for grid samples in spectral.hpp.
template <class V>
struct rank2_value_ops;

template <>
struct rank2_value_ops<DiffPoly>
{
    static DiffPoly half(const DiffPoly& v) { return ExactScalar::rational(1, 2) * v; }
    static double magnitude(const DiffPoly&) { return 0.0; }
    static bool is_zero(const DiffPoly& v, double) { return v.is_zero(); }
};

/// Symmetrised curl of a symmetric traceless rank-2 tensor. `d(axis, v)`
/// differentiates an entry along axis 0, 1, 2. Output is symmetric with
/// diagonal (d2 T13 - d3 T12, d3 T12 - d1 T23, d1 T23 - d2 T13), so its trace
/// vanishes identically.
template <class V, class Deriv>
Rank2Tensor<V> curl_rank2_cartesian(const Rank2Tensor<V>& t, Deriv&& d)
{
    using ops = rank2_value_ops<V>;
    double scale = 0.0;
    for (const auto& row : t)
        for (const auto& v : row) scale = std::max(scale, ops::magnitude(v));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (!ops::is_zero(t[i][j] - t[j][i], scale)) throw std::invalid_argument("curl_rank2_cartesian: tensor is not symmetric");
    if (!ops::is_zero(t[0][0] + t[1][1] + t[2][2], scale))
        throw std::invalid_argument("curl_rank2_cartesian: tensor is not traceless");

    // 1-based names follow the usual index notation: T11 = t[0][0], d1 = d/dx.
    auto T = [&](int i, int j) -> const V& { return t[i - 1][j - 1]; };
    auto D = [&](int axis, const V& v) { return d(axis - 1, v); };

    Rank2Tensor<V> out;
    out[0][0] = D(2, T(1, 3)) - D(3, T(1, 2));
    out[1][1] = D(3, T(1, 2)) - D(1, T(2, 3));
    out[2][2] = D(1, T(2, 3)) - D(2, T(1, 3));
    const V a = ops::half((D(2, T(3, 2)) - D(3, T(2, 2))) + (D(3, T(1, 1)) - D(1, T(3, 1))));
    const V b = ops::half((D(2, T(3, 3)) - D(3, T(2, 3))) + (D(1, T(2, 1)) - D(2, T(1, 1))));
    const V c = ops::half((D(3, T(1, 3)) - D(1, T(3, 3))) + (D(1, T(2, 2)) - D(2, T(1, 2))));
    out[0][1] = out[1][0] = a;
    out[0][2] = out[2][0] = b;
    out[1][2] = out[2][1] = c;
    return out;
}

/// Symbolic derivative: multiplication by the derivative symbol.
inline DiffPoly symbolic_derivative(int axis, const DiffPoly& v) { return DiffPoly::d(axis) * v; }

/// Cartesian image of each l = 2 spherical basis vector:
/// B_m = sum <1 q1; 1 q2 | 2 m> (S e_q1)(S e_q2)^T, indexed by basis_index(2, m).
/// The B_m are orthonormal under the Frobenius product and span the
/// symmetric traceless matrices.
inline const std::array<ExactMatrix, 5>& rank2_basis()
{
    static const std::array<ExactMatrix, 5> basis = [] {
        const ExactMatrix& s = cartesian_transform_matrix();
        std::array<ExactMatrix, 5> out;
        for (int m = 2; m >= -2; --m) {
            ExactMatrix b(3, 3);
            for (int q1 = -1; q1 <= 1; ++q1)
                for (int q2 = -1; q2 <= 1; ++q2) {
                    const ExactScalar cg = clebsch_gordan(1, q1, 1, q2, 2, m);
                    if (cg.is_zero()) continue;
                    const std::size_t c1 = basis_index(1, q1), c2 = basis_index(1, q2);
                    for (std::size_t i = 0; i < 3; ++i)
                        for (std::size_t j = 0; j < 3; ++j) b(i, j) += cg * s(i, c1) * s(j, c2);
                }
            out[basis_index(2, m)] = b;
        }
        return out;
    }();
    return basis;
}

/// Packed storage order for symmetric traceless cartesian tensors.
inline constexpr std::array<std::pair<int, int>, 5> rank2_packed_entries = {{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}}};

} // namespace curlmat

#endif // CURLMAT_BUILDERS_HPP
