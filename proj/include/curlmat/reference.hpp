#ifndef CURLMAT_REFERENCE_HPP
#define CURLMAT_REFERENCE_HPP

#include <initializer_list>

#include "curlmat/diffop.hpp"

// Closed-form operator tables for l = 1 and l = 2, transcribed entry by entry
// in the descending-m basis. They are test vectors for the builders: the
// builders never read them, and the convention oracle selects the convention
// that reproduces the curl tables exactly.
namespace curlmat::reference {

namespace detail {

inline ExactScalar I() { return ExactScalar::i(); }
inline ExactScalar sqrt_of(long long num, long long den = 1) { return ExactScalar::sqrt(Rational(num, den)); }
inline ExactScalar frac(long long num, long long den) { return ExactScalar::rational(num, den); }
inline DiffPoly d_minus() { return dx() - I() * dy(); } // dx - i dy
inline DiffPoly d_plus() { return dx() + I() * dy(); }  // dx + i dy

inline OpMatrix table(std::initializer_list<std::initializer_list<DiffPoly>> rows, BasisTag tag)
{
    const std::size_t r = rows.size();
    const std::size_t c = rows.begin()->size();
    OpMatrix out(r, c, tag);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (const auto& e : row) out(i, j++) = e;
        ++i;
    }
    return out;
}

} // namespace detail

/// Hermitian l = 1 curl: the bracketed matrix that CURL(1) multiplies by 1/i.
inline OpMatrix curl_hermitian_l1()
{
    using namespace detail;
    const ExactScalar h = sqrt_of(2) * frac(1, 2);
    return table({{dz(), h * d_minus(), 0},
                  {h * d_plus(), 0, h * d_minus()},
                  {0, h * d_plus(), -dz()}},
                 BasisTag::spherical(1, 1));
}

inline OpMatrix curl_l1() { return scale(detail::I().inverse(), curl_hermitian_l1()); }

inline OpMatrix curl_l2()
{
    using namespace detail;
    const ExactScalar s = sqrt_of(6) * frac(1, 2);
    const OpMatrix inner = table({{2 * ExactScalar(1) * dz(), d_minus(), 0, 0, 0},
                                  {d_plus(), dz(), s * d_minus(), 0, 0},
                                  {0, s * d_plus(), 0, s * d_minus(), 0},
                                  {0, 0, s * d_plus(), -dz(), d_minus()},
                                  {0, 0, 0, d_plus(), ExactScalar(-2) * dz()}},
                                 BasisTag::spherical(2, 2));
    return scale((ExactScalar(2) * I()).inverse(), inner);
}

/// Real and imaginary parts of curl_l1(): curl_l1() = real + i * imag.
inline OpMatrix curl_l1_real_part()
{
    using namespace detail;
    const ExactScalar h = sqrt_of(2) * frac(1, 2);
    return table({{0, -h * dy(), 0}, {h * dy(), 0, -h * dy()}, {0, h * dy(), 0}}, BasisTag::spherical(1, 1));
}

inline OpMatrix curl_l1_imag_part()
{
    using namespace detail;
    const ExactScalar h = sqrt_of(2) * frac(1, 2);
    return table({{-dz(), -h * dx(), 0}, {-h * dx(), 0, -h * dx()}, {0, -h * dx(), dz()}}, BasisTag::spherical(1, 1));
}

inline OpMatrix curl_l1_squared()
{
    using namespace detail;
    const ExactScalar h = sqrt_of(2) * frac(1, 2);
    const ExactScalar half = frac(1, 2);
    const DiffPoly xx = dx() * dx(), yy = dy() * dy(), zz = dz() * dz();
    const DiffPoly xz = dx() * dz(), yz = dy() * dz(), xy = dx() * dy();
    const OpMatrix re = table({{-zz - half * (xx + yy), -h * xz, -half * (xx - yy)},
                               {-h * xz, -(xx + yy), h * xz},
                               {-half * (xx - yy), h * xz, -zz - half * (xx + yy)}},
                              BasisTag::spherical(1, 1));
    const OpMatrix im = table({{0, h * yz, xy}, {-h * yz, 0, -h * yz}, {-xy, h * yz, 0}}, BasisTag::spherical(1, 1));
    return re + scale(I(), im);
}

/// The complex curl at l = 1, written as (1 - i) times the hermitian curl.
inline OpMatrix curl_complex_l1() { return scale(ExactScalar(1) - detail::I(), curl_hermitian_l1()); }

inline OpMatrix grad_l1()
{
    using namespace detail;
    const ExactScalar half = frac(1, 2);
    const ExactScalar a = (ExactScalar(2) * sqrt_of(2)).inverse();  // 1/(2 sqrt 2)
    const ExactScalar b = (ExactScalar(2) * sqrt_of(6)).inverse();  // 1/(2 sqrt 6)
    const ExactScalar c = sqrt_of(3).inverse();                     // 1/sqrt 3
    return table({{-half * d_minus(), 0, 0},
                  {half * dz(), -a * d_minus(), 0},
                  {b * d_plus(), c * dz(), -b * d_minus()},
                  {0, a * d_plus(), half * dz()},
                  {0, 0, half * d_plus()}},
                 BasisTag::spherical(1, 2));
}

inline OpMatrix div_l2()
{
    using namespace detail;
    const ExactScalar r6 = sqrt_of(6).inverse();
    const ExactScalar r2 = sqrt_of(2).inverse();
    const ExactScalar two_r3 = ExactScalar(2) * sqrt_of(3).inverse();
    return table({{-d_plus(), dz(), r6 * d_minus(), 0, 0},
                  {0, -r2 * d_minus(), two_r3 * dz(), r2 * d_minus(), 0},
                  {0, 0, -r6 * d_minus(), dz(), d_minus()}},
                 BasisTag::spherical(2, 1));
}

inline OpMatrix cartesian_curl()
{
    return detail::table({{0, -dz(), dy()}, {dz(), 0, -dx()}, {-dy(), dx(), 0}}, BasisTag::cartesian());
}

/// Spherical-to-cartesian table as transcribed; its second row is i times
/// the first, so it is singular.
inline ExactMatrix spherical_to_cartesian_table()
{
    using namespace detail;
    const ExactScalar r = sqrt_of(1, 2);
    ExactMatrix s(3, 3);
    s(0, 0) = -r;
    s(0, 2) = r;
    s(1, 0) = -I() * r;
    s(1, 2) = I() * r;
    s(2, 1) = ExactScalar(1);
    return s;
}

} // namespace curlmat::reference

#endif // CURLMAT_REFERENCE_HPP
