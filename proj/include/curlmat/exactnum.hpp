#ifndef CURLMAT_EXACTNUM_HPP
#define CURLMAT_EXACTNUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace curlmat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Splits d into s*s*r with r squarefree, by trial division up to sqrt(d).
/// Returns {s, r}; d == 0 yields {0, 0}.
inline std::pair<std::uint64_t, std::uint64_t> squarefree_split(std::uint64_t d)
{
    if (d == 0) return {0, 0};
    std::uint64_t square = 1;
    std::uint64_t rest = d;
    for (std::uint64_t p = 2; p <= rest / p; ++p) {
        const std::uint64_t pp = p * p;
        while (rest % pp == 0) {
            rest /= pp;
            square *= p;
        }
    }
    return {square, rest};
}

/// A rational multiple of the square root of a squarefree positive integer.
struct Radical
{
    Rational coeff;
    std::uint64_t radicand = 1;

    friend bool operator==(const Radical&, const Radical&) = default;
};

/// Canonicalises c*sqrt(d). Returns nullopt for the zero value (c == 0 or d == 0).
inline std::optional<Radical> normalize_radical(const Rational& c, std::uint64_t d)
{
    if (c == 0 || d == 0) return std::nullopt;
    const auto [square, rest] = squarefree_split(d);
    return Radical{c * Rational(square), rest};
}

namespace detail {

// sqrt(d1) * sqrt(d2) for squarefree d1, d2: d1*d2 = g^2 * (d1/g)(d2/g).
inline std::pair<std::uint64_t, std::uint64_t> radical_product(std::uint64_t d1, std::uint64_t d2)
{
    const std::uint64_t g = std::gcd(d1, d2);
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(d1 / g, d2 / g, &r))
        throw std::overflow_error("radicand product exceeds 64 bits");
    return {g, r};
}

using Terms = std::vector<Radical>;

inline void accumulate(Terms& terms, const Rational& coeff, std::uint64_t radicand)
{
    if (coeff == 0) return;
    auto it = std::lower_bound(terms.begin(), terms.end(), radicand,
                               [](const Radical& t, std::uint64_t d) { return t.radicand < d; });
    if (it != terms.end() && it->radicand == radicand) {
        it->coeff += coeff;
        if (it->coeff == 0) terms.erase(it);
    } else {
        terms.insert(it, Radical{coeff, radicand});
    }
}

inline void accumulate_product(Terms& out, const Terms& a, const Terms& b, int sign)
{
    for (const auto& x : a)
        for (const auto& y : b) {
            const auto [g, r] = radical_product(x.radicand, y.radicand);
            Rational c = x.coeff * y.coeff * Rational(g);
            if (sign < 0) c = -c;
            accumulate(out, c, r);
        }
}

inline double terms_to_double(const Terms& terms)
{
    double s = 0.0;
    for (const auto& t : terms) {
        const double c = static_cast<double>(t.coeff);
        s += t.radicand == 1 ? c : c * std::sqrt(static_cast<double>(t.radicand));
    }
    return s;
}

} // namespace detail

/// Complex number sum_d (a_d + i b_d) sqrt(d) with rational a_d, b_d and
/// squarefree d. Terms are kept sorted by radicand with zeros dropped, so
/// equality is structural.
class ExactScalar
{
public:
    ExactScalar() = default;
    ExactScalar(int v) : ExactScalar(Rational(v)) {}
    ExactScalar(long long v) : ExactScalar(Rational(v)) {}
    ExactScalar(const Rational& r)
    {
        if (r != 0) re_.push_back(Radical{r, 1});
    }

    static ExactScalar i() { return from_terms({}, {Radical{Rational(1), 1}}); }

    static ExactScalar rational(long long num, long long den) { return ExactScalar(Rational(num, den)); }

    /// Principal square root of a rational; negative input gives i*sqrt(-r).
    static ExactScalar sqrt(const Rational& r)
    {
        if (r == 0) return {};
        const bool negative = r < 0;
        const Rational a = negative ? Rational(-r) : r;
        // sqrt(n/d) = sqrt(n*d)/d
        const Integer n = boost::multiprecision::numerator(a);
        const Integer d = boost::multiprecision::denominator(a);
        const Integer nd = n * d;
        if (nd > Integer(std::numeric_limits<std::uint64_t>::max()))
            throw std::overflow_error("radicand exceeds 64 bits");
        auto rad = normalize_radical(Rational(Integer(1), d), static_cast<std::uint64_t>(nd));
        ExactScalar out;
        if (negative)
            out.im_.push_back(*rad);
        else
            out.re_.push_back(*rad);
        return out;
    }

    static ExactScalar from_terms(detail::Terms re, detail::Terms im)
    {
        ExactScalar out;
        for (const auto& t : re) {
            auto n = normalize_radical(t.coeff, t.radicand);
            if (n) detail::accumulate(out.re_, n->coeff, n->radicand);
        }
        for (const auto& t : im) {
            auto n = normalize_radical(t.coeff, t.radicand);
            if (n) detail::accumulate(out.im_, n->coeff, n->radicand);
        }
        return out;
    }

    const detail::Terms& re_terms() const { return re_; }
    const detail::Terms& im_terms() const { return im_; }

    bool is_zero() const { return re_.empty() && im_.empty(); }
    bool is_real() const { return im_.empty(); }
    bool is_rational() const { return im_.empty() && (re_.empty() || (re_.size() == 1 && re_[0].radicand == 1)); }

    /// Rational value; throws if the scalar is not rational.
    Rational to_rational() const
    {
        if (!is_rational()) throw std::domain_error("scalar is not rational");
        return re_.empty() ? Rational(0) : re_[0].coeff;
    }

    ExactScalar real_part() const { return from_sorted(re_, {}); }
    ExactScalar imag_part() const { return from_sorted(im_, {}); }

    std::complex<double> to_complex() const
    {
        return {detail::terms_to_double(re_), detail::terms_to_double(im_)};
    }

    ExactScalar conj() const
    {
        ExactScalar out = *this;
        for (auto& t : out.im_) t.coeff = -t.coeff;
        return out;
    }

    ExactScalar operator-() const
    {
        ExactScalar out = *this;
        for (auto& t : out.re_) t.coeff = -t.coeff;
        for (auto& t : out.im_) t.coeff = -t.coeff;
        return out;
    }

    ExactScalar& operator+=(const ExactScalar& o)
    {
        for (const auto& t : o.re_) detail::accumulate(re_, t.coeff, t.radicand);
        for (const auto& t : o.im_) detail::accumulate(im_, t.coeff, t.radicand);
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) { return *this += -o; }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }

    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b)
    {
        ExactScalar out;
        detail::accumulate_product(out.re_, a.re_, b.re_, +1);
        detail::accumulate_product(out.re_, a.im_, b.im_, -1);
        detail::accumulate_product(out.im_, a.re_, b.im_, +1);
        detail::accumulate_product(out.im_, a.im_, b.re_, +1);
        return out;
    }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    /// Inverse, available when z * conj(z) is rational (e.g. at most one
    /// radicand in each of the real and imaginary parts). Throws otherwise.
    ExactScalar inverse() const
    {
        if (is_zero()) throw std::domain_error("division by zero");
        const ExactScalar norm = *this * conj();
        if (!norm.is_rational())
            throw std::domain_error("inverse requires a single radicand per part");
        return conj() * ExactScalar(Rational(1) / norm.to_rational());
    }

    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }

    friend bool operator==(const ExactScalar&, const ExactScalar&) = default;

private:
    static ExactScalar from_sorted(detail::Terms re, detail::Terms im)
    {
        ExactScalar out;
        out.re_ = std::move(re);
        out.im_ = std::move(im);
        return out;
    }

    detail::Terms re_;
    detail::Terms im_;
};

inline ExactScalar conj(const ExactScalar& a) { return a.conj(); }
inline ExactScalar add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline ExactScalar mul(const ExactScalar& a, const ExactScalar& b) { return a * b; }

/// Rational string "p" or "(p/q)"; negatives always parenthesised.
inline std::string rational_to_string(const Rational& r)
{
    const Integer n = boost::multiprecision::numerator(r);
    const Integer d = boost::multiprecision::denominator(r);
    if (d == 1) return n < 0 ? "(" + n.str() + ")" : n.str();
    return "(" + n.str() + "/" + d.str() + ")";
}

namespace detail {

inline std::string term_to_string(const Radical& t)
{
    std::string s = rational_to_string(t.coeff);
    if (t.radicand != 1) s += "*sqrt(" + std::to_string(t.radicand) + ")";
    return s;
}

} // namespace detail

/// Canonical text form, e.g. "(1/2)*sqrt(2) + i*(-1)*sqrt(3)".
inline std::string to_string(const ExactScalar& a)
{
    if (a.is_zero()) return "0";
    std::string out;
    auto sep = [&] {
        if (!out.empty()) out += " + ";
    };
    for (const auto& t : a.re_terms()) {
        sep();
        out += detail::term_to_string(t);
    }
    for (const auto& t : a.im_terms()) {
        sep();
        out += "i*" + detail::term_to_string(t);
    }
    return out;
}

namespace detail {

// |coeff| * sqrt(radicand) in LaTeX, without sign.
inline std::string radical_latex_abs(const Radical& t)
{
    const Rational a = t.coeff < 0 ? Rational(-t.coeff) : t.coeff;
    const Integer n = boost::multiprecision::numerator(a);
    const Integer d = boost::multiprecision::denominator(a);
    const std::string root = t.radicand == 1 ? "" : "\\sqrt{" + std::to_string(t.radicand) + "}";
    std::string num;
    if (root.empty())
        num = n.str();
    else
        num = n == 1 ? root : n.str() + root;
    if (d == 1) return num;
    return "\\frac{" + num + "}{" + d.str() + "}";
}

} // namespace detail

/// LaTeX form of a scalar; a lone unit coefficient prints as "1", "-1", "i", "-i".
inline std::string to_latex(const ExactScalar& a)
{
    if (a.is_zero()) return "0";
    std::string out;
    auto emit = [&](const Radical& t, bool imag) {
        const bool neg = t.coeff < 0;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        const std::string mag = detail::radical_latex_abs(t);
        if (!imag)
            out += mag;
        else
            out += mag == "1" ? "i" : mag + "i";
    };
    for (const auto& t : a.re_terms()) emit(t, false);
    for (const auto& t : a.im_terms()) emit(t, true);
    return out;
}

} // namespace curlmat

#endif // CURLMAT_EXACTNUM_HPP
