#ifndef CURLMAT_FORMAT_HPP
#define CURLMAT_FORMAT_HPP

#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "curlmat/diffop.hpp"

namespace curlmat {

namespace detail {

inline const char* axis_name(int axis)
{
    static const char* names[] = {"x", "y", "z"};
    return names[axis];
}

inline std::string mono_text(const DiffMono& m)
{
    std::string s;
    for (int ax = 0; ax < 3; ++ax) {
        if (m.exp[ax] == 0) continue;
        if (!s.empty()) s += "*";
        s += std::string("d") + axis_name(ax);
        if (m.exp[ax] > 1) s += "^" + std::to_string(m.exp[ax]);
    }
    return s;
}

inline std::string mono_latex(const DiffMono& m)
{
    std::string s;
    for (int ax = 0; ax < 3; ++ax) {
        if (m.exp[ax] == 0) continue;
        s += std::string("\\partial_{") + axis_name(ax) + "}";
        if (m.exp[ax] > 1) s += "^{" + std::to_string(m.exp[ax]) + "}";
    }
    return s;
}

// Terms in dx, dy, dz display order (the map orders dz first).
inline std::vector<std::pair<DiffMono, ExactScalar>> display_terms(const DiffPoly& p)
{
    return {p.terms().rbegin(), p.terms().rend()};
}

inline bool needs_parens(const std::string& s)
{
    return s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos;
}

// Coefficient c in front of a monomial: "", "-", "i", "\frac{1}{2}", "(1 - i)".
inline std::string coefficient_prefix_latex(const ExactScalar& c, bool has_mono)
{
    if (!has_mono) return to_latex(c);
    if (c == ExactScalar(1)) return "";
    if (c == ExactScalar(-1)) return "-";
    const std::string s = to_latex(c);
    return needs_parens(s) ? "(" + s + ")" : s;
}

// A ratio that prints as a signed unit-like factor inside a parenthesised sum.
inline bool is_simple_ratio(const ExactScalar& r)
{
    const bool real_rational = r.is_rational();
    const bool imag_rational = r.re_terms().empty() && r.im_terms().size() == 1 && r.im_terms()[0].radicand == 1;
    return real_rational || imag_rational;
}

} // namespace detail

inline std::string to_string(const DiffPoly& p)
{
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : detail::display_terms(p)) {
        if (!out.empty()) out += " + ";
        std::string coeff = to_string(c);
        if (detail::needs_parens(coeff)) coeff = "(" + coeff + ")";
        const std::string mono = detail::mono_text(m);
        if (mono.empty())
            out += coeff;
        else if (c == ExactScalar(1))
            out += mono;
        else if (c == ExactScalar(-1))
            out += "-" + mono;
        else
            out += coeff + "*" + mono;
    }
    return out;
}

/// LaTeX form; common factors of linear combinations are pulled out so
/// that e.g. (sqrt2/2) dx - i (sqrt2/2) dy prints as \frac{\sqrt{2}}{2}(\partial_{x} - i\partial_{y}).
inline std::string to_latex(const DiffPoly& p)
{
    if (p.is_zero()) return "0";
    const auto terms = detail::display_terms(p);
    if (terms.size() == 1) {
        const auto& [m, c] = terms.front();
        const std::string mono = detail::mono_latex(m);
        return detail::coefficient_prefix_latex(c, !mono.empty()) + mono;
    }

    const ExactScalar factor = terms.front().second;
    std::vector<ExactScalar> ratios;
    bool factorable = true;
    try {
        const ExactScalar inv = factor.inverse();
        for (const auto& [m, c] : terms) {
            ratios.push_back(c * inv);
            if (!detail::is_simple_ratio(ratios.back())) factorable = false;
        }
    } catch (const std::domain_error&) {
        factorable = false;
    }

    std::string inner;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const ExactScalar c = factorable ? ratios[t] : terms[t].second;
        const std::string mono = detail::mono_latex(terms[t].first);
        std::string coeff = detail::coefficient_prefix_latex(c, !mono.empty());
        std::string piece = coeff + mono;
        if (t == 0) {
            inner = piece;
        } else if (!piece.empty() && piece.front() == '-') {
            inner += " - " + piece.substr(1);
        } else {
            inner += " + " + piece;
        }
    }
    if (!factorable) return inner;
    if (factor == ExactScalar(1)) return inner;
    if (factor == ExactScalar(-1)) return "-(" + inner + ")";
    std::string f = to_latex(factor);
    if (detail::needs_parens(f)) f = "(" + f + ")";
    return f + "(" + inner + ")";
}

inline std::string to_text(const OpMatrix& a)
{
    std::ostringstream os;
    os << a.rows() << "x" << a.cols() << " " << to_string(a.tag()) << "\n";
    for (std::size_t r = 0; r < a.rows(); ++r) {
        os << "[ ";
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (c) os << " ; ";
            os << to_string(a(r, c));
        }
        os << " ]\n";
    }
    return os.str();
}

/// LaTeX array. With a prefactor p the printed matrix is A / p, preceded by
/// the supplied LaTeX for p, e.g. "\frac{1}{i}".
inline std::string to_latex(const OpMatrix& a, const std::optional<std::pair<ExactScalar, std::string>>& prefactor = {})
{
    OpMatrix shown = a;
    std::string lead;
    if (prefactor) {
        shown = scale(prefactor->first.inverse(), a);
        lead = prefactor->second;
    }
    std::ostringstream os;
    os << lead << "\\left(\n\\begin{array}{" << std::string(a.cols(), 'c') << "}\n";
    for (std::size_t r = 0; r < shown.rows(); ++r) {
        for (std::size_t c = 0; c < shown.cols(); ++c) {
            if (c) os << " & ";
            os << to_latex(shown(r, c));
        }
        os << (r + 1 < shown.rows() ? " \\\\\n" : "\n");
    }
    os << "\\end{array}\\right)";
    return os.str();
}

inline std::string rational_json(const Rational& r)
{
    const Integer n = boost::multiprecision::numerator(r);
    const Integer d = boost::multiprecision::denominator(r);
    return d == 1 ? n.str() : n.str() + "/" + d.str();
}

inline nlohmann::json to_json(const ExactScalar& s)
{
    auto part = [](const detail::Terms& terms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : terms) arr.push_back({rational_json(t.coeff), t.radicand});
        return arr;
    };
    return {{"re", part(s.re_terms())}, {"im", part(s.im_terms())}};
}

inline nlohmann::json to_json(const DiffPoly& p)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [m, c] : detail::display_terms(p)) {
        nlohmann::json term = to_json(c);
        term["d"] = {m.exp[0], m.exp[1], m.exp[2]};
        arr.push_back(std::move(term));
    }
    return arr;
}

inline nlohmann::json to_json(const BasisTag& t)
{
    switch (t.kind) {
    case BasisKind::spherical:
        return {{"kind", "spherical"}, {"l_in", t.l_in}, {"l_out", t.l_out}};
    case BasisKind::cartesian:
        return {{"kind", "cartesian"}};
    default:
        return {{"kind", "generic"}};
    }
}

inline nlohmann::json to_json(const OpMatrix& a)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(to_json(a(r, c)));
        rows.push_back(std::move(row));
    }
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"basis", to_json(a.tag())}, {"entries", std::move(rows)}};
}

} // namespace curlmat

#endif // CURLMAT_FORMAT_HPP
