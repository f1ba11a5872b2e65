#ifndef CURLMAT_IDENTITIES_HPP
#define CURLMAT_IDENTITIES_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curlmat/builders.hpp"

namespace curlmat {

enum class IdentityStatus { exact_pass, fail };

inline std::string to_string(IdentityStatus s) { return s == IdentityStatus::exact_pass ? "exact-pass" : "fail"; }

struct IdentityReport
{
    std::string identity_id;
    std::vector<int> l_range;
    IdentityStatus status = IdentityStatus::fail;
    std::optional<OpMatrix> witness; // lhs - rhs, present on failure
    double symbol_residual = 0.0;    // max relative |symbol(lhs) - symbol(rhs)| over random real k

    bool passed() const { return status == IdentityStatus::exact_pass; }
};

/// Operator families used by the suites. Replace a member to test a
/// perturbed construction.
struct OperatorSource
{
    std::function<OpMatrix(int)> curl = [](int l) { return build_curl_cg(l); };
    std::function<OpMatrix(int)> div = [](int l) { return build_div(l); };
    std::function<OpMatrix(int)> grad = [](int l) { return build_grad(l); };

    OpMatrix curl_hermitian(int l) const { return scale(ExactScalar::i(), curl(l)); }
    OpMatrix curl_complex(int l) const { return curl_hermitian(l) + curl(l); }
};

/// Copy of `a` with entry (r, c) negated.
inline OpMatrix flip_entry_sign(const OpMatrix& a, std::size_t r, std::size_t c)
{
    OpMatrix out = a;
    out(r, c) = -out(r, c);
    return out;
}

namespace detail {

inline constexpr int symbol_samples = 10;

inline std::atomic<std::uint64_t>& symbol_seed_storage()
{
    static std::atomic<std::uint64_t> seed{0x5eedcafe};
    return seed;
}

inline double symbol_residual(const OpMatrix& lhs, const OpMatrix& rhs)
{
    const CompiledSymbol a(lhs), b(rhs);
    std::mt19937_64 rng(symbol_seed_storage().load());
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int s = 0; s < symbol_samples; ++s) {
        const std::array<double, 3> k = {u(rng), u(rng), u(rng)};
        const SymbolMatrix sa = a.evaluate(k), sb = b.evaluate(k);
        const double scale = std::max({1.0, sa.norm(), sb.norm()});
        worst = std::max(worst, (sa - sb).norm() / scale);
    }
    return worst;
}

inline IdentityReport compare(std::string id, std::vector<int> l_range, const OpMatrix& lhs, const OpMatrix& rhs)
{
    IdentityReport rep;
    rep.identity_id = std::move(id);
    rep.l_range = std::move(l_range);
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        rep.status = IdentityStatus::fail;
        return rep;
    }
    const bool same = lhs.entries() == rhs.entries();
    rep.status = same ? IdentityStatus::exact_pass : IdentityStatus::fail;
    if (!same) rep.witness = lhs.with_tag(BasisTag::generic()) - rhs.with_tag(BasisTag::generic());
    rep.symbol_residual = symbol_residual(lhs, rhs);
    return rep;
}

inline IdentityReport predicate(std::string id, std::vector<int> l_range, bool ok, std::optional<OpMatrix> witness)
{
    IdentityReport rep;
    rep.identity_id = std::move(id);
    rep.l_range = std::move(l_range);
    rep.status = ok ? IdentityStatus::exact_pass : IdentityStatus::fail;
    if (!ok) rep.witness = std::move(witness);
    return rep;
}

inline OpMatrix laplacian_identity(std::size_t n, BasisTag tag) { return laplacian_times(OpMatrix::identity(n, tag), 1); }

inline void require_cap(int degree, const char* what)
{
    if (degree > degree_cap())
        throw degree_cap_exceeded(std::string(what) + ": needs degree " + std::to_string(degree) + ", cap is " +
                                  std::to_string(degree_cap()));
}

// The part of `p` violating the expected symmetry, for use as a witness.
inline OpMatrix symmetry_violation(const OpMatrix& p, bool want_symmetric)
{
    const OpMatrix t = transpose(p).with_tag(p.tag());
    return want_symmetric ? p - t : p + t;
}

// Real/imaginary parity of A^n: odd n -> antisymmetric + i symmetric traceless,
// even n -> symmetric + i antisymmetric.
inline IdentityReport parity_report(const std::string& id, int n, const OpMatrix& power_n, bool real_only)
{
    const SymmetrySplit s = split_symmetry(power_n);
    const bool odd = n % 2 == 1;
    bool ok = true;
    std::optional<OpMatrix> witness;
    auto expect = [&](const PartSymmetry& part, bool want_symmetric, bool want_traceless) {
        const bool sym_ok = want_symmetric ? part.symmetric : part.antisymmetric;
        const bool trace_ok = !want_traceless || part.traceless();
        if (ok && !sym_ok) {
            witness = symmetry_violation(part.part, want_symmetric);
        } else if (ok && !trace_ok) {
            OpMatrix tr(1, 1);
            tr(0, 0) = part.trace;
            witness = tr;
        }
        ok = ok && sym_ok && trace_ok;
    };
    expect(s.real, !odd, false);
    if (real_only) {
        if (!s.imag.part.is_zero()) {
            if (ok) witness = s.imag.part;
            ok = false;
        }
    } else {
        expect(s.imag, odd, odd);
    }
    return predicate(id + "[n=" + std::to_string(n) + "]", {1}, ok, witness);
}

} // namespace detail

/// Seed for the random wavevectors of the symbol cross-check.
inline void set_symbol_check_seed(std::uint64_t seed) { detail::symbol_seed_storage().store(seed); }
inline std::uint64_t symbol_check_seed() { return detail::symbol_seed_storage().load(); }

/// CURL/GRAD/DIV ladder identities up to l_max, plus the cartesian equivalence.
inline std::vector<IdentityReport> verify_core_identities(int l_max, const OperatorSource& src = {})
{
    if (l_max < 1 || l_max > 6) throw std::domain_error("verify_core_identities: l_max must be in [1, 6]");
    using detail::compare;
    std::vector<IdentityReport> out;
    const ExactScalar half = ExactScalar::rational(1, 2);
    const OpMatrix c1 = src.curl(1);

    out.push_back(compare("core.curl-grad", {1}, compose(c1, src.grad(0)), OpMatrix::zero(3, 1)));
    out.push_back(compare("core.div-curl", {1}, compose(src.div(1), c1), OpMatrix::zero(1, 3)));
    out.push_back(compare("core.curl-curl", {1}, compose(c1, c1),
                          compose(src.grad(0), src.div(1)) - detail::laplacian_identity(3, BasisTag::spherical(1, 1))));
    if (l_max >= 2) {
        out.push_back(compare("core.curl-grad-intertwine", {1, 2}, compose(src.curl(2), src.grad(1)),
                              scale(half, compose(src.grad(1), c1))));
        out.push_back(compare("core.div-curl-intertwine", {1, 2}, compose(src.div(2), src.curl(2)),
                              scale(half, compose(c1, src.div(2)))));
    }
    for (int l = 1; l <= l_max; ++l) {
        const OpMatrix c = src.curl(l);
        const std::size_t n = 2 * l + 1;
        const OpMatrix rhs = scale(ExactScalar::rational(2 * l - 1, l), compose(src.grad(l - 1), src.div(l))) -
                             detail::laplacian_identity(n, BasisTag::spherical(l, l));
        out.push_back(compare("core.curl-squared[l=" + std::to_string(l) + "]", {l}, compose(c, c), rhs));
    }

    const OpMatrix curl = cartesian_curl(), grad = cartesian_grad(), div = cartesian_div();
    out.push_back(compare("cartesian.similarity", {1}, detail::similarity(cartesian_transform_matrix(), c1).with_tag(BasisTag::cartesian()),
                          curl));
    out.push_back(compare("cartesian.curl-grad", {1}, compose(curl, grad), OpMatrix::zero(3, 1)));
    out.push_back(compare("cartesian.div-curl", {1}, compose(div, curl), OpMatrix::zero(1, 3)));
    out.push_back(compare("cartesian.curl-curl", {1}, compose(curl, curl),
                          compose(grad, div) - detail::laplacian_identity(3, BasisTag::cartesian())));
    return out;
}

/// Even and odd power laws for n <= n_max, real/imaginary parity of the
/// powers up to 2 n_max + 1, and the same for the cartesian curl.
inline std::vector<IdentityReport> verify_power_laws(int n_max, const OperatorSource& src = {})
{
    if (n_max < 1) throw std::domain_error("verify_power_laws: n_max must be >= 1");
    detail::require_cap(2 * n_max + 1, "verify_power_laws");
    using detail::compare;
    std::vector<IdentityReport> out;

    auto run = [&](const std::string& prefix, const OpMatrix& c, bool real_only) {
        std::vector<OpMatrix> pw = {OpMatrix::identity(3, c.tag()), c};
        for (int j = 2; j <= 2 * n_max + 1; ++j) pw.push_back(compose(pw.back(), c));
        for (int n = 1; n <= n_max; ++n) {
            const ExactScalar even_sign = (n - 1) % 2 == 0 ? ExactScalar(1) : ExactScalar(-1);
            const ExactScalar odd_sign = n % 2 == 0 ? ExactScalar(1) : ExactScalar(-1);
            out.push_back(compare(prefix + ".even-power[n=" + std::to_string(n) + "]", {1}, pw[2 * n],
                                  scale(even_sign, laplacian_times(pw[2], n - 1))));
            out.push_back(compare(prefix + ".odd-power[n=" + std::to_string(n) + "]", {1}, pw[2 * n + 1],
                                  scale(odd_sign, laplacian_times(pw[1], n))));
        }
        for (int n = 1; n <= 2 * n_max + 1; ++n) out.push_back(detail::parity_report(prefix + ".parity", n, pw[n], real_only));
    };
    run("powers", src.curl(1), false);
    run("powers.cartesian", cartesian_curl(), true);
    return out;
}

namespace detail {

// sum_{j=0}^{2N+2} C^j / j!  against  1 + sum_{n=0}^{N} (-1)^n/(2n+1)! {C + C^2/(2n+2)} lap^n.
inline IdentityReport exponential_report(const std::string& id, const OpMatrix& c, int N)
{
    if (N < 0) throw std::domain_error("verify_exponential: N must be >= 0");
    require_cap(2 * N + 2, "verify_exponential");
    const std::size_t n = c.rows();
    const OpMatrix id_mat = OpMatrix::identity(n, c.tag());

    OpMatrix lhs = id_mat;
    OpMatrix pw = id_mat;
    Rational inv_fact(1);
    for (int j = 1; j <= 2 * N + 2; ++j) {
        pw = compose(pw, c);
        inv_fact /= j;
        lhs = lhs + scale(ExactScalar(inv_fact), pw);
    }

    const OpMatrix c2 = compose(c, c);
    OpMatrix rhs = id_mat;
    Rational fact_odd(1); // (2n+1)!
    for (int k = 0; k <= N; ++k) {
        if (k > 0) fact_odd *= (2 * k) * (2 * k + 1);
        const Rational coeff = Rational(k % 2 == 0 ? 1 : -1) / fact_odd;
        const OpMatrix bracket = c + scale(ExactScalar::rational(1, 2 * k + 2), c2);
        rhs = rhs + scale(ExactScalar(coeff), laplacian_times(bracket, k));
    }
    return compare(id + "[N=" + std::to_string(N) + "]", {1}, lhs, rhs);
}

} // namespace detail

/// Truncated exponential series of CURL(1). Throws degree_cap_exceeded
/// before any work if 2N+2 exceeds the cap.
inline IdentityReport verify_exponential(int N, const OperatorSource& src = {})
{
    detail::require_cap(2 * N + 2, "verify_exponential");
    return detail::exponential_report("exp.curl", src.curl(1), N);
}

inline IdentityReport verify_exponential_cartesian(int N)
{
    detail::require_cap(2 * N + 2, "verify_exponential");
    return detail::exponential_report("exp.cartesian", cartesian_curl(), N);
}

/// Hermitian and complex curl identities for l <= l_max, cartesian complex and
/// hermitian curl identities, and the adjoint structure of each curl.
inline std::vector<IdentityReport> verify_hermitian_complex_suites(int l_max, const OperatorSource& src = {})
{
    if (l_max < 1 || l_max > 6) throw std::domain_error("verify_hermitian_complex_suites: l_max must be in [1, 6]");
    using detail::compare;
    std::vector<IdentityReport> out;
    const ExactScalar half = ExactScalar::rational(1, 2);
    const ExactScalar two_i = ExactScalar(2) * ExactScalar::i();
    const OpMatrix lap3 = detail::laplacian_identity(3, BasisTag::spherical(1, 1));

    struct Flavour
    {
        std::string name;
        std::function<OpMatrix(int)> curl;
        ExactScalar square_factor; // curl^2 = factor * ((2l-1)/l GRAD DIV - lap)
    };
    const std::vector<Flavour> flavours = {
        {"hermitian", [&](int l) { return src.curl_hermitian(l); }, ExactScalar(-1)},
        {"complex", [&](int l) { return src.curl_complex(l); }, two_i},
    };
    for (const auto& f : flavours) {
        const OpMatrix c1 = f.curl(1);
        out.push_back(compare(f.name + ".curl-grad", {1}, compose(c1, src.grad(0)), OpMatrix::zero(3, 1)));
        out.push_back(compare(f.name + ".div-curl", {1}, compose(src.div(1), c1), OpMatrix::zero(1, 3)));
        out.push_back(compare(f.name + ".curl-curl", {1}, compose(c1, c1),
                              scale(f.square_factor, compose(src.grad(0), src.div(1)) - lap3)));
        if (l_max >= 2) {
            const OpMatrix c2 = f.curl(2);
            out.push_back(compare(f.name + ".curl-grad-intertwine", {1, 2}, compose(c2, src.grad(1)),
                                  scale(half, compose(src.grad(1), c1))));
            out.push_back(compare(f.name + ".div-curl-intertwine", {1, 2}, compose(src.div(2), c2),
                                  scale(half, compose(c1, src.div(2)))));
        }
        for (int l = 1; l <= l_max; ++l) {
            const OpMatrix c = f.curl(l);
            const OpMatrix inner = scale(ExactScalar::rational(2 * l - 1, l), compose(src.grad(l - 1), src.div(l))) -
                                   detail::laplacian_identity(2 * l + 1, BasisTag::spherical(l, l));
            out.push_back(compare(f.name + ".curl-squared[l=" + std::to_string(l) + "]", {l}, compose(c, c),
                                  scale(f.square_factor, inner)));
        }
    }

    for (int l = 1; l <= l_max; ++l) {
        const std::string tag = "[l=" + std::to_string(l) + "]";
        const OpMatrix c = src.curl(l);
        out.push_back(compare("adjoint.curl-antihermitian" + tag, {l}, formal_adjoint(c), scale(ExactScalar(-1), c)));
        const OpMatrix h = src.curl_hermitian(l);
        out.push_back(compare("adjoint.curl-h-hermitian" + tag, {l}, formal_adjoint(h), h));
        out.push_back(compare("complex.decomposition" + tag, {l}, src.curl_complex(l),
                              scale(ExactScalar(1) - ExactScalar::i(), h)));
    }

    const CartesianCurls cc = build_cartesian_curls();
    const OpMatrix grad = cartesian_grad(), div = cartesian_div();
    const OpMatrix grad_div_minus_lap = compose(grad, div) - detail::laplacian_identity(3, BasisTag::cartesian());
    out.push_back(compare("cartesian.complex.curl-grad", {1}, compose(cc.complex_curl, grad), OpMatrix::zero(3, 1)));
    out.push_back(compare("cartesian.complex.div-curl", {1}, compose(div, cc.complex_curl), OpMatrix::zero(1, 3)));
    out.push_back(compare("cartesian.complex.curl-curl", {1}, compose(cc.complex_curl, cc.complex_curl),
                          scale(two_i, grad_div_minus_lap)));
    out.push_back(compare("cartesian.hermitian.curl-grad", {1}, compose(cc.hermitian_curl, grad), OpMatrix::zero(3, 1)));
    out.push_back(compare("cartesian.hermitian.div-curl", {1}, compose(div, cc.hermitian_curl), OpMatrix::zero(1, 3)));
    out.push_back(compare("cartesian.hermitian.curl-curl", {1}, compose(cc.hermitian_curl, cc.hermitian_curl),
                          scale(ExactScalar(-1), grad_div_minus_lap)));
    out.push_back(compare("cartesian.hermitian.self-adjoint", {1}, formal_adjoint(cc.hermitian_curl), cc.hermitian_curl));
    out.push_back(compare("cartesian.complex.spherical-image", {1}, to_cartesian(src.curl_complex(1)), cc.complex_curl));
    return out;
}

enum class Suite { core, powers, exp, hermitian, complex, all };

/// Runs a named suite; `hermitian` and `complex` select by identity prefix.
inline std::vector<IdentityReport> run_suite(Suite suite, int max_l, int max_n, const OperatorSource& src = {})
{
    std::vector<IdentityReport> out;
    auto append = [&](std::vector<IdentityReport> r) { out.insert(out.end(), r.begin(), r.end()); };
    auto filtered = [&](std::initializer_list<const char*> prefixes) {
        for (auto& r : verify_hermitian_complex_suites(max_l, src))
            for (const char* p : prefixes)
                if (r.identity_id.rfind(p, 0) == 0) {
                    out.push_back(std::move(r));
                    break;
                }
    };
    switch (suite) {
    case Suite::core:
        append(verify_core_identities(max_l, src));
        break;
    case Suite::powers:
        append(verify_power_laws(max_n, src));
        break;
    case Suite::exp:
        out.push_back(verify_exponential(max_n, src));
        out.push_back(verify_exponential_cartesian(max_n));
        break;
    case Suite::hermitian:
        filtered({"hermitian.", "adjoint.", "cartesian.hermitian."});
        break;
    case Suite::complex:
        filtered({"complex.", "cartesian.complex."});
        break;
    case Suite::all:
        append(verify_core_identities(max_l, src));
        append(verify_power_laws(max_n, src));
        out.push_back(verify_exponential(max_n, src));
        out.push_back(verify_exponential_cartesian(max_n));
        append(verify_hermitian_complex_suites(max_l, src));
        break;
    }
    return out;
}

inline std::size_t count_failures(const std::vector<IdentityReport>& reports)
{
    std::size_t n = 0;
    for (const auto& r : reports) n += r.passed() ? 0 : 1;
    return n;
}

inline nlohmann::json to_json(const IdentityReport& r)
{
    nlohmann::json j = {{"identity_id", r.identity_id},
                        {"l_range", r.l_range},
                        {"status", to_string(r.status)},
                        {"symbol_residual", r.symbol_residual}};
    j["witness"] = r.witness ? to_json(*r.witness) : nlohmann::json(nullptr);
    return j;
}

} // namespace curlmat

#endif // CURLMAT_IDENTITIES_HPP
