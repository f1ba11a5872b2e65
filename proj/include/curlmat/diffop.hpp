#ifndef CURLMAT_DIFFOP_HPP
#define CURLMAT_DIFFOP_HPP

#include <array>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curlmat/angular.hpp"
#include "curlmat/exactnum.hpp"

namespace curlmat {

class shape_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class degree_cap_exceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int default_degree_cap = 16;

namespace detail {

inline int degree_cap_from_env()
{
    if (const char* env = std::getenv("CURLMAT_DEGREE_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1000) return static_cast<int>(v);
    }
    return default_degree_cap;
}

inline std::atomic<int>& degree_cap_storage()
{
    static std::atomic<int> cap{degree_cap_from_env()};
    return cap;
}

} // namespace detail

/// Maximum total degree of any symbolic monomial. Defaults to 16, overridable
/// through CURLMAT_DEGREE_CAP or set_degree_cap().
inline int degree_cap() { return detail::degree_cap_storage().load(std::memory_order_relaxed); }
inline void set_degree_cap(int cap)
{
    if (cap < 1) throw std::invalid_argument("degree cap must be positive");
    detail::degree_cap_storage().store(cap, std::memory_order_relaxed);
}

/// Restores the previous degree cap on scope exit.
class ScopedDegreeCap
{
public:
    explicit ScopedDegreeCap(int cap) : previous_(degree_cap()) { set_degree_cap(cap); }
    ~ScopedDegreeCap() { set_degree_cap(previous_); }
    ScopedDegreeCap(const ScopedDegreeCap&) = delete;
    ScopedDegreeCap& operator=(const ScopedDegreeCap&) = delete;

private:
    int previous_;
};

/// Monomial dx^ax dy^ay dz^az.
struct DiffMono
{
    std::array<int, 3> exp{0, 0, 0};

    int degree() const { return exp[0] + exp[1] + exp[2]; }

    friend DiffMono operator*(const DiffMono& a, const DiffMono& b)
    {
        return DiffMono{{a.exp[0] + b.exp[0], a.exp[1] + b.exp[1], a.exp[2] + b.exp[2]}};
    }

    friend auto operator<=>(const DiffMono&, const DiffMono&) = default;
};

/// Constant-coefficient polynomial in the derivative symbols dx, dy, dz.
class DiffPoly
{
public:
    using Terms = std::map<DiffMono, ExactScalar>;

    DiffPoly() = default;
    DiffPoly(const ExactScalar& c)
    {
        if (!c.is_zero()) terms_.emplace(DiffMono{}, c);
    }
    DiffPoly(int c) : DiffPoly(ExactScalar(c)) {}

    static DiffPoly monomial(const DiffMono& m, const ExactScalar& c = ExactScalar(1))
    {
        DiffPoly p;
        if (!c.is_zero()) p.terms_.emplace(m, c);
        return p;
    }

    /// The derivative symbol along axis 0, 1 or 2.
    static DiffPoly d(int axis)
    {
        DiffMono m;
        m.exp.at(axis) = 1;
        return monomial(m);
    }

    static DiffPoly laplacian() { return d(0) * d(0) + d(1) * d(1) + d(2) * d(2); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const
    {
        int deg = 0;
        for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
        return deg;
    }

    ExactScalar coefficient(const DiffMono& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? ExactScalar{} : it->second;
    }

    DiffPoly conj() const
    {
        DiffPoly out;
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, c.conj());
        return out;
    }

    DiffPoly real_part() const { return map_coeffs([](const ExactScalar& c) { return c.real_part(); }); }
    DiffPoly imag_part() const { return map_coeffs([](const ExactScalar& c) { return c.imag_part(); }); }

    DiffPoly& operator+=(const DiffPoly& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    DiffPoly operator-() const { return map_coeffs([](const ExactScalar& c) { return -c; }); }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }

    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.degree() + b.degree() > degree_cap())
            throw degree_cap_exceeded("polynomial degree " + std::to_string(a.degree() + b.degree()) +
                                      " exceeds cap " + std::to_string(degree_cap()));
        DiffPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }

    friend DiffPoly operator*(const ExactScalar& s, const DiffPoly& p)
    {
        if (s.is_zero()) return {};
        return p.map_coeffs([&](const ExactScalar& c) { return s * c; });
    }

    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    friend bool operator==(const DiffPoly&, const DiffPoly&) = default;

    /// Value of the symbol with d -> i k.
    std::complex<double> evaluate_symbol(const std::array<double, 3>& k) const
    {
        std::complex<double> sum{0.0, 0.0};
        const std::complex<double> ik[3] = {{0.0, k[0]}, {0.0, k[1]}, {0.0, k[2]}};
        for (const auto& [m, c] : terms_) {
            std::complex<double> v = c.to_complex();
            for (int a = 0; a < 3; ++a)
                for (int e = 0; e < m.exp[a]; ++e) v *= ik[a];
            sum += v;
        }
        return sum;
    }

private:
    template <class F>
    DiffPoly map_coeffs(F f) const
    {
        DiffPoly out;
        for (const auto& [m, c] : terms_) {
            ExactScalar v = f(c);
            if (!v.is_zero()) out.terms_.emplace(m, std::move(v));
        }
        return out;
    }

    void add_term(const DiffMono& m, const ExactScalar& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Terms terms_;
};

inline DiffPoly dx() { return DiffPoly::d(0); }
inline DiffPoly dy() { return DiffPoly::d(1); }
inline DiffPoly dz() { return DiffPoly::d(2); }

enum class BasisKind { generic, spherical, cartesian };

/// Which basis an operator matrix maps between. Spherical operators map rank
/// l_in tensors to rank l_out tensors; generic matrices (identity, constants)
/// compose with anything of matching shape.
struct BasisTag
{
    BasisKind kind = BasisKind::generic;
    int l_in = -1;
    int l_out = -1;

    static BasisTag generic() { return {}; }
    static BasisTag spherical(int l_in, int l_out) { return {BasisKind::spherical, l_in, l_out}; }
    static BasisTag cartesian() { return {BasisKind::cartesian, -1, -1}; }

    friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

inline std::string to_string(const BasisTag& t)
{
    switch (t.kind) {
    case BasisKind::spherical:
        return "spherical(" + std::to_string(t.l_in) + "->" + std::to_string(t.l_out) + ")";
    case BasisKind::cartesian:
        return "cartesian";
    default:
        return "generic";
    }
}

/// Rectangular matrix of DiffPoly entries, dense row-major.
class OpMatrix
{
public:
    OpMatrix() = default;
    OpMatrix(std::size_t rows, std::size_t cols, BasisTag tag = BasisTag::generic())
        : rows_(rows), cols_(cols), entries_(rows * cols), tag_(tag)
    {
        if (rows == 0 || cols == 0) throw shape_error("operator matrix must be nonempty");
        if (tag.kind == BasisKind::spherical &&
            (rows != static_cast<std::size_t>(2 * tag.l_out + 1) || cols != static_cast<std::size_t>(2 * tag.l_in + 1)))
            throw shape_error("shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                              " does not match basis " + to_string(tag));
    }

    static OpMatrix identity(std::size_t n, BasisTag tag = BasisTag::generic())
    {
        OpMatrix out(n, n, tag);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = DiffPoly(1);
        return out;
    }

    static OpMatrix zero(std::size_t rows, std::size_t cols, BasisTag tag = BasisTag::generic())
    {
        return OpMatrix(rows, cols, tag);
    }

    static OpMatrix constant(const ExactMatrix& m, BasisTag tag = BasisTag::generic())
    {
        OpMatrix out(m.rows(), m.cols(), tag);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = DiffPoly(m(r, c));
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const BasisTag& tag() const { return tag_; }
    OpMatrix with_tag(BasisTag tag) const { return retagged(tag); }

    DiffPoly& operator()(std::size_t r, std::size_t c) { return entries_.at(r * cols_ + c); }
    const DiffPoly& operator()(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }

    const std::vector<DiffPoly>& entries() const { return entries_; }

    bool is_zero() const
    {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    int degree() const
    {
        int deg = 0;
        for (const auto& e : entries_) deg = std::max(deg, e.degree());
        return deg;
    }

    friend bool operator==(const OpMatrix& a, const OpMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    OpMatrix retagged(BasisTag tag) const
    {
        OpMatrix out(rows_, cols_, tag);
        out.entries_ = entries_;
        return out;
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<DiffPoly> entries_;
    BasisTag tag_;
};

namespace detail {

inline bool tag_fits(const BasisTag& t, std::size_t rows, std::size_t cols)
{
    return t.kind != BasisKind::spherical ||
           (rows == static_cast<std::size_t>(2 * t.l_out + 1) && cols == static_cast<std::size_t>(2 * t.l_in + 1));
}

inline BasisTag compose_tags(const BasisTag& a, const BasisTag& b, std::size_t rows, std::size_t cols)
{
    if (a.kind == BasisKind::generic && b.kind == BasisKind::generic) return BasisTag::generic();
    if (a.kind == BasisKind::generic) {
        BasisTag t = b;
        if (t.kind == BasisKind::spherical) t.l_out = static_cast<int>(rows - 1) / 2;
        return tag_fits(t, rows, cols) ? t : BasisTag::generic();
    }
    if (b.kind == BasisKind::generic) {
        BasisTag t = a;
        if (t.kind == BasisKind::spherical) t.l_in = static_cast<int>(cols - 1) / 2;
        return tag_fits(t, rows, cols) ? t : BasisTag::generic();
    }
    if (a.kind != b.kind) throw shape_error("cannot compose " + to_string(a) + " with " + to_string(b));
    if (a.kind == BasisKind::spherical) {
        if (a.l_in != b.l_out) throw shape_error("cannot compose " + to_string(a) + " with " + to_string(b));
        return BasisTag::spherical(b.l_in, a.l_out);
    }
    return a;
}

inline BasisTag merge_tags(const BasisTag& a, const BasisTag& b)
{
    if (a.kind == BasisKind::generic) return b;
    if (b.kind == BasisKind::generic) return a;
    if (!(a == b)) throw shape_error("basis mismatch: " + to_string(a) + " vs " + to_string(b));
    return a;
}

} // namespace detail

/// Matrix product A*B. Entry arithmetic is commutative since coefficients
/// are constant.
inline OpMatrix compose(const OpMatrix& a, const OpMatrix& b)
{
    if (a.cols() != b.rows())
        throw shape_error("compose: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    const BasisTag tag = detail::compose_tags(a.tag(), b.tag(), a.rows(), b.cols());
    if (a.degree() + b.degree() > degree_cap())
        throw degree_cap_exceeded("composition degree " + std::to_string(a.degree() + b.degree()) + " exceeds cap " +
                                  std::to_string(degree_cap()));
    OpMatrix out(a.rows(), b.cols(), tag);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const DiffPoly& x = a(r, k);
            if (x.is_zero()) continue;
            for (std::size_t c = 0; c < b.cols(); ++c)
                if (!b(k, c).is_zero()) out(r, c) += x * b(k, c);
        }
    return out;
}

inline OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) { return compose(a, b); }

/// A^n for square A, n >= 0.
inline OpMatrix power(const OpMatrix& a, int n)
{
    if (a.rows() != a.cols()) throw shape_error("power of a non-square operator");
    if (n < 0) throw std::invalid_argument("negative operator power");
    OpMatrix out = OpMatrix::identity(a.rows(), a.tag());
    for (int i = 0; i < n; ++i) out = compose(out, a);
    return out;
}

inline OpMatrix add(const OpMatrix& a, const OpMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw shape_error("add: shape mismatch");
    OpMatrix out(a.rows(), a.cols(), detail::merge_tags(a.tag(), b.tag()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) + b(r, c);
    return out;
}

inline OpMatrix scale(const ExactScalar& s, const OpMatrix& a)
{
    OpMatrix out(a.rows(), a.cols(), a.tag());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = s * a(r, c);
    return out;
}

inline OpMatrix operator+(const OpMatrix& a, const OpMatrix& b) { return add(a, b); }
inline OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) { return add(a, scale(ExactScalar(-1), b)); }
inline OpMatrix operator*(const ExactScalar& s, const OpMatrix& a) { return scale(s, a); }

/// Exact structural equality; shapes must agree.
inline bool equal(const OpMatrix& a, const OpMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw shape_error("equal: shape mismatch");
    return a.entries() == b.entries();
}

/// Conjugate-transpose of the coefficients; the derivative symbols are
/// treated as fixed real symbols.
inline OpMatrix formal_adjoint(const OpMatrix& a)
{
    BasisTag tag = a.tag();
    std::swap(tag.l_in, tag.l_out);
    OpMatrix out(a.cols(), a.rows(), tag);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c).conj();
    return out;
}

inline OpMatrix transpose(const OpMatrix& a)
{
    BasisTag tag = a.tag();
    std::swap(tag.l_in, tag.l_out);
    OpMatrix out(a.cols(), a.rows(), tag);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
    return out;
}

/// Multiplies every entry by (dx^2 + dy^2 + dz^2)^n.
inline OpMatrix laplacian_times(const OpMatrix& a, int n)
{
    if (n < 0) throw std::invalid_argument("laplacian_times: negative power");
    if (a.degree() + 2 * n > degree_cap())
        throw degree_cap_exceeded("laplacian_times: degree " + std::to_string(a.degree() + 2 * n) + " exceeds cap " +
                                  std::to_string(degree_cap()));
    DiffPoly lap_n(1);
    for (int i = 0; i < n; ++i) lap_n *= DiffPoly::laplacian();
    OpMatrix out(a.rows(), a.cols(), a.tag());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) * lap_n;
    return out;
}

struct PartSymmetry
{
    OpMatrix part;
    bool symmetric = false;
    bool antisymmetric = false;
    DiffPoly trace;
    bool traceless() const { return trace.is_zero(); }
};

struct SymmetrySplit
{
    PartSymmetry real;
    PartSymmetry imag; // A = real + i * imag
};

inline SymmetrySplit split_symmetry(const OpMatrix& a)
{
    if (a.rows() != a.cols()) throw shape_error("split_symmetry: non-square matrix");
    const std::size_t n = a.rows();
    auto analyse = [&](OpMatrix part) {
        PartSymmetry ps;
        ps.symmetric = true;
        ps.antisymmetric = true;
        for (std::size_t r = 0; r < n; ++r) {
            ps.trace += part(r, r);
            for (std::size_t c = 0; c < n; ++c) {
                if (!(part(r, c) == part(c, r))) ps.symmetric = false;
                if (!(part(r, c) == -part(c, r))) ps.antisymmetric = false;
            }
        }
        ps.part = std::move(part);
        return ps;
    };
    OpMatrix re(n, n, a.tag()), im(n, n, a.tag());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            re(r, c) = a(r, c).real_part();
            im(r, c) = a(r, c).imag_part();
        }
    return {analyse(std::move(re)), analyse(std::move(im))};
}

using SymbolMatrix = Eigen::MatrixXcd;

/// OpMatrix reduced to float coefficients for repeated symbol evaluation.
class CompiledSymbol
{
public:
    explicit CompiledSymbol(const OpMatrix& a) : rows_(a.rows()), cols_(a.cols())
    {
        offsets_.reserve(rows_ * cols_ + 1);
        offsets_.push_back(0);
        for (const auto& e : a.entries()) {
            for (const auto& [m, c] : e.terms()) {
                terms_.push_back({m.exp, c.to_complex()});
                for (int ax = 0; ax < 3; ++ax) max_exp_ = std::max(max_exp_, m.exp[ax]);
            }
            if (max_exp_ >= 32) throw degree_cap_exceeded("symbol evaluation supports exponents below 32");
            offsets_.push_back(terms_.size());
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Writes the row-major symbol at wavevector k into out (rows*cols values).
    void evaluate(const std::array<double, 3>& k, std::complex<double>* out) const
    {
        std::complex<double> pw[3][32];
        for (int ax = 0; ax < 3; ++ax) {
            pw[ax][0] = 1.0;
            for (int e = 1; e <= max_exp_; ++e) pw[ax][e] = pw[ax][e - 1] * std::complex<double>(0.0, k[ax]);
        }
        for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t t = offsets_[i]; t < offsets_[i + 1]; ++t) {
                const auto& term = terms_[t];
                s += term.coeff * pw[0][term.exp[0]] * pw[1][term.exp[1]] * pw[2][term.exp[2]];
            }
            out[i] = s;
        }
    }

    SymbolMatrix evaluate(const std::array<double, 3>& k) const
    {
        std::vector<std::complex<double>> buf(rows_ * cols_);
        evaluate(k, buf.data());
        SymbolMatrix m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = buf[r * cols_ + c];
        return m;
    }

private:
    struct Term
    {
        std::array<int, 3> exp;
        std::complex<double> coeff;
    };

    std::size_t rows_;
    std::size_t cols_;
    int max_exp_ = 0;
    std::vector<Term> terms_;
    std::vector<std::size_t> offsets_;
};

/// Numeric symbol of A at real wavevector k: every d is replaced by i*k.
inline SymbolMatrix symbol_at(const OpMatrix& a, const std::array<double, 3>& k)
{
    return CompiledSymbol(a).evaluate(k);
}

} // namespace curlmat

#endif // CURLMAT_DIFFOP_HPP
