#ifndef CURLMAT_ANGULAR_HPP
#define CURLMAT_ANGULAR_HPP

#include <cstdlib>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "curlmat/exactnum.hpp"

namespace curlmat {

/// Integer angular momentum label |l m>, -l <= m <= l.
struct SpinLabel
{
    int l = 0;
    int m = 0;

    SpinLabel(int l_, int m_) : l(l_), m(m_)
    {
        if (l < 0 || m < -l || m > l)
            throw std::domain_error("invalid spin label (" + std::to_string(l) + ", " + std::to_string(m) + ")");
    }
};

/// Index of magnetic number m in the descending basis l, l-1, ..., -l.
inline int basis_index(int l, int m) { return l - m; }
inline int basis_m(int l, int index) { return l - index; }

/// Dense square or rectangular matrix of exact scalars.
class ExactMatrix
{
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ExactMatrix identity(std::size_t n)
    {
        ExactMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = ExactScalar(1);
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ExactScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const ExactScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ExactMatrix adjoint() const
    {
        ExactMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c).conj();
        return out;
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        ExactMatrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& x = a(r, k);
                if (x.is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c)
                    if (!b(k, c).is_zero()) out(r, c) += x * b(k, c);
            }
        return out;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b)
    {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b)
    {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend ExactMatrix operator*(const ExactScalar& s, ExactMatrix a)
    {
        for (auto& x : a.data_) x = s * x;
        return a;
    }

    friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

private:
    void check_same(const ExactMatrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExactScalar> data_;
};

namespace detail {

// Multiset of prime exponents; lets products of factorials under a square
// root be split into rational * sqrt(squarefree) without big-integer factoring.
class PrimePowers
{
public:
    void add_integer(long long n, int power)
    {
        if (n <= 0) throw std::domain_error("PrimePowers: nonpositive factor");
        for (long long p = 2; p * p <= n; ++p)
            while (n % p == 0) {
                exps_[p] += power;
                n /= p;
            }
        if (n > 1) exps_[n] += power;
    }

    void add_factorial(int n, int power)
    {
        for (int k = 2; k <= n; ++k) add_integer(k, power);
    }

    // sqrt(prod p^e) = coeff * sqrt(radicand)
    Radical square_root() const
    {
        Rational coeff(1);
        std::uint64_t radicand = 1;
        for (const auto& [p, e] : exps_) {
            if (e == 0) continue;
            const int half = e >= 0 ? e / 2 : -((-e + 1) / 2); // floor(e / 2)
            const Integer pp = boost::multiprecision::pow(Integer(p), std::abs(half));
            coeff *= half >= 0 ? Rational(pp) : Rational(Integer(1), pp);
            if (e - 2 * half == 1) radicand *= static_cast<std::uint64_t>(p);
        }
        return Radical{coeff, radicand};
    }

private:
    std::map<long long, int> exps_;
};

inline Integer factorial(int n)
{
    Integer f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline ExactScalar clebsch_gordan_uncached(int l1, int m1, int l2, int m2, int l, int m)
{
    if (m != m1 + m2) return {};
    if (l < std::abs(l1 - l2) || l > l1 + l2) return {};

    PrimePowers root;
    root.add_integer(2 * l + 1, 1);
    root.add_factorial(l + l1 - l2, 1);
    root.add_factorial(l - l1 + l2, 1);
    root.add_factorial(l1 + l2 - l, 1);
    root.add_factorial(l1 + l2 + l + 1, -1);
    root.add_factorial(l + m, 1);
    root.add_factorial(l - m, 1);
    root.add_factorial(l1 - m1, 1);
    root.add_factorial(l1 + m1, 1);
    root.add_factorial(l2 - m2, 1);
    root.add_factorial(l2 + m2, 1);

    // Racah sum over k where all factorial arguments are nonnegative.
    const int kmin = std::max({0, l2 - l - m1, l1 - l + m2});
    const int kmax = std::min({l1 + l2 - l, l1 - m1, l2 + m2});
    Rational sum(0);
    for (int k = kmin; k <= kmax; ++k) {
        const Integer den = factorial(k) * factorial(l1 + l2 - l - k) * factorial(l1 - m1 - k) *
                            factorial(l2 + m2 - k) * factorial(l - l2 + m1 + k) * factorial(l - l1 - m2 + k);
        const Rational term(Integer(1), den);
        sum += (k % 2 == 0) ? term : Rational(-term);
    }
    if (sum == 0) return {};
    const Radical r = root.square_root();
    return ExactScalar::from_terms({Radical{sum * r.coeff, r.radicand}}, {});
}

class CgCache
{
public:
    using Key = std::tuple<int, int, int, int, int, int>;

    ExactScalar get(const Key& key)
    {
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        const auto [l1, m1, l2, m2, l, m] = key;
        ExactScalar value = clebsch_gordan_uncached(l1, m1, l2, m2, l, m);
        std::unique_lock lock(mutex_);
        table_.emplace(key, value);
        return value;
    }

    static CgCache& instance()
    {
        static CgCache cache;
        return cache;
    }

private:
    std::shared_mutex mutex_;
    std::map<Key, ExactScalar> table_;
};

} // namespace detail

/// Clebsch-Gordan coefficient <l1 m1; l2 m2 | l m>, Condon-Shortley phase,
/// evaluated exactly from the Racah closed form. The result is always a
/// rational multiple of a single square root.
inline ExactScalar clebsch_gordan(int l1, int m1, int l2, int m2, int l, int m)
{
    static_cast<void>(SpinLabel{l1, m1});
    static_cast<void>(SpinLabel{l2, m2});
    static_cast<void>(SpinLabel{l, m});
    return detail::CgCache::instance().get({l1, m1, l2, m2, l, m});
}

/// Wigner 3j symbol (l1 l2 l3; m1 m2 m3), via its relation to the
/// Clebsch-Gordan coefficient <l1 m1; l2 m2 | l3 -m3>.
inline ExactScalar wigner_3j(int l1, int l2, int l3, int m1, int m2, int m3)
{
    static_cast<void>(SpinLabel{l1, m1});
    static_cast<void>(SpinLabel{l2, m2});
    static_cast<void>(SpinLabel{l3, m3});
    const ExactScalar cg = clebsch_gordan(l1, m1, l2, m2, l3, -m3);
    if (cg.is_zero()) return {};
    const int phase_exp = l1 - l2 - m3;
    const ExactScalar phase = (phase_exp % 2 == 0) ? ExactScalar(1) : ExactScalar(-1);
    return phase * cg * ExactScalar::sqrt(Rational(1, 2 * l3 + 1));
}

/// Spin-l angular momentum matrices in the descending-m basis.
struct AngularMatrices
{
    int l = 0;
    ExactMatrix Lz, Lplus, Lminus, Lx, Ly;
};

inline constexpr int max_angular_l = 8;

inline AngularMatrices angular_matrices(int l)
{
    if (l < 1 || l > max_angular_l)
        throw std::domain_error("angular_matrices: l must be in [1, " + std::to_string(max_angular_l) + "]");
    const std::size_t n = 2 * l + 1;
    AngularMatrices a;
    a.l = l;
    a.Lz = ExactMatrix(n, n);
    a.Lplus = ExactMatrix(n, n);
    a.Lminus = ExactMatrix(n, n);
    for (int m = -l; m <= l; ++m) {
        a.Lz(basis_index(l, m), basis_index(l, m)) = ExactScalar(m);
        if (m < l)
            a.Lplus(basis_index(l, m + 1), basis_index(l, m)) = ExactScalar::sqrt(Rational(l * (l + 1) - m * (m + 1)));
        if (m > -l)
            a.Lminus(basis_index(l, m - 1), basis_index(l, m)) = ExactScalar::sqrt(Rational(l * (l + 1) - m * (m - 1)));
    }
    const ExactScalar half = ExactScalar::rational(1, 2);
    const ExactScalar minus_half_i = -half * ExactScalar::i();
    a.Lx = half * (a.Lplus + a.Lminus);
    a.Ly = minus_half_i * (a.Lplus - a.Lminus); // (L+ - L-) / (2i)
    return a;
}

} // namespace curlmat

#endif // CURLMAT_ANGULAR_HPP
