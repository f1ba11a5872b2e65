#ifndef CURLMAT_SPECTRAL_HPP
#define CURLMAT_SPECTRAL_HPP

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <valarray>
#include <vector>

#include <fftw3.h>
#include <Eigen/Dense>

#include "curlmat/builders.hpp"

namespace curlmat {

using cplx = std::complex<double>;

/// Periodic box sampled on nx*ny*nz points. Coordinates run over
/// [-L/2, L/2) along each axis.
struct GridSpec
{
    std::array<int, 3> n{8, 8, 8};
    std::array<double, 3> box{2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi};

    static GridSpec cube(int n, double length) { return {{n, n, n}, {length, length, length}}; }

    void validate() const
    {
        for (int a = 0; a < 3; ++a) {
            if (n[a] <= 0 || n[a] % 2 != 0) throw std::invalid_argument("GridSpec: sizes must be positive and even");
            if (!(box[a] > 0.0) || !std::isfinite(box[a])) throw std::invalid_argument("GridSpec: box lengths must be positive");
        }
    }

    std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
    double spacing(int axis) const { return box[axis] / n[axis]; }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
    double coordinate(int axis, int i) const { return (i - n[axis] / 2) * spacing(axis); }

    /// Flat index of sample (x, y, z); x varies fastest.
    std::size_t index(int ix, int iy, int iz) const { return (std::size_t(iz) * n[1] + iy) * n[0] + ix; }

    /// Signed integer mode number for FFT index i; the Nyquist index maps to n/2.
    int mode_number(int axis, int i) const { return i < n[axis] / 2 ? i : i - n[axis]; }
    bool is_nyquist(int axis, int i) const { return i == n[axis] / 2; }

    /// Wavevector used in every symbol; Nyquist components are zero.
    std::array<double, 3> wavevector(int ix, int iy, int iz) const
    {
        const std::array<int, 3> idx{ix, iy, iz};
        std::array<double, 3> k{};
        for (int a = 0; a < 3; ++a)
            k[a] = is_nyquist(a, idx[a]) ? 0.0 : 2 * std::numbers::pi * mode_number(a, idx[a]) / box[a];
        return k;
    }

    /// Largest |k| over all modes.
    double k_max() const
    {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double k = 2 * std::numbers::pi * (n[a] / 2 - 1) / box[a];
            s += k * k;
        }
        return std::sqrt(s);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class FieldBasis { spherical, cartesian };

inline std::string to_string(FieldBasis b) { return b == FieldBasis::spherical ? "spherical" : "cartesian"; }

/// Number of stored components for a rank-l field: 2l+1 in either basis
/// (cartesian rank 2 is stored packed as T11, T12, T13, T22, T23).
inline std::size_t component_count(int l, FieldBasis basis)
{
    if (l < 0) throw std::invalid_argument("component_count: negative rank");
    if (basis == FieldBasis::cartesian && l > 2) throw std::invalid_argument("cartesian fields support rank 0, 1, 2");
    return std::size_t(2 * l + 1);
}

/// Complex samples of a rank-l tensor field, laid out [component][z][y][x].
/// Spherical components are ordered m = l, ..., -l.
class TensorField
{
public:
    TensorField() = default;
    TensorField(int l, FieldBasis basis, const GridSpec& grid) : l_(l), basis_(basis), grid_(grid)
    {
        grid_.validate();
        data_.assign(component_count(l, basis) * grid_.size(), cplx{});
    }

    int l() const { return l_; }
    FieldBasis basis() const { return basis_; }
    const GridSpec& grid() const { return grid_; }
    std::size_t components() const { return component_count(l_, basis_); }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    cplx* component(std::size_t c) { return data_.data() + c * grid_.size(); }
    const cplx* component(std::size_t c) const { return data_.data() + c * grid_.size(); }

    cplx& at(std::size_t c, int ix, int iy, int iz) { return data_[c * grid_.size() + grid_.index(ix, iy, iz)]; }
    const cplx& at(std::size_t c, int ix, int iy, int iz) const { return data_[c * grid_.size() + grid_.index(ix, iy, iz)]; }

    bool same_layout(const TensorField& o) const { return l_ == o.l_ && basis_ == o.basis_ && grid_ == o.grid_; }

    TensorField& operator+=(const TensorField& o)
    {
        check(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    TensorField& operator-=(const TensorField& o)
    {
        check(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    TensorField& operator*=(cplx s)
    {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
    friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
    friend TensorField operator*(cplx s, TensorField a) { return a *= s; }

private:
    void check(const TensorField& o) const
    {
        if (!same_layout(o)) throw shape_error("field layout mismatch");
    }

    int l_ = 0;
    FieldBasis basis_ = FieldBasis::spherical;
    GridSpec grid_;
    std::vector<cplx> data_;
};

// ---------------------------------------------------------------------------
// FFT

/// In-place 3-D complex transform pair for one grid shape. Plans are
/// created under a global lock; execution is thread-safe.
class Fft3d
{
public:
    explicit Fft3d(const std::array<int, 3>& n) : n_(n), size_(std::size_t(n[0]) * n[1] * n[2])
    {
        std::lock_guard lock(planner_mutex());
        auto* buf = fftw_alloc_complex(size_);
        if (!buf) throw std::bad_alloc();
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_3d(n[2], n[1], n[0], buf, buf, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_3d(n[2], n[1], n[0], buf, buf, FFTW_BACKWARD, flags);
        fftw_free(buf);
        if (!forward_ || !backward_) {
            destroy();
            throw std::runtime_error("fftw plan creation failed");
        }
    }

    Fft3d(const Fft3d&) = delete;
    Fft3d& operator=(const Fft3d&) = delete;
    ~Fft3d() { destroy(); }

    void forward(cplx* data) const { fftw_execute_dft(forward_, as_fftw(data), as_fftw(data)); }

    /// Normalised so that inverse(forward(x)) = x.
    void inverse(cplx* data) const
    {
        fftw_execute_dft(backward_, as_fftw(data), as_fftw(data));
        const double s = 1.0 / double(size_);
        for (std::size_t i = 0; i < size_; ++i) data[i] *= s;
    }

    std::size_t size() const { return size_; }

    /// Shared instance per grid shape.
    static const Fft3d& for_grid(const GridSpec& g)
    {
        static std::mutex m;
        static std::map<std::array<int, 3>, std::unique_ptr<Fft3d>> cache;
        std::lock_guard lock(m);
        auto& slot = cache[g.n];
        if (!slot) slot = std::make_unique<Fft3d>(g.n);
        return *slot;
    }

private:
    static std::recursive_mutex& planner_mutex()
    {
        static std::recursive_mutex m;
        return m;
    }
    static fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

    void destroy()
    {
        std::lock_guard lock(planner_mutex());
        if (forward_) fftw_destroy_plan(forward_);
        if (backward_) fftw_destroy_plan(backward_);
        forward_ = backward_ = nullptr;
    }

    std::array<int, 3> n_;
    std::size_t size_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

/// Component-wise forward transform.
inline std::vector<cplx> to_spectral(const TensorField& f)
{
    std::vector<cplx> out = f.data();
    const Fft3d& fft = Fft3d::for_grid(f.grid());
    for (std::size_t c = 0; c < f.components(); ++c) fft.forward(out.data() + c * f.grid().size());
    return out;
}

/// Component-wise inverse transform into a field of the given layout.
inline TensorField from_spectral(std::vector<cplx> spec, int l, FieldBasis basis, const GridSpec& grid)
{
    TensorField f(l, basis, grid);
    if (spec.size() != f.data().size()) throw shape_error("from_spectral: size mismatch");
    const Fft3d& fft = Fft3d::for_grid(grid);
    for (std::size_t c = 0; c < f.components(); ++c) fft.inverse(spec.data() + c * grid.size());
    f.data() = std::move(spec);
    return f;
}

/// Calls fn(flat_index, k) for every Fourier mode.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn)
{
    for (int iz = 0; iz < g.n[2]; ++iz)
        for (int iy = 0; iy < g.n[1]; ++iy)
            for (int ix = 0; ix < g.n[0]; ++ix) fn(g.index(ix, iy, iz), g.wavevector(ix, iy, iz));
}

// ---------------------------------------------------------------------------
// Norms

/// sqrt(sum |f|^2 dV).
inline double l2_norm(const TensorField& f)
{
    double s = 0.0;
    for (const auto& v : f.data()) s += std::norm(v);
    return std::sqrt(s * f.grid().cell_volume());
}

/// sqrt(sum_k |k|^2 |f~(k)|^2 dV / N): the L2 norm of the gradient.
inline double gradient_seminorm(const TensorField& f)
{
    const auto spec = to_spectral(f);
    const GridSpec& g = f.grid();
    const std::size_t N = g.size();
    double s = 0.0;
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        for (std::size_t c = 0; c < f.components(); ++c) s += k2 * std::norm(spec[c * N + i]);
    });
    return std::sqrt(s * g.cell_volume() / double(N));
}

/// a / b with 0 / 0 = 0.
inline double relative(double a, double b) { return b == 0.0 ? (a == 0.0 ? 0.0 : INFINITY) : a / b; }

// ---------------------------------------------------------------------------
// Operators on fields

namespace detail {

inline std::pair<int, FieldBasis> output_layout(const OpMatrix& a, const TensorField& f)
{
    const BasisTag& t = a.tag();
    if (a.cols() != f.components())
        throw shape_error("apply_operator: operator has " + std::to_string(a.cols()) + " columns, field has " +
                          std::to_string(f.components()) + " components");
    const int rows_l = (static_cast<int>(a.rows()) - 1) / 2;
    if (a.rows() % 2 == 0) throw shape_error("apply_operator: operator rows must be odd");
    switch (t.kind) {
    case BasisKind::spherical:
        if (f.basis() != FieldBasis::spherical || f.l() != t.l_in)
            throw shape_error("apply_operator: " + to_string(t) + " operator on " + to_string(f.basis()) + " rank-" +
                              std::to_string(f.l()) + " field");
        return {t.l_out, FieldBasis::spherical};
    case BasisKind::cartesian:
        if (f.basis() != FieldBasis::cartesian) throw shape_error("apply_operator: cartesian operator on spherical field");
        return {rows_l, FieldBasis::cartesian};
    default:
        return {rows_l, f.basis()};
    }
}

} // namespace detail

/// Multiplies each Fourier mode by symbol_at(A, k).
inline TensorField apply_operator(const OpMatrix& a, const TensorField& f)
{
    const auto [l_out, basis_out] = detail::output_layout(a, f);
    const GridSpec& g = f.grid();
    const std::size_t N = g.size(), rows = a.rows(), cols = a.cols();
    const CompiledSymbol sym(a);
    const auto in = to_spectral(f);
    std::vector<cplx> out(rows * N);
    std::vector<cplx> m(rows * cols);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        sym.evaluate(k, m.data());
        for (std::size_t r = 0; r < rows; ++r) {
            cplx s{};
            for (std::size_t c = 0; c < cols; ++c) s += m[r * cols + c] * in[c * N + i];
            out[r * N + i] = s;
        }
    });
    return from_spectral(std::move(out), l_out, basis_out, g);
}

/// Spectral partial derivative of one scalar sample array along axis.
inline std::valarray<cplx> spectral_partial(const GridSpec& g, int axis, const std::valarray<cplx>& v)
{
    if (v.size() != g.size()) throw shape_error("spectral_partial: size mismatch");
    std::valarray<cplx> w = v;
    const Fft3d& fft = Fft3d::for_grid(g);
    fft.forward(&w[0]);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) { w[i] *= cplx(0.0, k[axis]); });
    fft.inverse(&w[0]);
    return w;
}

/// Grid samples as rank-2 entries for curl_rank2_cartesian.
template <>
struct rank2_value_ops<std::valarray<cplx>>
{
    static std::valarray<cplx> half(const std::valarray<cplx>& v) { return v * cplx(0.5); }
    static double magnitude(const std::valarray<cplx>& v)
    {
        double m = 0.0;
        for (const auto& x : v) m = std::max(m, std::abs(x));
        return m;
    }
    static bool is_zero(const std::valarray<cplx>& v, double scale) { return magnitude(v) <= 1e-12 * std::max(scale, 1e-300); }
};

/// Standard cartesian curl applied spectrally; the default for complex_curl_field.
struct SpectralCurl
{
    TensorField operator()(const TensorField& f) const { return apply_operator(cartesian_curl(), f); }
};

/// grad_c x (u + i v) = curl(u - v) + i curl(u + v) for cartesian vector
/// fields u, v; `curl` evaluates the real curl of a field.
template <class Curl = SpectralCurl>
TensorField complex_curl_field(const TensorField& u, const TensorField& v, Curl&& curl = Curl{})
{
    if (u.basis() != FieldBasis::cartesian || u.l() != 1) throw shape_error("complex_curl_field: u must be a cartesian vector field");
    if (!u.same_layout(v)) throw shape_error("complex_curl_field: u and v differ in layout");
    TensorField re = curl(u - v);
    TensorField im = curl(u + v);
    return re + cplx(0.0, 1.0) * im;
}

struct HelmholtzParts
{
    TensorField perp; // divergence free
    TensorField par;  // curl free; carries the k = 0 mode
};

/// f~_par(k) = k (k . f~) / |k|^2, f_perp = f - f_par.
inline HelmholtzParts helmholtz(const TensorField& f)
{
    if (f.basis() != FieldBasis::cartesian || f.l() != 1) throw shape_error("helmholtz: expected a cartesian vector field");
    const GridSpec& g = f.grid();
    const std::size_t N = g.size();
    const auto spec = to_spectral(f);
    std::vector<cplx> par(3 * N), perp(3 * N);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
            for (int a = 0; a < 3; ++a) par[a * N + i] = spec[a * N + i];
            return;
        }
        cplx kf{};
        for (int a = 0; a < 3; ++a) kf += k[a] * spec[a * N + i];
        for (int a = 0; a < 3; ++a) {
            par[a * N + i] = k[a] * kf / k2;
            perp[a * N + i] = spec[a * N + i] - par[a * N + i];
        }
    });
    return {from_spectral(std::move(perp), 1, FieldBasis::cartesian, g), from_spectral(std::move(par), 1, FieldBasis::cartesian, g)};
}

// ---------------------------------------------------------------------------
// Basis changes

/// l = 1 spherical -> cartesian (v = S t) and l = 2 spherical -> packed
/// cartesian (T = sum_m t_m B_m); the inverse maps use the adjoints.
inline TensorField to_cartesian_field(const TensorField& f)
{
    if (f.basis() != FieldBasis::spherical) throw shape_error("to_cartesian_field: field is already cartesian");
    TensorField out(f.l(), FieldBasis::cartesian, f.grid());
    const std::size_t N = f.grid().size();
    auto mix = [&](const Eigen::MatrixXcd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (m(r, c) == cplx{}) continue;
                cplx* o = out.component(r);
                const cplx* in = f.component(c);
                for (std::size_t i = 0; i < N; ++i) o[i] += m(r, c) * in[i];
            }
    };
    if (f.l() == 0) {
        out.data() = f.data();
    } else if (f.l() == 1) {
        const ExactMatrix& s = cartesian_transform_matrix();
        Eigen::MatrixXcd m(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = s(r, c).to_complex();
        mix(m);
    } else if (f.l() == 2) {
        const auto& b = rank2_basis();
        Eigen::MatrixXcd m(5, 5);
        for (int p = 0; p < 5; ++p)
            for (int c = 0; c < 5; ++c) m(p, c) = b[c](rank2_packed_entries[p].first, rank2_packed_entries[p].second).to_complex();
        mix(m);
    } else {
        throw shape_error("to_cartesian_field: rank must be 0, 1 or 2");
    }
    return out;
}

inline TensorField to_spherical_field(const TensorField& f)
{
    if (f.basis() != FieldBasis::cartesian) throw shape_error("to_spherical_field: field is already spherical");
    TensorField out(f.l(), FieldBasis::spherical, f.grid());
    const std::size_t N = f.grid().size();
    if (f.l() == 0) {
        out.data() = f.data();
    } else if (f.l() == 1) {
        const ExactMatrix& s = cartesian_transform_matrix();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const cplx w = std::conj(s(c, r).to_complex());
                if (w == cplx{}) continue;
                for (std::size_t i = 0; i < N; ++i) out.component(r)[i] += w * f.component(c)[i];
            }
    } else {
        // t_m = sum_ij conj(B_m)_ij T_ij with T33 = -T11 - T22 and T symmetric
        const auto& b = rank2_basis();
        for (int m = 0; m < 5; ++m) {
            auto w = [&](int i, int j) { return std::conj(b[m](i, j).to_complex()); };
            const std::array<cplx, 5> coeff = {w(0, 0) - w(2, 2), w(0, 1) + w(1, 0), w(0, 2) + w(2, 0), w(1, 1) - w(2, 2),
                                               w(1, 2) + w(2, 1)};
            for (int p = 0; p < 5; ++p) {
                if (coeff[p] == cplx{}) continue;
                for (std::size_t i = 0; i < N; ++i) out.component(m)[i] += coeff[p] * f.component(p)[i];
            }
        }
    }
    return out;
}

/// Packed cartesian rank-2 field as a full 3x3 array of sample arrays.
inline Rank2Tensor<std::valarray<cplx>> unpack_rank2(const TensorField& f)
{
    if (f.basis() != FieldBasis::cartesian || f.l() != 2) throw shape_error("unpack_rank2: expected a cartesian rank-2 field");
    const std::size_t N = f.grid().size();
    auto comp = [&](int p) { return std::valarray<cplx>(f.component(p), N); };
    Rank2Tensor<std::valarray<cplx>> t;
    for (int p = 0; p < 5; ++p) {
        const auto [i, j] = rank2_packed_entries[p];
        t[i][j] = t[j][i] = comp(p);
    }
    t[2][2] = -(t[0][0] + t[1][1]);
    return t;
}

inline TensorField pack_rank2(const Rank2Tensor<std::valarray<cplx>>& t, const GridSpec& g)
{
    TensorField f(2, FieldBasis::cartesian, g);
    for (int p = 0; p < 5; ++p) {
        const auto [i, j] = rank2_packed_entries[p];
        std::copy(std::begin(t[i][j]), std::end(t[i][j]), f.component(p));
    }
    return f;
}

/// Symmetrised curl of a packed cartesian rank-2 field, evaluated spectrally.
inline TensorField curl_rank2_field(const TensorField& f)
{
    const GridSpec& g = f.grid();
    const auto t = unpack_rank2(f);
    return pack_rank2(curl_rank2_cartesian(t, [&](int axis, const std::valarray<cplx>& v) { return spectral_partial(g, axis, v); }), g);
}

// ---------------------------------------------------------------------------
// Generators

/// Random field whose Fourier support is |j|_inf <= band (Nyquist excluded),
/// normalised to unit RMS over all components.
inline TensorField random_bandlimited(const GridSpec& g, int l, FieldBasis basis, int band, std::uint64_t seed)
{
    TensorField f(l, basis, g);
    const std::size_t N = g.size(), comps = f.components();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<cplx> spec(comps * N);
    for (int iz = 0; iz < g.n[2]; ++iz)
        for (int iy = 0; iy < g.n[1]; ++iy)
            for (int ix = 0; ix < g.n[0]; ++ix) {
                const std::array<int, 3> idx{ix, iy, iz};
                bool keep = true;
                for (int a = 0; a < 3; ++a)
                    keep = keep && !g.is_nyquist(a, idx[a]) && std::abs(g.mode_number(a, idx[a])) <= band;
                if (!keep) continue;
                for (std::size_t c = 0; c < comps; ++c) spec[c * N + g.index(ix, iy, iz)] = {gauss(rng), gauss(rng)};
            }
    f = from_spectral(std::move(spec), l, basis, g);
    double s = 0.0;
    for (const auto& v : f.data()) s += std::norm(v);
    if (s > 0.0) f *= cplx(1.0 / std::sqrt(s / double(N)));
    return f;
}

/// Eigenvector of the curl symbol L.k / l with eigenvalue m|k|/l, phase fixed
/// so its largest component is real and positive.
inline Eigen::VectorXcd helicity_vector(int l, int m, const std::array<double, 3>& k)
{
    if (m < -l || m > l) throw std::domain_error("helicity_vector: m out of range");
    const double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    if (kn == 0.0) throw std::domain_error("helicity_vector: k must be nonzero");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symbol_at(build_curl_cg(l), k));
    Eigen::VectorXcd v = es.eigenvectors().col(m + l);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::abs(v(arg)) / v(arg);
    return v;
}

/// amplitude * e_m(k) * exp(i k.x) with k = 2 pi j / L, spherical basis.
inline TensorField plane_wave(const GridSpec& g, int l, int m, const std::array<int, 3>& j, cplx amplitude = 1.0)
{
    g.validate();
    std::array<double, 3> k{};
    for (int a = 0; a < 3; ++a) {
        if (std::abs(j[a]) >= g.n[a] / 2) throw std::domain_error("plane_wave: mode number at or beyond Nyquist");
        k[a] = 2 * std::numbers::pi * j[a] / g.box[a];
    }
    const Eigen::VectorXcd v = helicity_vector(l, m, k);
    TensorField f(l, FieldBasis::spherical, g);
    for (int iz = 0; iz < g.n[2]; ++iz)
        for (int iy = 0; iy < g.n[1]; ++iy)
            for (int ix = 0; ix < g.n[0]; ++ix) {
                const double phase = k[0] * g.coordinate(0, ix) + k[1] * g.coordinate(1, iy) + k[2] * g.coordinate(2, iz);
                const cplx e = amplitude * std::polar(1.0, phase);
                for (int c = 0; c < 2 * l + 1; ++c) f.at(c, ix, iy, iz) = v(c) * e;
            }
    return f;
}

/// Smooth plateau: 1 for |t| <= a, 0 for |t| >= b, C-infinity in between.
inline double plateau_window(double t, double a, double b)
{
    const double s = std::abs(t);
    if (s <= a) return 1.0;
    if (s >= b) return 0.0;
    auto psi = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
    const double x = (b - s) / (b - a);
    return psi(x) / (psi(x) + psi(1.0 - x));
}

struct Example1Fields
{
    TensorField u; // (y, -x, 0)
    TensorField v; // (0, -x^2, 0)
    double plateau; // half-width in x and y where the window is exactly 1
};

/// The polynomial pair u, v multiplied by a plateau window in x and y so
/// the samples are periodic and smooth.
inline Example1Fields example1_fields(const GridSpec& g)
{
    const double ax = 0.15 * std::min(g.box[0], g.box[1]);
    const double bx = 0.49 * std::min(g.box[0], g.box[1]);
    Example1Fields out{TensorField(1, FieldBasis::cartesian, g), TensorField(1, FieldBasis::cartesian, g), ax};
    for (int iz = 0; iz < g.n[2]; ++iz)
        for (int iy = 0; iy < g.n[1]; ++iy)
            for (int ix = 0; ix < g.n[0]; ++ix) {
                const double x = g.coordinate(0, ix), y = g.coordinate(1, iy);
                const double w = plateau_window(x, ax, bx) * plateau_window(y, ax, bx);
                out.u.at(0, ix, iy, iz) = w * y;
                out.u.at(1, ix, iy, iz) = -w * x;
                out.v.at(1, ix, iy, iz) = -w * x * x;
            }
    return out;
}

} // namespace curlmat

#endif // CURLMAT_SPECTRAL_HPP
