#ifndef CURLMAT_EVOLVE_HPP
#define CURLMAT_EVOLVE_HPP

#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "curlmat/spectral.hpp"

namespace curlmat {

/// Spin-l free fields obeying
///   d/dt TE = c CURL TB,   d/dt TB = -c CURL TE,   DIV TE = DIV TB = 0.
/// Fields are held in the spherical basis.
struct EvolutionState
{
    TensorField TE;
    TensorField TB;
    double t = 0.0;
    double c = 1.0;
    int l = 1;

    void validate() const
    {
        if (!TE.same_layout(TB)) throw shape_error("EvolutionState: TE and TB differ in layout");
        if (TE.basis() != FieldBasis::spherical || TE.l() != l) throw shape_error("EvolutionState: fields must be spherical of rank l");
    }
};

inline EvolutionState zero_state(const GridSpec& g, int l, double c = 1.0)
{
    return {TensorField(l, FieldBasis::spherical, g), TensorField(l, FieldBasis::spherical, g), 0.0, c, l};
}

/// Per-mode eigendecomposition of the curl symbol M(k) = L.k / l, with
/// eigenvalues ascending (band m = -l, ..., l). The k = 0 mode uses the
/// standard basis in m = -l, ..., l order.
class SpectralStepper
{
public:
    static constexpr int max_dim = 2 * max_angular_l + 1;

    SpectralStepper(const GridSpec& g, int l) : grid_(g), l_(l), dim_(2 * l + 1)
    {
        g.validate();
        if (l < 1 || l > max_angular_l) throw std::domain_error("SpectralStepper: l out of range");
        const std::size_t N = g.size();
        vecs_.resize(N);
        vals_.resize(N);
        const CompiledSymbol sym(build_curl_cg(l));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dim_);
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            if (k[0] == 0.0 && k[1] == 0.0 && k[2] == 0.0) {
                Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim_, dim_);
                for (int m = -l; m <= l; ++m) v(basis_index(l, m), m + l) = 1.0;
                vecs_[i] = v;
                vals_[i] = Eigen::VectorXd::Zero(dim_);
                return;
            }
            es.compute(sym.evaluate(k));
            vecs_[i] = es.eigenvectors();
            vals_[i] = es.eigenvalues();
        });
    }

    int l() const { return l_; }
    const GridSpec& grid() const { return grid_; }
    const Eigen::MatrixXcd& eigenvectors(std::size_t mode) const { return vecs_[mode]; }
    const Eigen::VectorXd& eigenvalues(std::size_t mode) const { return vals_[mode]; }

    /// Applies the exact propagator `steps` times with step dt (dt may be negative).
    EvolutionState advance(const EvolutionState& s, double dt, int steps = 1) const
    {
        check(s);
        const std::size_t N = grid_.size();
        auto e = to_spectral(s.TE);
        auto b = to_spectral(s.TB);
        std::array<cplx, max_dim> ee, bb;
        for (std::size_t i = 0; i < N; ++i) {
            const Eigen::MatrixXcd& V = vecs_[i];
            for (int m = 0; m < dim_; ++m) {
                cplx se{}, sb{};
                for (int c = 0; c < dim_; ++c) {
                    const cplx w = std::conj(V(c, m));
                    se += w * e[c * N + i];
                    sb += w * b[c * N + i];
                }
                ee[m] = se;
                bb[m] = sb;
            }
            for (int m = 0; m < dim_; ++m) {
                const double th = s.c * vals_[i](m) * dt;
                if (th == 0.0) continue;
                const double cs = std::cos(th), sn = std::sin(th);
                for (int step = 0; step < steps; ++step) {
                    const cplx e0 = ee[m], b0 = bb[m];
                    ee[m] = e0 * cs + b0 * sn;
                    bb[m] = b0 * cs - e0 * sn;
                }
            }
            for (int c = 0; c < dim_; ++c) {
                cplx se{}, sb{};
                for (int m = 0; m < dim_; ++m) {
                    se += V(c, m) * ee[m];
                    sb += V(c, m) * bb[m];
                }
                e[c * N + i] = se;
                b[c * N + i] = sb;
            }
        }
        EvolutionState out = s;
        out.TE = from_spectral(std::move(e), l_, FieldBasis::spherical, grid_);
        out.TB = from_spectral(std::move(b), l_, FieldBasis::spherical, grid_);
        out.t = s.t + dt * steps;
        return out;
    }

    /// Band amplitudes A_m, m = -l..l, with A_m^2 = (dV/N) sum_k |V_m(k)^H TE~(k)|^2.
    std::vector<double> band_amplitudes(const TensorField& f) const
    {
        if (f.l() != l_ || !(f.grid() == grid_) || f.basis() != FieldBasis::spherical)
            throw shape_error("band_amplitudes: field layout mismatch");
        const std::size_t N = grid_.size();
        const auto spec = to_spectral(f);
        std::vector<double> acc(dim_, 0.0);
        Eigen::VectorXcd v(dim_);
        for (std::size_t i = 0; i < N; ++i) {
            for (int c = 0; c < dim_; ++c) v(c) = spec[c * N + i];
            const Eigen::VectorXcd p = vecs_[i].adjoint() * v;
            for (int m = 0; m < dim_; ++m) acc[m] += std::norm(p(m));
        }
        for (auto& a : acc) a = std::sqrt(a * grid_.cell_volume() / double(N));
        return acc;
    }

    /// (V_m^H TE~ + i V_m^H TB~) / N at one Fourier mode; evolves as exp(-i c lambda_m t).
    cplx band_phasor(const EvolutionState& s, int ix, int iy, int iz, int m) const
    {
        check(s);
        const std::size_t N = grid_.size();
        const std::size_t i = grid_.index(ix, iy, iz);
        const auto e = to_spectral(s.TE);
        const auto b = to_spectral(s.TB);
        cplx z{};
        for (int c = 0; c < dim_; ++c) z += std::conj(vecs_[i](c, m + l_)) * (e[c * N + i] + cplx(0, 1) * b[c * N + i]);
        return z / double(N);
    }

    /// Shared instance per (grid, l).
    static std::shared_ptr<const SpectralStepper> shared(const GridSpec& g, int l)
    {
        static std::mutex m;
        static std::map<std::pair<std::pair<std::array<int, 3>, std::array<double, 3>>, int>, std::shared_ptr<const SpectralStepper>> cache;
        std::lock_guard lock(m);
        auto& slot = cache[{{g.n, g.box}, l}];
        if (!slot) slot = std::make_shared<const SpectralStepper>(g, l);
        return slot;
    }

private:
    void check(const EvolutionState& s) const
    {
        s.validate();
        if (s.l != l_ || !(s.TE.grid() == grid_)) throw shape_error("SpectralStepper: state layout mismatch");
    }

    GridSpec grid_;
    int l_;
    int dim_;
    std::vector<Eigen::MatrixXcd> vecs_;
    std::vector<Eigen::VectorXd> vals_;
};

/// One exact step; negative dt runs backwards.
inline EvolutionState step_spectral(const EvolutionState& s, double dt)
{
    return SpectralStepper::shared(s.TE.grid(), s.l)->advance(s, dt, 1);
}

inline constexpr double rk4_stability_bound = 2.8;

/// Classical RK4 on the field equations using apply_operator.
inline EvolutionState step_rk4(const EvolutionState& s, double dt)
{
    s.validate();
    const double bound = std::abs(dt) * s.c * s.TE.grid().k_max();
    if (bound >= rk4_stability_bound)
        std::clog << "warning: rk4 step dt*c*k_max = " << bound << " exceeds stability bound " << rk4_stability_bound << "\n";
    const OpMatrix curl = build_curl_cg(s.l);
    auto rhs = [&](const TensorField& e, const TensorField& b) {
        return std::make_pair(cplx(s.c) * apply_operator(curl, b), cplx(-s.c) * apply_operator(curl, e));
    };
    const cplx h(dt), h2(dt / 2), h6(dt / 6);
    const auto [k1e, k1b] = rhs(s.TE, s.TB);
    const auto [k2e, k2b] = rhs(s.TE + h2 * k1e, s.TB + h2 * k1b);
    const auto [k3e, k3b] = rhs(s.TE + h2 * k2e, s.TB + h2 * k2b);
    const auto [k4e, k4b] = rhs(s.TE + h * k3e, s.TB + h * k3b);
    EvolutionState out = s;
    out.TE = s.TE + h6 * (k1e + cplx(2) * k2e + cplx(2) * k3e + k4e);
    out.TB = s.TB + h6 * (k1b + cplx(2) * k2b + cplx(2) * k3b + k4b);
    out.t = s.t + dt;
    return out;
}

struct Diagnostics
{
    double t = 0.0;
    double energy = 0.0;       // sum (|TE|^2 + |TB|^2) dV over components
    double div_E = 0.0;        // ||DIV TE|| / |TE|_1
    double div_B = 0.0;
    std::vector<double> bands; // TE band amplitudes, m = -l..l
};

inline double field_energy(const EvolutionState& s)
{
    const double e = l2_norm(s.TE), b = l2_norm(s.TB);
    return e * e + b * b;
}

inline double divergence_residual(const TensorField& f)
{
    return relative(l2_norm(apply_operator(build_div(f.l()), f)), gradient_seminorm(f));
}

inline Diagnostics diagnostics(const EvolutionState& s)
{
    s.validate();
    Diagnostics d;
    d.t = s.t;
    d.energy = field_energy(s);
    d.div_E = divergence_residual(s.TE);
    d.div_B = divergence_residual(s.TB);
    d.bands = SpectralStepper::shared(s.TE.grid(), s.l)->band_amplitudes(s.TE);
    return d;
}

/// Projects every mode of a spherical field onto the kernel of the DIV
/// symbol, P = I - D^H (D D^H)^-1 D, and clears k = 0.
inline TensorField project_divergence_free(const TensorField& f)
{
    if (f.basis() != FieldBasis::spherical || f.l() < 1) throw shape_error("project_divergence_free: expected a spherical field, l >= 1");
    const GridSpec& g = f.grid();
    const std::size_t N = g.size();
    const int n = 2 * f.l() + 1;
    const CompiledSymbol div(build_div(f.l()));
    auto spec = to_spectral(f);
    Eigen::VectorXcd v(n);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        if (k[0] == 0.0 && k[1] == 0.0 && k[2] == 0.0) {
            for (int c = 0; c < n; ++c) spec[c * N + i] = 0.0;
            return;
        }
        const Eigen::MatrixXcd D = div.evaluate(k);
        for (int c = 0; c < n; ++c) v(c) = spec[c * N + i];
        const Eigen::MatrixXcd DDh = D * D.adjoint();
        const Eigen::VectorXcd w = v - D.adjoint() * DDh.ldlt().solve(D * v);
        for (int c = 0; c < n; ++c) spec[c * N + i] = w(c);
    });
    return from_spectral(std::move(spec), f.l(), FieldBasis::spherical, g);
}

/// Random band-limited TE, TB with both divergence constraints satisfied.
inline EvolutionState random_divergence_free_state(const GridSpec& g, int l, int band, std::uint64_t seed, double c = 1.0)
{
    EvolutionState s{project_divergence_free(random_bandlimited(g, l, FieldBasis::spherical, band, seed)),
                     project_divergence_free(random_bandlimited(g, l, FieldBasis::spherical, band, seed + 1)), 0.0, c, l};
    return s;
}

/// Single helicity mode: TE = plane_wave(m, j), TB = 0.
inline EvolutionState plane_wave_state(const GridSpec& g, int l, int m, const std::array<int, 3>& j, double c = 1.0)
{
    return {plane_wave(g, l, m, j), TensorField(l, FieldBasis::spherical, g), 0.0, c, l};
}

struct TimeDerivative
{
    TensorField dTE;
    TensorField dTB;
};

/// Fourth-order central difference in time of the exact propagator.
inline TimeDerivative evolution_time_derivative(const EvolutionState& s, double h = 1e-3)
{
    const auto stepper = SpectralStepper::shared(s.TE.grid(), s.l);
    const auto p1 = stepper->advance(s, h), m1 = stepper->advance(s, -h);
    const auto p2 = stepper->advance(s, 2 * h), m2 = stepper->advance(s, -2 * h);
    const cplx w8(8.0 / (12.0 * h)), w1(1.0 / (12.0 * h));
    return {w8 * (p1.TE - m1.TE) - w1 * (p2.TE - m2.TE), w8 * (p1.TB - m1.TB) - w1 * (p2.TB - m2.TB)};
}

/// Relative residual of the complex-curl form of the field equations,
///   grad_c x E + ((1+i)/c) dB/dt = 0,   grad_c x B - ((1+i)/c) dE/dt = 0,
/// evaluated in the cartesian view (vector for l = 1, symmetric traceless
/// rank-2 tensor for l = 2) with the given time derivatives.
inline double complex_curl_residual(const EvolutionState& s, const TimeDerivative& d)
{
    s.validate();
    if (s.l != 1 && s.l != 2) throw shape_error("complex_curl_residual: l must be 1 or 2");
    const cplx one_i(1.0, 1.0);
    const TensorField E = to_cartesian_field(s.TE), B = to_cartesian_field(s.TB);
    const TensorField dE = to_cartesian_field(d.dTE), dB = to_cartesian_field(d.dTB);
    auto complex_curl = [&](const TensorField& f) {
        if (s.l == 1) return apply_operator(build_cartesian_curls().complex_curl, f);
        return one_i * curl_rank2_field(f);
    };
    const TensorField r1 = complex_curl(E) + (one_i / s.c) * dB;
    const TensorField r2 = complex_curl(B) - (one_i / s.c) * dE;
    const double num = std::hypot(l2_norm(r1), l2_norm(r2));
    const double den = std::sqrt(2.0) * std::hypot(gradient_seminorm(E), gradient_seminorm(B));
    return relative(num, den);
}

} // namespace curlmat

#endif // CURLMAT_EVOLVE_HPP
