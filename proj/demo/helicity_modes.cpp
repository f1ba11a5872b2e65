// Prints the exact curl matrices for l = 1, 2 and follows a plane wave in each
// helicity band through one spectral evolution, comparing the measured phase
// velocity with c*m*|k|/l.
#include <cstdio>
#include <iostream>

#include "curlmat/curlmat.hpp"

using namespace curlmat;

int main()
{
    for (int l = 1; l <= 2; ++l) {
        std::cout << "CURL(" << l << "):\n" << to_text(build_curl_cg(l)) << "\n";
    }

    const GridSpec g = GridSpec::cube(16, 2 * std::numbers::pi);
    const std::array<int, 3> j{1, 2, 2}; // |k| = 3
    const double dt = 0.05;
    const int steps = 40;

    std::printf("%3s %3s %12s %12s %12s %12s\n", "l", "m", "omega", "expected", "energy", "div E");
    for (int l = 1; l <= 2; ++l) {
        const auto stepper = SpectralStepper::shared(g, l);
        for (int m = -l; m <= l; ++m) {
            EvolutionState s = plane_wave_state(g, l, m, j);
            cplx z = stepper->band_phasor(s, j[0], j[1], j[2], m);
            const double e0 = field_energy(s);
            double phase = 0.0;
            for (int n = 0; n < steps; ++n) {
                s = step_spectral(s, dt);
                const cplx z1 = stepper->band_phasor(s, j[0], j[1], j[2], m);
                phase -= std::arg(z1 / z);
                z = z1;
            }
            const double omega = phase / (dt * steps);
            const auto d = diagnostics(s);
            std::printf("%3d %3d %12.8f %12.8f %12.3e %12.3e\n", l, m, omega, 3.0 * m / l, d.energy / e0 - 1.0, d.div_E);
        }
    }
    return 0;
}
