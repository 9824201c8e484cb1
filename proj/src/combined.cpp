#include "polyham/combined.hpp"

#include "polyham/error.hpp"

#include <cmath>
#include <string>

namespace polyham::combined {

using radial::RadialBasis;
using radial::Shift;

namespace {

// Validates the pairing and returns the shift taking the ket λ to the bra λ.
Shift pairing(const RadialState& bra, const RadialState& ket) {
    if (std::abs(bra.v - ket.v) != 1) {
        throw PairingError("odd operators need v' = v ± 1, got v' = " + std::to_string(bra.v) +
                           ", v = " + std::to_string(ket.v));
    }
    const double d = bra.basis.lambda() - ket.basis.lambda();
    if (std::abs(std::abs(d) - 1.0) > 1e-12) {
        throw PairingError("radial bases must satisfy lambda' = lambda ± 1, got difference " +
                           std::to_string(d));
    }
    if (bra.basis.scale() != ket.basis.scale()) {
        throw PairingError("bra and ket radial bases must share one scale");
    }
    if (bra.nu < 0 || ket.nu < 0) throw DomainError("radial index must be non-negative");
    return d > 0 ? Shift::raise : Shift::lower;
}

RadialBasis covering(const RadialState& bra, const RadialState& ket) {
    return ket.basis.with_nu_max(std::max(bra.nu, ket.nu));
}

double half_n(int N, int v) { return v + 0.5 * N; }

}  // namespace

radial::Matrix factorization_operator(const RadialBasis& source, double target_lambda, double x,
                                      bool dagger) {
    const double d = target_lambda - source.lambda();
    if (std::abs(std::abs(d) - 1.0) > 1e-12) {
        throw PairingError("factorization operators connect lambda and lambda ± 1");
    }
    const Shift s = d > 0 ? Shift::raise : Shift::lower;
    const radial::Matrix ddr = radial::me_ddr(source, s).entries;
    return (dagger ? -ddr : ddr) + x * radial::me_inv_r(source, s).entries +
           radial::me_r(source, s).entries;
}

CoupledReducedME reduced_me_x(int N, const RadialState& bra, const RadialState& ket,
                              const orbital::PhaseConvention& phases) {
    const Shift s = pairing(bra, ket);
    const double rad = radial::me_r(covering(bra, ket), s).entries(bra.nu, ket.nu);
    const double orb = orbital::reduced_me_Q(N, bra.v, ket.v, phases);
    return {rad, orb, rad * orb, bra, ket};
}

double reduced_me_cdag(int N, const RadialState& bra, const RadialState& ket,
                       const orbital::PhaseConvention& phases) {
    pairing(bra, ket);
    const double h = half_n(N, ket.v);
    const double x = bra.v == ket.v + 1 ? h - 0.5 : -h + 1.5;
    const double rad = factorization_operator(covering(bra, ket), bra.basis.lambda(), x, true)(
        bra.nu, ket.nu);
    return rad * orbital::reduced_me_Q(N, bra.v, ket.v, phases) / std::sqrt(2.0);
}

double reduced_me_c(int N, const RadialState& bra, const RadialState& ket,
                    const orbital::PhaseConvention& phases) {
    pairing(bra, ket);
    const double h = half_n(N, ket.v);
    const double x = bra.v == ket.v + 1 ? -h + 0.5 : h - 1.5;
    const double rad = factorization_operator(covering(bra, ket), bra.basis.lambda(), x, false)(
        bra.nu, ket.nu);
    return rad * orbital::reduced_me_Q(N, bra.v, ket.v, phases) / std::sqrt(2.0);
}

ImaginaryValue reduced_me_p(int N, const RadialState& bra, const RadialState& ket,
                            const orbital::PhaseConvention& phases, double hbar) {
    const Shift s = pairing(bra, ket);
    const RadialBasis b = covering(bra, ket);
    const double h = half_n(N, ket.v);
    const double x = bra.v == ket.v + 1 ? -(h - 0.5) : h - 1.5;
    const double rad = radial::me_ddr(b, s).entries(bra.nu, ket.nu) +
                       x * radial::me_inv_r(b, s).entries(bra.nu, ket.nu);
    return {hbar * rad * orbital::reduced_me_Q(N, bra.v, ket.v, phases)};
}

}  // namespace polyham::combined
