#pragma once

#include "polyham/orbital.hpp"
#include "polyham/radial.hpp"

namespace polyham::combined {

// A radial function R^λ_ν at scale a, carrying the SO(N) label v of its orbital part.
struct RadialState {
    radial::RadialBasis basis;  // only λ and a are used
    int nu;
    int v;
};

struct CoupledReducedME {
    double radial_factor;
    double orbital_factor;
    double total;
    RadialState bra;
    RadialState ket;
};

// The value is −i·coefficient.
struct ImaginaryValue {
    double coefficient;
};

// ⟨λ' μ|A(X)|λ ν⟩ (dagger = false) or ⟨λ' μ|A†(X)|λ ν⟩ for λ' = λ ± 1, where
// A(X) = d/dr + X/r + r and A†(X) = −d/dr + X/r + r.
radial::Matrix factorization_operator(const radial::RadialBasis& source, double target_lambda,
                                      double x, bool dagger);

CoupledReducedME reduced_me_x(int N, const RadialState& bra, const RadialState& ket,
                              const orbital::PhaseConvention& phases);
double reduced_me_cdag(int N, const RadialState& bra, const RadialState& ket,
                       const orbital::PhaseConvention& phases);
double reduced_me_c(int N, const RadialState& bra, const RadialState& ket,
                    const orbital::PhaseConvention& phases);
ImaginaryValue reduced_me_p(int N, const RadialState& bra, const RadialState& ket,
                            const orbital::PhaseConvention& phases, double hbar = 1.0);

}  // namespace polyham::combined
