#pragma once

#include "polyham/cg_table.hpp"
#include "polyham/radial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polyham::hamiltonian {

using radial::Matrix;

struct RadialFactor {
    enum class Kind { laplacian, d2dr2, ddr, power };
    Kind kind = Kind::power;
    int power = 0;

    static RadialFactor laplacian() { return {Kind::laplacian, 0}; }
    static RadialFactor d2dr2() { return {Kind::d2dr2, 0}; }
    static RadialFactor ddr() { return {Kind::ddr, 0}; }
    static RadialFactor r_power(int k) { return {Kind::power, k}; }

    bool odd() const;
    // Exponent of the scale a carried by the matrix elements (r^k gives −k, d/dr gives 1).
    int scale_power() const;
    std::string to_string() const;
};

enum class OrbitalTensor { scalar, crystal_field, triple_q };

std::string to_string(OrbitalTensor t);

// coefficient × f1 · f2 · … · fn (fn acts first) × orbital tensor
struct Term {
    double coefficient = 0.0;
    std::vector<RadialFactor> radial;
    OrbitalTensor orbital = OrbitalTensor::scalar;

    bool radial_odd() const;
};

struct HamiltonianSpec {
    int dimension = 3;
    double mass = 1.0;
    std::map<std::string, double> parameters;
    std::vector<Term> terms;
    std::string cg_table;  // path, used by triple_q terms

    // Parity and dimension rules; throws ConfigError.
    void validate() const;
    bool central() const;
    bool couples_odd() const;  // some term changes v by an odd amount
};

// Coefficients rescaled so that the operator is re-expressed in the variable a·r.
HamiltonianSpec rescale(const HamiltonianSpec& spec, double a);

class BasisSpec {
public:
    enum class Mode { harmonic, parity_pair, per_v };

    static BasisSpec harmonic(int N, double scale, int nu_max, int v_max);
    static BasisSpec parity_pair(int N, double lambda_even, double lambda_odd, double scale,
                                 int nu_max, int v_max);
    // One λ and scale per v = 0..size−1.
    static BasisSpec per_v(int N, std::vector<double> lambdas, std::vector<double> scales,
                           int nu_max);

    Mode mode() const { return mode_; }
    int dimension() const { return N_; }
    int nu_max() const { return nu_max_; }
    int v_max() const { return v_max_; }
    double lambda(int v) const;
    double scale(int v) const;
    radial::RadialBasis radial(int v) const;
    bool global_scale() const;
    bool adjacent() const;  // |λ_{v+1} − λ_v| = 1 for all v < v_max

    BasisSpec with_nu_max(int nu_max) const;
    BasisSpec with_v_max(int v_max) const;
    std::string describe() const;

private:
    BasisSpec() = default;
    void check_v(int v) const;

    Mode mode_ = Mode::harmonic;
    int N_ = 3;
    int nu_max_ = 0;
    int v_max_ = 0;
    std::vector<double> lambdas_;  // harmonic: empty; parity_pair: {even, odd}
    std::vector<double> scales_;
};

struct StateLabel {
    int nu = 0;
    int v = 0;
    int alpha = 1;
    int L = 0;
    int M = 0;
};

struct Block {
    std::string label;
    int v = -1;       // central blocks
    int L = -1;       // coupled blocks
    int M = 0;
    int parity = 0;   // ±1 for crystal-field blocks
    Matrix matrix;
    std::vector<StateLabel> states;
};

struct AssembledMatrix {
    std::vector<Block> blocks;
};

// ⟨target λ, μ|f1 ⋯ fn|source, ν⟩ for a product of radial factors. v is the SO(N)
// label of the ket, needed by ∇².
radial::OperatorMatrix radial_term_matrix(const std::vector<RadialFactor>& factors,
                                          const radial::RadialBasis& source,
                                          double target_lambda, int N, int v);

Matrix build_central_force_block(const HamiltonianSpec& spec, const BasisSpec& basis, int v);

// Crystal-field (N = 3) blocks labelled by (m, parity); triple-Q (N = 5) blocks by L.
AssembledMatrix build_coupled_matrix(const HamiltonianSpec& spec, const BasisSpec& basis,
                                     const CGTable* table = nullptr);

// Central blocks for v = 0..v_max, or the coupled blocks when the spec is not central.
AssembledMatrix assemble(const HamiltonianSpec& spec, const BasisSpec& basis,
                         const CGTable* table = nullptr);

}  // namespace polyham::hamiltonian
