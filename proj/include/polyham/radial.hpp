#pragma once

#include <Eigen/Dense>

#include <vector>

namespace polyham::radial {

using Matrix = Eigen::MatrixXd;

class RadialBasis {
public:
    RadialBasis(double lambda, double scale, int nu_max);

    double lambda() const { return lambda_; }
    double scale() const { return scale_; }
    int nu_max() const { return nu_max_; }
    int size() const { return nu_max_ + 1; }

    RadialBasis with_lambda(double lambda) const { return {lambda, scale_, nu_max_}; }
    RadialBasis with_scale(double scale) const { return {lambda_, scale, nu_max_}; }
    RadialBasis with_nu_max(int nu_max) const { return {lambda_, scale_, nu_max}; }

    bool operator==(const RadialBasis&) const = default;

private:
    double lambda_;
    double scale_;
    int nu_max_;
};

// entries(mu, nu) = <target mu| op |source nu>.  Entries scale as a^scale_power.
struct OperatorMatrix {
    RadialBasis source;
    RadialBasis target;
    Matrix entries;
    bool exact_within_truncation = true;
    int scale_power = 0;
};

struct SU11Generators {
    OperatorMatrix s_plus;
    OperatorMatrix s_minus;
    OperatorMatrix s_zero;
};

enum class Shift { raise, lower };

double eval_radial_wavefunction(const RadialBasis& basis, int nu, double r);
// All ν = 0..nu_max at one point, sharing the Laguerre recurrence.
std::vector<double> eval_radial_wavefunctions(const RadialBasis& basis, double r);

// Unscaled f^λ_{μν}, the matrix of 1/r² in the λ irrep.
double inv_r2_element(double lambda, int mu, int nu);

OperatorMatrix me_r2(const RadialBasis& basis);
OperatorMatrix me_inv_r2(const RadialBasis& basis);
OperatorMatrix me_d2dr2(const RadialBasis& basis);
OperatorMatrix me_r(const RadialBasis& basis, Shift shift);
OperatorMatrix me_inv_r(const RadialBasis& basis, Shift shift);
OperatorMatrix me_ddr(const RadialBasis& basis, Shift shift);
OperatorMatrix me_laplacian_radial(const RadialBasis& basis, int dimension, int v);
SU11Generators su11_generators(const RadialBasis& basis);

// <target|r^k|source> for integer k and integer λ difference d = λ_target − λ_source.
//   k ≥ 0: |d| ≤ k and d ≡ k (mod 2), built from products of band matrices (exact);
//   k < 0: d ∈ {0, ±1} with d ≡ k (mod 2), built from triangular 1/r chains (exact).
OperatorMatrix me_r_power(const RadialBasis& source, double target_lambda, int k);

// Same operator, expressed in the basis with scale a.
OperatorMatrix rescale(const OperatorMatrix& op, double a);

// Target basis for a λ shift.
RadialBasis shifted(const RadialBasis& basis, Shift shift);

}  // namespace polyham::radial
