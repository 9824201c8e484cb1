#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

// Independent numerical checks: generalized Gauss–Laguerre quadrature of radial
// matrix elements, product-rule angular quadrature, and a finite-difference
// radial eigensolver.
namespace polyham::oracle {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double alpha = 0.0;  // weight u^alpha e^{-u}
    int order = 0;
};

QuadratureRule gauss_laguerre(int order, double alpha);

struct RadialOperator {
    enum class Kind { r_power, ddr, d2dr2 };
    Kind kind = Kind::r_power;
    int power = 0;

    static RadialOperator identity() { return {Kind::r_power, 0}; }
    static RadialOperator r_power(int k) { return {Kind::r_power, k}; }
    static RadialOperator inv_r2() { return {Kind::r_power, -2}; }
    static RadialOperator ddr() { return {Kind::ddr, 0}; }
    static RadialOperator d2dr2() { return {Kind::d2dr2, 0}; }
};

// ∫ R^{λ'}_μ(r) Op R^λ_ν(r) dr with both functions at scale a.  Certified by
// doubling the order; throws ConvergenceError on disagreement above 1e-10.
double quad_me(double lambda_bra, int mu, double lambda_ket, int nu, RadialOperator op,
               double scale = 1.0, int order = 120);

// All entries (μ ≤ mu_max, ν ≤ nu_max) at once; rows index the bra.
Eigen::MatrixXd quad_matrix(double lambda_bra, int mu_max, double lambda_ket, int nu_max,
                            RadialOperator op, double scale = 1.0, int order = 120);

struct RadialGrid {
    double r_min = 0.0;  // Dirichlet boundary; the potential is never evaluated here
    double r_max = 0.0;
    double h = 0.0;
};

struct FdOptions {
    double r_max = 0.0;  // 0: chosen from the semiclassical decay of the k-th state
    int intervals = 1500;
    double tolerance = 1e-8;
};

struct FdResult {
    std::vector<double> eigenvalues;  // Richardson-extrapolated
    std::vector<double> error_estimates;
    double convergence_order = 0.0;  // measured on the lowest level
    bool converged = false;
    RadialGrid grid;
};

// Lowest k eigenvalues of −½ d²/dr² + c/r² + V(r) on L²(0, ∞).
FdResult fd_radial_eigen(const std::function<double(double)>& potential, double c, int k,
                         const FdOptions& options = {});

// Eigenvalues of the plain three-point discretisation on a fixed grid.
std::vector<double> fd_radial_eigen_raw(const std::function<double(double)>& potential, double c,
                                        int k, const RadialGrid& grid);

// ∫ Y*_{l2 m2} f Y_{l1 m1} dΩ, Gauss–Legendre in cos θ times a uniform φ rule.
std::complex<double> angular_quad_me(int l2, int m2, int l1, int m1,
                                     const std::function<std::complex<double>(double, double)>& f,
                                     int n_theta = 64, int n_phi = 64);

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

}  // namespace polyham::oracle
