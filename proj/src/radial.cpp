#include "polyham/radial.hpp"

#include "polyham/error.hpp"

#include <cmath>
#include <string>

namespace polyham::radial {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void require_lambda_above_one(const RadialBasis& basis, const char* op) {
    if (!(basis.lambda() > 1.0)) {
        throw DomainError(std::string(op) + " requires lambda > 1, got " +
                          std::to_string(basis.lambda()));
    }
}

OperatorMatrix make(const RadialBasis& source, const RadialBasis& target, bool exact,
                    int scale_power) {
    return {source, target, Matrix::Zero(target.size(), source.size()), exact, scale_power};
}

// log Π_{k=lo}^{hi−1} (k+1)/(λ+k), i.e. log[hi! Γ(λ+lo) / (lo! Γ(λ+hi))].
// Summed term by term so large λ keeps full relative accuracy.
double log_ratio(double lambda, int lo, int hi) {
    double s = 0.0;
    for (int k = lo; k < hi; ++k) s += std::log1p(-(lambda - 1.0) / (lambda + k));
    return s;
}

// Unscaled <λ−1, μ|1/r|λ, ν>, nonzero for μ ≤ ν.
double inv_r_lower_element(double lambda, int mu, int nu) {
    if (mu > nu) return 0.0;
    const double log_mag = 0.5 * (log_ratio(lambda, mu, nu) - std::log(lambda + mu - 1.0));
    return sign_pow(nu - mu) * std::exp(log_mag);
}

// Unscaled <λ+1, μ|1/r|λ, ν>, nonzero for μ ≥ ν.
double inv_r_raise_element(double lambda, int mu, int nu) {
    if (mu < nu) return 0.0;
    const double log_mag = 0.5 * (log_ratio(lambda, nu, mu) - std::log(lambda + mu));
    return sign_pow(mu - nu) * std::exp(log_mag);
}

Matrix crop(const Matrix& m, int rows, int cols) { return m.topLeftCorner(rows, cols); }

}  // namespace

RadialBasis::RadialBasis(double lambda, double scale, int nu_max)
    : lambda_(lambda), scale_(scale), nu_max_(nu_max) {
    if (!(lambda > 0.0)) throw DomainError("radial basis requires lambda > 0");
    if (!(scale > 0.0)) throw DomainError("radial basis requires scale > 0");
    if (nu_max < 0) throw DomainError("radial basis requires nu_max >= 0");
}

RadialBasis shifted(const RadialBasis& basis, Shift shift) {
    return basis.with_lambda(basis.lambda() + (shift == Shift::raise ? 1.0 : -1.0));
}

std::vector<double> eval_radial_wavefunctions(const RadialBasis& basis, double r) {
    if (r < 0.0) throw DomainError("radial wavefunction requires r >= 0");
    const double lambda = basis.lambda();
    const double a = basis.scale();
    const double x = a * r;
    const double u = x * x;
    const double alpha = lambda - 1.0;
    const int n = basis.size();

    std::vector<double> lag(n);
    lag[0] = 1.0;
    if (n > 1) lag[1] = 1.0 + alpha - u;
    for (int k = 1; k + 1 < n; ++k) {
        lag[k + 1] = ((2.0 * k + 1.0 + alpha - u) * lag[k] - (k + alpha) * lag[k - 1]) / (k + 1.0);
    }

    std::vector<double> out(n);
    for (int nu = 0; nu < n; ++nu) {
        const double log_norm =
            0.5 * (std::log(2.0) + log_factorial(nu) - std::lgamma(lambda + nu));
        const double sign = sign_pow(nu) * (lag[nu] < 0.0 ? -1.0 : 1.0);
        if (lag[nu] == 0.0) {
            out[nu] = 0.0;
        } else if (x == 0.0) {
            if (lambda > 0.5) {
                out[nu] = 0.0;
            } else if (lambda == 0.5) {
                out[nu] = sign * std::exp(log_norm + std::log(std::abs(lag[nu]))) * std::sqrt(a);
            } else {
                out[nu] = sign * HUGE_VAL;
            }
        } else {
            const double log_val = log_norm + (lambda - 0.5) * std::log(x) - 0.5 * u +
                                   std::log(std::abs(lag[nu]));
            out[nu] = sign * std::exp(log_val) * std::sqrt(a);
        }
    }
    return out;
}

double eval_radial_wavefunction(const RadialBasis& basis, int nu, double r) {
    if (nu < 0 || nu > basis.nu_max()) throw DomainError("radial index out of range");
    return eval_radial_wavefunctions(basis.with_nu_max(nu), r)[nu];
}

double inv_r2_element(double lambda, int mu, int nu) {
    if (!(lambda > 1.0)) throw DomainError("1/r^2 matrix elements require lambda > 1");
    if (mu > nu) std::swap(mu, nu);
    return sign_pow(nu - mu) * std::exp(0.5 * log_ratio(lambda, mu, nu)) / (lambda - 1.0);
}

OperatorMatrix me_r2(const RadialBasis& basis) {
    const double lambda = basis.lambda();
    const double s = 1.0 / (basis.scale() * basis.scale());
    OperatorMatrix op = make(basis, basis, true, -2);
    for (int nu = 0; nu < basis.size(); ++nu) {
        op.entries(nu, nu) = (lambda + 2.0 * nu) * s;
        if (nu + 1 < basis.size()) {
            const double off = std::sqrt((lambda + nu) * (nu + 1.0)) * s;
            op.entries(nu + 1, nu) = off;
            op.entries(nu, nu + 1) = off;
        }
    }
    return op;
}

OperatorMatrix me_inv_r2(const RadialBasis& basis) {
    require_lambda_above_one(basis, "me_inv_r2");
    const double s = basis.scale() * basis.scale();
    OperatorMatrix op = make(basis, basis, false, 2);
    for (int nu = 0; nu < basis.size(); ++nu) {
        for (int mu = 0; mu <= nu; ++mu) {
            const double f = inv_r2_element(basis.lambda(), mu, nu) * s;
            op.entries(mu, nu) = f;
            op.entries(nu, mu) = f;
        }
    }
    return op;
}

namespace {

// a²[S₊ + S₋ − 2S₀] + coeff·a²·f
OperatorMatrix second_derivative_like(const RadialBasis& basis, double coeff, const char* name) {
    const double lambda = basis.lambda();
    const double s = basis.scale() * basis.scale();
    const bool band = coeff == 0.0;
    if (!band) require_lambda_above_one(basis, name);
    OperatorMatrix op = make(basis, basis, band, 2);
    for (int nu = 0; nu < basis.size(); ++nu) {
        op.entries(nu, nu) = -(lambda + 2.0 * nu) * s;
        if (nu + 1 < basis.size()) {
            const double off = std::sqrt((lambda + nu) * (nu + 1.0)) * s;
            op.entries(nu + 1, nu) = off;
            op.entries(nu, nu + 1) = off;
        }
    }
    if (!band) op.entries += coeff * me_inv_r2(basis).entries;
    return op;
}

}  // namespace

OperatorMatrix me_d2dr2(const RadialBasis& basis) {
    const double lambda = basis.lambda();
    return second_derivative_like(basis, (lambda - 1.5) * (lambda - 0.5), "me_d2dr2");
}

OperatorMatrix me_laplacian_radial(const RadialBasis& basis, int dimension, int v) {
    if (dimension < 1 || v < 0) throw DomainError("laplacian requires N >= 1 and v >= 0");
    const double lambda = basis.lambda();
    const double h = v + 0.5 * dimension - 1.0;
    return second_derivative_like(basis, (lambda - 1.0) * (lambda - 1.0) - h * h,
                                  "me_laplacian_radial");
}

OperatorMatrix me_r(const RadialBasis& basis, Shift shift) {
    const double lambda = basis.lambda();
    const double s = 1.0 / basis.scale();
    const int n = basis.size();
    if (shift == Shift::lower) require_lambda_above_one(basis, "me_r (lower)");
    OperatorMatrix op = make(basis, shifted(basis, shift), true, -1);
    for (int nu = 0; nu < n; ++nu) {
        if (shift == Shift::lower) {
            op.entries(nu, nu) = std::sqrt(lambda + nu - 1.0) * s;
            if (nu + 1 < n) op.entries(nu + 1, nu) = std::sqrt(nu + 1.0) * s;
        } else {
            op.entries(nu, nu) = std::sqrt(lambda + nu) * s;
            if (nu >= 1) op.entries(nu - 1, nu) = std::sqrt(static_cast<double>(nu)) * s;
        }
    }
    return op;
}

OperatorMatrix me_inv_r(const RadialBasis& basis, Shift shift) {
    const double lambda = basis.lambda();
    const double s = basis.scale();
    const int n = basis.size();
    if (shift == Shift::lower) require_lambda_above_one(basis, "me_inv_r (lower)");
    OperatorMatrix op = make(basis, shifted(basis, shift), false, 1);
    for (int nu = 0; nu < n; ++nu) {
        for (int mu = 0; mu < n; ++mu) {
            op.entries(mu, nu) = s * (shift == Shift::lower ? inv_r_lower_element(lambda, mu, nu)
                                                            : inv_r_raise_element(lambda, mu, nu));
        }
    }
    return op;
}

OperatorMatrix me_ddr(const RadialBasis& basis, Shift shift) {
    const double lambda = basis.lambda();
    const double s = basis.scale();
    const int n = basis.size();
    if (shift == Shift::lower) require_lambda_above_one(basis, "me_ddr (lower)");
    OperatorMatrix op = make(basis, shifted(basis, shift), false, 1);
    for (int nu = 0; nu < n; ++nu) {
        if (shift == Shift::lower) {
            if (nu + 1 < n) op.entries(nu + 1, nu) = -std::sqrt(nu + 1.0) * s;
            op.entries(nu, nu) = (nu + 0.5) / std::sqrt(lambda + nu - 1.0) * s;
            for (int mu = 0; mu < nu; ++mu) {
                op.entries(mu, nu) = -(lambda - 1.5) * inv_r_lower_element(lambda, mu, nu) * s;
            }
        } else {
            if (nu >= 1) op.entries(nu - 1, nu) = std::sqrt(static_cast<double>(nu)) * s;
            op.entries(nu, nu) = -(nu + 0.5) / std::sqrt(lambda + nu) * s;
            for (int mu = nu + 1; mu < n; ++mu) {
                op.entries(mu, nu) = (lambda - 0.5) * inv_r_raise_element(lambda, mu, nu) * s;
            }
        }
    }
    return op;
}

SU11Generators su11_generators(const RadialBasis& basis) {
    const double lambda = basis.lambda();
    const int n = basis.size();
    SU11Generators g{make(basis, basis, true, 0), make(basis, basis, true, 0),
                     make(basis, basis, true, 0)};
    for (int nu = 0; nu < n; ++nu) {
        g.s_zero.entries(nu, nu) = 0.5 * (lambda + 2.0 * nu);
        if (nu + 1 < n) g.s_plus.entries(nu + 1, nu) = std::sqrt((lambda + nu) * (nu + 1.0));
    }
    g.s_minus.entries = g.s_plus.entries.transpose();
    return g;
}

namespace {

// <λ−p|r^{−p}|λ>: product of lowering 1/r matrices, upper triangular so exact under truncation.
Matrix inv_r_descent(const RadialBasis& basis, int p) {
    Matrix acc = Matrix::Identity(basis.size(), basis.size());
    RadialBasis cur = basis;
    for (int i = 0; i < p; ++i) {
        acc = me_inv_r(cur, Shift::lower).entries * acc;
        cur = shifted(cur, Shift::lower);
    }
    return acc;
}

Matrix inv_r_even(const RadialBasis& basis, int p) {
    if (p == 0) return Matrix::Identity(basis.size(), basis.size());
    if (p == 1) return me_inv_r2(basis).entries;
    if (!(basis.lambda() > p)) {
        throw DomainError("r^-" + std::to_string(2 * p) + " requires lambda > " +
                          std::to_string(p));
    }
    const Matrix d = inv_r_descent(basis, p);
    return d.transpose() * d;
}

}  // namespace

OperatorMatrix me_r_power(const RadialBasis& source, double target_lambda, int k) {
    const double diff = target_lambda - source.lambda();
    const int d = static_cast<int>(std::lround(diff));
    if (std::abs(diff - d) > 1e-12) {
        throw PairingError("r^k needs an integer lambda difference, got " + std::to_string(diff));
    }
    const int parity = ((k % 2) + 2) % 2;
    if (((d % 2) + 2) % 2 != parity) {
        throw PairingError("r^" + std::to_string(k) + " cannot connect lambda differing by " +
                           std::to_string(d));
    }
    const RadialBasis target = source.with_lambda(source.lambda() + d);
    const int n = source.size();

    if (k >= 0) {
        if (std::abs(d) > k) {
            throw PairingError("r^" + std::to_string(k) + " cannot connect lambda differing by " +
                               std::to_string(d));
        }
        if (k == 0) return {source, target, Matrix::Identity(n, n), true, 0};
        const int margin = k;
        const RadialBasis ext = source.with_nu_max(source.nu_max() + margin);
        Matrix acc;
        if (d == 0) {
            const Matrix r2 = me_r2(ext).entries;
            acc = r2;
            for (int i = 1; i < k / 2; ++i) acc = r2 * acc;
        } else {
            const int raises = (k + d) / 2;
            const int lowers = (k - d) / 2;
            acc = Matrix::Identity(ext.size(), ext.size());
            RadialBasis cur = ext;
            for (int i = 0; i < raises; ++i) {
                acc = me_r(cur, Shift::raise).entries * acc;
                cur = shifted(cur, Shift::raise);
            }
            for (int i = 0; i < lowers; ++i) {
                acc = me_r(cur, Shift::lower).entries * acc;
                cur = shifted(cur, Shift::lower);
            }
        }
        return {source, target, crop(acc, n, n), true, -k};
    }

    const int m = -k;
    if (m % 2 == 0) {
        if (d != 0) throw PairingError("even negative powers of r need equal lambda");
        return {source, target, inv_r_even(source, m / 2), false, m};
    }
    if (std::abs(d) != 1) throw PairingError("odd negative powers of r need lambda differing by 1");
    if (m == 1) return me_inv_r(source, d > 0 ? Shift::raise : Shift::lower);
    const int p = (m - 1) / 2;
    Matrix entries;
    if (d < 0) {
        // r^{-2p} at λ−1 after one lowering 1/r step.
        entries = inv_r_even(target, p) * me_inv_r(source, Shift::lower).entries;
    } else {
        entries = (inv_r_even(source, p) * me_inv_r(target, Shift::lower).entries).transpose();
    }
    return {source, target, entries, false, m};
}

OperatorMatrix rescale(const OperatorMatrix& op, double a) {
    if (!(a > 0.0)) throw DomainError("rescale requires a > 0");
    OperatorMatrix out = op;
    out.source = op.source.with_scale(a);
    out.target = op.target.with_scale(a);
    out.entries *= std::pow(a / op.source.scale(), op.scale_power);
    return out;
}

}  // namespace polyham::radial
