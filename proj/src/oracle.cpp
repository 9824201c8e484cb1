#include "polyham/oracle.hpp"

#include "polyham/error.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace polyham::oracle {

namespace {

struct FixedDeleter {
    void operator()(gsl_integration_fixed_workspace* w) const { gsl_integration_fixed_free(w); }
};

QuadratureRule build_rule(const gsl_integration_fixed_type* type, int order, double a, double b,
                          double alpha) {
    std::unique_ptr<gsl_integration_fixed_workspace, FixedDeleter> w(
        gsl_integration_fixed_alloc(type, static_cast<size_t>(order), a, b, alpha, 0.0));
    if (!w) throw DomainError("quadrature rule allocation failed");
    QuadratureRule rule;
    rule.alpha = alpha;
    rule.order = order;
    const double* x = gsl_integration_fixed_nodes(w.get());
    const double* wt = gsl_integration_fixed_weights(w.get());
    rule.nodes.assign(x, x + order);
    rule.weights.assign(wt, wt + order);
    return rule;
}

using Real = long double;

struct ExtendedRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

// L_n^(a)(u) and its derivative by the three-term recurrence in extended precision.
std::pair<Real, Real> laguerre_with_derivative(int n, Real a, Real u) {
    Real prev = 1.0L;
    if (n == 0) return {prev, 0.0L};
    Real cur = 1.0L + a - u;
    for (int k = 1; k < n; ++k) {
        const Real next = ((2.0L * k + 1.0L + a - u) * cur - (k + a) * prev) / (k + 1.0L);
        prev = cur;
        cur = next;
    }
    return {cur, (n * cur - (n + a) * prev) / u};
}

// GSL supplies nodes in double precision; they are polished by Newton steps and the
// weights taken from Γ(n+a+1) / (n! u L_n'(u)²), so the rule is accurate well below
// the double rounding level.
ExtendedRule extended_laguerre(int order, double alpha) {
    const QuadratureRule seed = build_rule(gsl_integration_fixed_laguerre, order, 0.0, 1.0, alpha);
    ExtendedRule rule;
    const Real a = alpha;
    const Real log_num = lgammal(order + a + 1.0L) - lgammal(order + 1.0L);
    for (int i = 0; i < order; ++i) {
        Real u = seed.nodes[i];
        for (int it = 0; it < 20; ++it) {
            const auto [p, dp] = laguerre_with_derivative(order, a, u);
            const Real step = p / dp;
            u -= step;
            if (std::fabs(step) <= 1e-19L * u) break;
        }
        const Real dp = laguerre_with_derivative(order, a, u).second;
        rule.nodes.push_back(u);
        rule.weights.push_back(expl(log_num - logl(u) - 2.0L * logl(std::fabs(dp))));
    }
    return rule;
}

const ExtendedRule& cached_laguerre(int order, double alpha) {
    static std::mutex mutex;
    static std::map<std::pair<int, double>, ExtendedRule> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(order, alpha);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, extended_laguerre(order, alpha)).first;
    return it->second;
}

Real log_norm(double lambda, int nu) {
    return 0.5L * (logl(2.0L) + lgammal(nu + 1.0L) - lgammal(static_cast<Real>(lambda) + nu));
}

// Polynomial part in u = x² of R (derivative=false) or dR/dx (derivative=true),
// without the normalisation constant, the x power and the Gaussian.
Real poly_part(double lambda, int nu, Real u, bool derivative) {
    const Real a = static_cast<Real>(lambda) - 1.0L;
    const Real lag = laguerre_with_derivative(nu, a, u).first;
    const Real sign = (nu % 2 == 0) ? 1.0L : -1.0L;
    if (!derivative) return sign * lag;
    const Real dlag = nu > 0 ? -laguerre_with_derivative(nu - 1, a + 1.0L, u).first : 0.0L;
    return sign * ((static_cast<Real>(lambda) - 0.5L - u) * lag + 2.0L * u * dlag);
}

struct Setup {
    double x_power_bra;
    double x_power_ket;
    bool deriv_bra;
    bool deriv_ket;
    double sign;
    double scale_factor;
};

Setup setup_for(double lambda_bra, double lambda_ket, RadialOperator op, double scale) {
    switch (op.kind) {
        case RadialOperator::Kind::r_power:
            return {lambda_bra - 0.5 + op.power, lambda_ket - 0.5, false, false, 1.0,
                    std::pow(scale, -op.power)};
        case RadialOperator::Kind::ddr:
            return {lambda_bra - 0.5, lambda_ket - 1.5, false, true, 1.0, scale};
        case RadialOperator::Kind::d2dr2:
            // integration by parts: −∫ R' R'
            if (!(lambda_bra + lambda_ket > 2.0)) {
                throw DomainError("d2/dr2 quadrature needs lambda + lambda' > 2");
            }
            return {lambda_bra - 1.5, lambda_ket - 1.5, true, true, -1.0, scale * scale};
    }
    throw DomainError("unknown radial operator");
}

Eigen::MatrixXd quad_matrix_at(double lambda_bra, int mu_max, double lambda_ket, int nu_max,
                               const Setup& s, int order) {
    // ∫ x^{p1+p2} A B e^{-x²} dx = ½ ∫ u^{(p1+p2-1)/2} A B e^{-u} du
    const double alpha = 0.5 * (s.x_power_bra + s.x_power_ket - 1.0);
    if (!(alpha > -1.0)) throw DomainError("radial integrand is not integrable at r = 0");
    const ExtendedRule& rule = cached_laguerre(order, alpha);

    std::vector<std::vector<Real>> bra(mu_max + 1, std::vector<Real>(order));
    std::vector<std::vector<Real>> ket(nu_max + 1, std::vector<Real>(order));
    for (int i = 0; i < order; ++i) {
        const Real u = rule.nodes[i];
        for (int mu = 0; mu <= mu_max; ++mu) bra[mu][i] = poly_part(lambda_bra, mu, u, s.deriv_bra);
        for (int nu = 0; nu <= nu_max; ++nu) ket[nu][i] = poly_part(lambda_ket, nu, u, s.deriv_ket);
    }
    Eigen::MatrixXd out(mu_max + 1, nu_max + 1);
    for (int mu = 0; mu <= mu_max; ++mu) {
        for (int nu = 0; nu <= nu_max; ++nu) {
            Real sum = 0.0L;
            for (int i = 0; i < order; ++i) sum += rule.weights[i] * bra[mu][i] * ket[nu][i];
            const Real norm = expl(log_norm(lambda_bra, mu) + log_norm(lambda_ket, nu));
            out(mu, nu) = static_cast<double>(0.5L * s.sign * s.scale_factor * norm * sum);
        }
    }
    return out;
}

}  // namespace

QuadratureRule gauss_laguerre(int order, double alpha) {
    if (order < 1) throw DomainError("quadrature order must be positive");
    return build_rule(gsl_integration_fixed_laguerre, order, 0.0, 1.0, alpha);
}

Eigen::MatrixXd quad_matrix(double lambda_bra, int mu_max, double lambda_ket, int nu_max,
                            RadialOperator op, double scale, int order) {
    const Setup s = setup_for(lambda_bra, lambda_ket, op, scale);
    const Eigen::MatrixXd lo = quad_matrix_at(lambda_bra, mu_max, lambda_ket, nu_max, s, order);
    const Eigen::MatrixXd hi =
        quad_matrix_at(lambda_bra, mu_max, lambda_ket, nu_max, s, 2 * order);
    for (int mu = 0; mu <= mu_max; ++mu) {
        for (int nu = 0; nu <= nu_max; ++nu) {
            const double diff = std::abs(lo(mu, nu) - hi(mu, nu));
            if (diff > 1e-10 * std::max(1.0, std::abs(hi(mu, nu)))) {
                throw ConvergenceError("quadrature order " + std::to_string(order) +
                                       " insufficient at (" + std::to_string(mu) + "," +
                                       std::to_string(nu) + ")");
            }
        }
    }
    return hi;
}

double quad_me(double lambda_bra, int mu, double lambda_ket, int nu, RadialOperator op,
               double scale, int order) {
    if (mu < 0 || nu < 0) throw DomainError("radial index must be non-negative");
    return quad_matrix(lambda_bra, mu, lambda_ket, nu, op, scale, order)(mu, nu);
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix below x.
int sturm_count(const std::vector<double>& diag, double off, double x) {
    int count = 0;
    double d = 1.0;
    for (size_t i = 0; i < diag.size(); ++i) {
        d = (diag[i] - x) - (i == 0 ? 0.0 : off * off / d);
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::vector<double> fd_radial_eigen_raw(const std::function<double(double)>& potential, double c,
                                        int k, const RadialGrid& grid) {
    const int n = static_cast<int>(std::lround((grid.r_max - grid.r_min) / grid.h));
    if (n < k + 2) throw DomainError("finite-difference grid too coarse");
    const double h = (grid.r_max - grid.r_min) / n;
    std::vector<double> diag(n - 1);
    const double off = -0.5 / (h * h);
    double lo = HUGE_VAL;
    double hi = -HUGE_VAL;
    for (int i = 1; i < n; ++i) {
        const double r = grid.r_min + i * h;
        diag[i - 1] = 1.0 / (h * h) + c / (r * r) + potential(r);
        lo = std::min(lo, diag[i - 1] - 2.0 * std::abs(off));
        hi = std::max(hi, diag[i - 1] + 2.0 * std::abs(off));
    }
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double a = lo;
        double b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            if (sturm_count(diag, off, m) > j) {
                b = m;
            } else {
                a = m;
            }
        }
        out[j] = 0.5 * (a + b);
    }
    return out;
}

namespace {

// ∫ sqrt(2(W − E)) dr from the outer turning point to r_max.
double decay_exponent(const std::function<double(double)>& w, double energy, double r_max) {
    const int steps = 4000;
    const double dr = r_max / steps;
    double s = 0.0;
    for (int i = steps; i >= 1; --i) {
        const double r = (i - 0.5) * dr;
        const double excess = w(r) - energy;
        if (excess <= 0.0) break;
        s += std::sqrt(2.0 * excess) * dr;
    }
    return s;
}

}  // namespace

FdResult fd_radial_eigen(const std::function<double(double)>& potential, double c, int k,
                         const FdOptions& options) {
    if (k < 1) throw DomainError("fd_radial_eigen needs k >= 1");
    auto w = [&](double r) { return c / (r * r) + potential(r); };
    double r_max = options.r_max;
    if (r_max <= 0.0) {
        r_max = 2.0;
        for (int attempt = 0; attempt < 60; ++attempt) {
            const auto coarse =
                fd_radial_eigen_raw(potential, c, k, {0.0, r_max, r_max / 400.0});
            const double e = coarse.back() + 0.1 * std::abs(coarse.back()) + 1.0;
            if (decay_exponent(w, e, r_max) > 36.0) break;
            r_max *= 1.25;
        }
    }
    const double h = r_max / options.intervals;
    const auto e1 = fd_radial_eigen_raw(potential, c, k, {0.0, r_max, h});
    const auto e2 = fd_radial_eigen_raw(potential, c, k, {0.0, r_max, h / 2});
    const auto e3 = fd_radial_eigen_raw(potential, c, k, {0.0, r_max, h / 4});

    FdResult result;
    result.grid = {0.0, r_max, h / 4};
    result.converged = true;
    for (int j = 0; j < k; ++j) {
        const double r1 = (4.0 * e2[j] - e1[j]) / 3.0;
        const double r2 = (4.0 * e3[j] - e2[j]) / 3.0;
        const double rr = (16.0 * r2 - r1) / 15.0;
        result.eigenvalues.push_back(rr);
        const double err = std::abs(rr - r2);
        result.error_estimates.push_back(err);
        if (err > options.tolerance * std::max(1.0, std::abs(rr))) result.converged = false;
    }
    result.convergence_order = std::log2(std::abs(e1[0] - e2[0]) / std::abs(e2[0] - e3[0]));
    return result;
}

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
    if (std::abs(m) > l) return 0.0;
    const double p = gsl_sf_legendre_sphPlm(l, std::abs(m), std::cos(theta));
    const std::complex<double> y = p * std::exp(std::complex<double>(0.0, std::abs(m) * phi));
    if (m >= 0) return y;
    return ((m % 2 == 0) ? 1.0 : -1.0) * std::conj(y);
}

std::complex<double> angular_quad_me(int l2, int m2, int l1, int m1,
                                     const std::function<std::complex<double>(double, double)>& f,
                                     int n_theta, int n_phi) {
    const QuadratureRule rule = build_rule(gsl_integration_fixed_legendre, n_theta, -1.0, 1.0, 0.0);
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    std::complex<double> sum = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(rule.nodes[i]);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = j * dphi;
            sum += rule.weights[i] * dphi * std::conj(spherical_harmonic(l2, m2, theta, phi)) *
                   f(theta, phi) * spherical_harmonic(l1, m1, theta, phi);
        }
    }
    return sum;
}

}  // namespace polyham::oracle
