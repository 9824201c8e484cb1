#include "polyham/check.hpp"

#include "polyham/combined.hpp"
#include "polyham/oracle.hpp"
#include "polyham/orbital.hpp"

#include <cmath>
#include <sstream>

namespace polyham::check {

using oracle::RadialOperator;
using radial::Matrix;
using radial::RadialBasis;
using radial::Shift;

RadialOps RadialOps::analytic() {
    return {radial::me_r2, radial::me_inv_r2, radial::me_d2dr2,
            radial::me_r,  radial::me_inv_r,  radial::me_ddr};
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// Relative error for entries above 1e-6, absolute on the matrix scale below.
Item against_oracle(const std::string& name, const Matrix& analytic, const Matrix& quad, double tol) {
    const double floor = 1e-11 * std::max(1.0, quad.cwiseAbs().maxCoeff());
    double worst = 0.0;
    bool ok = analytic.rows() == quad.rows() && analytic.cols() == quad.cols();
    if (ok) {
        for (int i = 0; i < quad.rows(); ++i) {
            for (int j = 0; j < quad.cols(); ++j) {
                const double q = quad(i, j);
                const double err = std::abs(analytic(i, j) - q);
                if (std::abs(q) > 1e-6) {
                    worst = std::max(worst, err / std::abs(q));
                    ok = ok && err <= tol * std::abs(q);
                } else {
                    ok = ok && err <= floor;
                }
            }
        }
    }
    return {name, ok, worst, tol};
}

Item bounded(const std::string& name, double worst, double tol) { return {name, worst <= tol, worst, tol}; }

}  // namespace

std::vector<Item> run_battery(const Options& options, const RadialOps& ops) {
    std::vector<Item> items;
    const int n = options.n;
    const double tol = options.tolerance;

    for (double lambda : options.lambdas) {
        const std::string at = " lambda=" + fmt(lambda);
        const RadialBasis b(lambda, 1.0, n);

        const Matrix s = oracle::quad_matrix(lambda, n, lambda, n, RadialOperator::identity());
        items.push_back(bounded("orthonormality" + at, (s - Matrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 1e-10));

        items.push_back(against_oracle("me_r2" + at, ops.r2(b).entries,
                                       oracle::quad_matrix(lambda, n, lambda, n, RadialOperator::r_power(2)), tol));
        items.push_back(against_oracle("me_inv_r2" + at, ops.inv_r2(b).entries,
                                       oracle::quad_matrix(lambda, n, lambda, n, RadialOperator::inv_r2()), tol));
        items.push_back(against_oracle("me_d2dr2" + at, ops.d2dr2(b).entries,
                                       oracle::quad_matrix(lambda, n, lambda, n, RadialOperator::d2dr2()), tol));
        for (Shift sh : {Shift::raise, Shift::lower}) {
            const double target = lambda + (sh == Shift::raise ? 1.0 : -1.0);
            const std::string dir = sh == Shift::raise ? " raise" : " lower";
            items.push_back(against_oracle("me_r" + dir + at, ops.r(b, sh).entries,
                                           oracle::quad_matrix(target, n, lambda, n, RadialOperator::r_power(1)), tol));
            items.push_back(against_oracle("me_inv_r" + dir + at, ops.inv_r(b, sh).entries,
                                           oracle::quad_matrix(target, n, lambda, n, RadialOperator::r_power(-1)), tol));
            items.push_back(against_oracle("me_ddr" + dir + at, ops.ddr(b, sh).entries,
                                           oracle::quad_matrix(target, n, lambda, n, RadialOperator::ddr()), tol));
        }

        // (λ+2ν) f_{μν} + √((λ+ν−1)ν) f_{μ,ν−1} + √((λ+ν)(ν+1)) f_{μ,ν+1} = δ_{μν}
        const Matrix f = ops.inv_r2(RadialBasis(lambda, 1.0, n + 1)).entries;
        double rec = 0.0;
        for (int mu = 0; mu <= n; ++mu) {
            for (int nu = 1; nu <= n; ++nu) {
                const double lhs = (lambda + 2 * nu) * f(mu, nu) +
                                   std::sqrt((lambda + nu - 1) * nu) * f(mu, nu - 1) +
                                   std::sqrt((lambda + nu) * (nu + 1)) * f(mu, nu + 1);
                rec = std::max(rec, std::abs(lhs - (mu == nu ? 1.0 : 0.0)));
            }
        }
        items.push_back(bounded("inverse-square recursion" + at, rec, 1e-12));

        const auto g = radial::su11_generators(b);
        const Matrix one = Matrix::Identity(n + 1, n + 1);
        const Matrix& s0 = g.s_zero.entries;
        const Matrix cas = s0 * (s0 - one) - g.s_plus.entries * g.s_minus.entries;
        items.push_back(bounded("Casimir" + at, (cas - lambda * (lambda - 2) / 4 * one).cwiseAbs().maxCoeff(),
                                1e-11 * std::max(1.0, lambda * lambda)));

        const Matrix rr = ops.r(b.with_lambda(lambda + 1), Shift::lower).entries * ops.r(b, Shift::raise).entries;
        items.push_back(bounded("r raise then lower" + at,
                                (rr - ops.r2(b).entries).topLeftCorner(n, n).cwiseAbs().maxCoeff(), 1e-12 * (lambda + 2 * n)));
        const Matrix herm = ops.r(b.with_lambda(lambda + 1), Shift::lower).entries.transpose() - ops.r(b, Shift::raise).entries;
        items.push_back(bounded("r Hermiticity" + at, herm.cwiseAbs().maxCoeff(), 1e-14 * (lambda + 2 * n)));
        const Matrix anti = ops.ddr(b.with_lambda(lambda + 1), Shift::lower).entries.transpose() + ops.ddr(b, Shift::raise).entries;
        items.push_back(bounded("ddr anti-Hermiticity" + at, anti.cwiseAbs().maxCoeff(), 1e-12 * (lambda + 2 * n)));
    }

    // the 57/58 pairing used for the collective model
    {
        const auto so5 = orbital::PhaseConvention::so5_unit();
        double worst = 0.0;
        double worst_xc = 0.0;
        const int m = std::min(n, 10);
        const Matrix x = oracle::quad_matrix(58.0, m, 57.0, m, RadialOperator::r_power(1));
        const Matrix inv = oracle::quad_matrix(58.0, m, 57.0, m, RadialOperator::r_power(-1));
        const Matrix ddr = oracle::quad_matrix(58.0, m, 57.0, m, RadialOperator::ddr());
        for (int v = 0; v <= 6; v += 2) {
            const double X = -(v + 2.5 - 0.5);
            for (int mu = 0; mu <= m; ++mu) {
                for (int nu = 0; nu <= m; ++nu) {
                    const combined::RadialState ket{RadialBasis(57.0, 1.0, 0), nu, v};
                    const combined::RadialState bra{RadialBasis(58.0, 1.0, 0), mu, v + 1};
                    const double q = orbital::reduced_me_Q(5, v + 1, v, so5);
                    const double xe = combined::reduced_me_x(5, bra, ket, so5).total;
                    const double c = combined::reduced_me_c(5, bra, ket, so5);
                    const double cd = combined::reduced_me_cdag(5, bra, ket, so5);
                    const double ref_x = x(mu, nu) * q;
                    const double ref_c = (ddr(mu, nu) + X * inv(mu, nu) + x(mu, nu)) * q / std::sqrt(2.0);
                    worst = std::max(worst, std::abs(xe - ref_x) / std::max(1.0, std::abs(ref_x)));
                    worst = std::max(worst, std::abs(c - ref_c) / std::max(1.0, std::abs(ref_c)));
                    worst_xc = std::max(worst_xc, std::abs(xe - (c + cd) / std::sqrt(2.0)));
                }
            }
        }
        items.push_back(bounded("pairing 57/58 against quadrature", worst, tol));
        items.push_back(bounded("pairing 57/58 x = (c+ + c)/sqrt2", worst_xc, 1e-12));
    }

    // orbital identities
    {
        double sym = 0.0;
        double contraction = 0.0;
        for (int N : {3, 5}) {
            const auto ph = N == 3 ? orbital::PhaseConvention::so3_standard() : orbital::PhaseConvention::so5_unit();
            for (int v = 1; v <= 8; ++v) {
                const auto s = orbital::reduced_me_symmetry_check(N, v - 1, v, ph);
                sym = std::max(sym, std::abs(s.lhs * s.lhs - s.rhs * s.rhs));
            }
            for (int v = 0; v <= 8; ++v) {
                double sum = 0.0;
                for (int w : {v - 1, v + 1}) {
                    if (w < 0) continue;
                    sum += orbital::scalar_contraction_factor(N, v, w, ph) *
                           orbital::reduced_me_Q(N, v, w, ph) * orbital::reduced_me_Q(N, w, v, ph);
                }
                contraction = std::max(contraction, std::abs(sum - 1.0));
            }
        }
        items.push_back(bounded("reduced Q symmetry (squared)", sym, 1e-12));
        items.push_back(bounded("Q.Q = 1", contraction, 1e-12));
        double trace = 0.0;
        for (int l = 0; l <= 6; ++l) {
            double t = 0.0;
            for (int mm = -l; mm <= l; ++mm) t += orbital::me_crystal_field(l, l, mm);
            trace = std::max(trace, std::abs(t));
        }
        items.push_back(bounded("crystal-field multiplet trace", trace, 1e-12));
    }
    return items;
}

}  // namespace polyham::check
