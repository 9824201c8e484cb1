#include "polyham/solve.hpp"

#include "polyham/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace polyham::solve {

EigenPairs eigh(const Matrix& m, double tolerance) {
    if (m.rows() != m.cols()) throw DomainError("eigh needs a square matrix");
    if (m.size() == 0) return {};
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= tolerance * scale)) {
        std::ostringstream os;
        os << "eigh: matrix is not symmetric (max |M - M^T| = " << asym << ")";
        throw DomainError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigh: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

SpectrumResult solve_spectrum(const HamiltonianSpec& spec, const BasisSpec& basis,
                              const CGTable* table, int drift_levels) {
    SpectrumResult out;
    out.basis = basis.describe();
    out.nu_max = basis.nu_max();
    auto full = hamiltonian::assemble(spec, basis, table);
    std::optional<hamiltonian::AssembledMatrix> smaller;
    if (basis.nu_max() >= 10) smaller = hamiltonian::assemble(spec, basis.with_nu_max(basis.nu_max() - 10), table);
    for (std::size_t i = 0; i < full.blocks.size(); ++i) {
        BlockSpectrum bs;
        bs.pairs = eigh(full.blocks[i].matrix);
        if (smaller) {
            const Eigen::VectorXd e = eigh(smaller->blocks[i].matrix).values;
            const int k = std::min<int>({drift_levels, static_cast<int>(e.size()),
                                         static_cast<int>(bs.pairs.values.size())});
            double d = 0.0;
            for (int j = 0; j < k; ++j) d = std::max(d, std::abs(bs.pairs.values(j) - e(j)));
            bs.drift = d;
            for (int j = 0; j < std::min<int>(e.size(), bs.pairs.values.size()); ++j) {
                bs.level_drift.push_back(std::abs(bs.pairs.values(j) - e(j)));
            }
        }
        bs.block = std::move(full.blocks[i]);
        out.blocks.push_back(std::move(bs));
    }
    return out;
}

Matrix central_block(const HamiltonianSpec& spec, int v, double lambda, double scale, int nu_max) {
    const auto basis = BasisSpec::per_v(spec.dimension, std::vector<double>(v + 1, lambda),
                                        std::vector<double>(v + 1, scale), nu_max);
    return hamiltonian::build_central_force_block(spec, basis, v);
}

double ground_expectation(const HamiltonianSpec& spec, int v, double lambda, double scale) {
    return central_block(spec, v, lambda, scale, 0)(0, 0);
}

namespace {

struct Objective {
    const HamiltonianSpec* spec;
    int v;
    VariationalOptions options;
    int start = 0;
    int iteration = 0;
};

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

double objective(const gsl_vector* x, void* params) {
    const auto* o = static_cast<const Objective*>(params);
    const double la = gsl_vector_get(x, 0);
    const double lambda = gsl_vector_get(x, 1);
    const double la_c = clamp(la, std::log(o->options.scale.lo), std::log(o->options.scale.hi));
    const double lambda_c = clamp(lambda, o->options.lambda.lo, o->options.lambda.hi);
    const double outside = (la - la_c) * (la - la_c) + (lambda - lambda_c) * (lambda - lambda_c);
    const double e = ground_expectation(*o->spec, o->v, lambda_c, std::exp(la_c));
    return e + outside * 1e3 * (1.0 + std::abs(e));
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

VariationalResult variational_optimize(const HamiltonianSpec& spec, int v,
                                       const VariationalOptions& options) {
    if (!(options.scale.lo > 0.0) || !(options.scale.hi > options.scale.lo)) {
        throw ConfigError("variational scale range must be positive and non-empty");
    }
    if (!(options.lambda.lo > 0.0) || !(options.lambda.hi > options.lambda.lo)) {
        throw ConfigError("variational lambda range must be positive and non-empty");
    }
    if (options.grid < 1) throw ConfigError("variational grid must be at least 1");
    gsl_set_error_handler_off();

    const double la_lo = std::log(options.scale.lo);
    const double la_hi = std::log(options.scale.hi);
    Objective obj{&spec, v, options};
    gsl_multimin_function fn{&objective, 2, &obj};

    VariationalResult best;
    best.v = v;
    best.energy = HUGE_VAL;
    std::vector<TracePoint> trace;
    const int g = options.grid;
    int start = 0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j, ++start) {
            const double la0 = la_lo + (i + 0.5) * (la_hi - la_lo) / g;
            const double l0 = options.lambda.lo + (j + 0.5) * (options.lambda.hi - options.lambda.lo) / g;
            std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(2));
            std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(2));
            gsl_vector_set(x.get(), 0, la0);
            gsl_vector_set(x.get(), 1, l0);
            gsl_vector_set(step.get(), 0, (la_hi - la_lo) / (2.0 * g));
            gsl_vector_set(step.get(), 1, (options.lambda.hi - options.lambda.lo) / (2.0 * g));
            std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
                gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
            gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());
            bool converged = false;
            int it = 0;
            double last_f = HUGE_VAL;
            int stalled = 0;
            for (; it < options.max_iterations; ++it) {
                if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
                const double size = gsl_multimin_fminimizer_size(m.get());
                if (gsl_multimin_test_size(size, options.size_tolerance) == GSL_SUCCESS) {
                    converged = true;
                    break;
                }
                // the objective has reached its rounding floor before the simplex collapsed
                const double f = m->fval;
                stalled = f < last_f - 1e-14 * std::max(1.0, std::abs(f)) ? 0 : stalled + 1;
                last_f = std::min(last_f, f);
                if (stalled >= 100 && size < 1e-4) {
                    converged = true;
                    break;
                }
            }
            const gsl_vector* xm = gsl_multimin_fminimizer_x(m.get());
            const double a = std::exp(clamp(gsl_vector_get(xm, 0), la_lo, la_hi));
            const double lambda = clamp(gsl_vector_get(xm, 1), options.lambda.lo, options.lambda.hi);
            const double e = ground_expectation(spec, v, lambda, a);
            trace.push_back({start, it, a, lambda, e});
            if (e < best.energy) {
                best.energy = e;
                best.scale = a;
                best.lambda = lambda;
                best.converged = converged;
            }
        }
    }
    best.trace = std::move(trace);
    if (!best.converged) {
        std::ostringstream os;
        os.precision(10);
        os << "variational optimization for v = " << v << " did not converge; trace:";
        for (const auto& t : best.trace) {
            os << "\n  start " << t.start << " after " << t.iteration << " iterations: a = " << t.scale
               << ", lambda = " << t.lambda << ", E = " << t.energy;
        }
        throw ConvergenceError(os.str());
    }
    return best;
}

namespace {

struct ScaleObjective {
    const HamiltonianSpec* spec;
    int v;
    double lambda;
};

double scale_objective(double la, void* params) {
    const auto* o = static_cast<const ScaleObjective*>(params);
    return ground_expectation(*o->spec, o->v, o->lambda, std::exp(la));
}

}  // namespace

double optimal_scale(const HamiltonianSpec& spec, int v, double lambda, const Range& scale) {
    if (!(scale.lo > 0.0) || !(scale.hi > scale.lo)) throw ConfigError("bad scale range");
    gsl_set_error_handler_off();
    ScaleObjective o{&spec, v, lambda};
    const double lo = std::log(scale.lo);
    const double hi = std::log(scale.hi);
    const int n = 40;
    int best = 0;
    double best_e = HUGE_VAL;
    std::vector<double> e(n + 1);
    for (int i = 0; i <= n; ++i) {
        e[i] = scale_objective(lo + (hi - lo) * i / n, &o);
        if (e[i] < best_e) {
            best_e = e[i];
            best = i;
        }
    }
    if (best == 0 || best == n) return std::exp(lo + (hi - lo) * best / n);
    gsl_function f{&scale_objective, &o};
    std::unique_ptr<gsl_min_fminimizer, void (*)(gsl_min_fminimizer*)> m(
        gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent), &gsl_min_fminimizer_free);
    const double x_lo = lo + (hi - lo) * (best - 1) / n;
    const double x_hi = lo + (hi - lo) * (best + 1) / n;
    const double x0 = lo + (hi - lo) * best / n;
    if (gsl_min_fminimizer_set_with_values(m.get(), &f, x0, e[best], x_lo, e[best - 1], x_hi,
                                           e[best + 1]) != GSL_SUCCESS) {
        return std::exp(x0);
    }
    for (int it = 0; it < 200; ++it) {
        if (gsl_min_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
        const double a = gsl_min_fminimizer_x_lower(m.get());
        const double b = gsl_min_fminimizer_x_upper(m.get());
        if (gsl_min_test_interval(a, b, 1e-12, 0.0) == GSL_SUCCESS) break;
    }
    return std::exp(gsl_min_fminimizer_x_minimum(m.get()));
}

Selection select_basis(const HamiltonianSpec& spec, int v, int n, int n_basis,
                       std::vector<double> candidates, const Range& scale) {
    if (candidates.empty()) throw ConfigError("select_basis needs at least one candidate");
    if (n < 1 || n_basis < n) throw ConfigError("select_basis needs 1 <= n <= n_basis");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    Selection out;
    out.energy = HUGE_VAL;
    for (double lambda : candidates) {
        const double a = optimal_scale(spec, v, lambda, scale);
        const Eigen::VectorXd e = eigh(central_block(spec, v, lambda, a, n_basis - 1)).values;
        const double en = e(n - 1);
        out.evaluated.push_back({lambda, a, en});
        if (en < out.energy - 1e-12 * std::max(1.0, std::abs(en))) {
            out.energy = en;
            out.lambda = lambda;
            out.scale = a;
        }
    }
    return out;
}

std::vector<ConvergenceRow> convergence_study(const HamiltonianSpec& spec, const BasisSpec& basis,
                                              int v, const std::vector<int>& schedule, int k) {
    std::vector<ConvergenceRow> rows;
    for (int nu_max : schedule) {
        const Matrix h = hamiltonian::build_central_force_block(spec, basis.with_nu_max(nu_max), v);
        const Eigen::VectorXd e = eigh(h).values;
        ConvergenceRow row{nu_max, e.head(std::min<int>(k, e.size())), std::nullopt};
        if (!rows.empty()) {
            const auto& prev = rows.back().eigenvalues;
            const int m = std::min<int>(prev.size(), row.eigenvalues.size());
            double d = 0.0;
            for (int j = 0; j < m; ++j) d = std::max(d, std::abs(row.eigenvalues(j) - prev(j)));
            row.drift = d;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<int> minimal_nu_max(const HamiltonianSpec& spec, const BasisSpec& basis, int v,
                                  const Eigen::VectorXd& reference, double tolerance, int lo,
                                  int hi) {
    auto ok = [&](int nu_max) {
        if (nu_max + 1 < reference.size()) return false;
        const Eigen::VectorXd e =
            eigh(hamiltonian::build_central_force_block(spec, basis.with_nu_max(nu_max), v)).values;
        for (int j = 0; j < reference.size(); ++j) {
            if (std::abs(e(j) - reference(j)) > tolerance * std::abs(reference(j))) return false;
        }
        return true;
    };
    // coarse pass, then a fine pass below the first success
    const int step = 8;
    int first = -1;
    for (int n = lo; n <= hi; n += step) {
        if (ok(n)) {
            first = n;
            break;
        }
    }
    if (first < 0) {
        if (hi > lo && ok(hi)) first = hi;
        else return std::nullopt;
    }
    for (int n = std::max(lo, first - step + 1); n < first; ++n) {
        if (ok(n)) return n;
    }
    return first;
}

}  // namespace polyham::solve
