#include "polyham/hamiltonian.hpp"

#include "polyham/error.hpp"
#include "polyham/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polyham::hamiltonian {

using radial::OperatorMatrix;
using radial::RadialBasis;
using radial::Shift;

bool RadialFactor::odd() const {
    switch (kind) {
        case Kind::ddr: return true;
        case Kind::power: return power % 2 != 0;
        default: return false;
    }
}

int RadialFactor::scale_power() const {
    switch (kind) {
        case Kind::laplacian:
        case Kind::d2dr2: return 2;
        case Kind::ddr: return 1;
        case Kind::power: return -power;
    }
    return 0;
}

std::string RadialFactor::to_string() const {
    switch (kind) {
        case Kind::laplacian: return "laplacian";
        case Kind::d2dr2: return "d2dr2";
        case Kind::ddr: return "ddr";
        case Kind::power: return "r^" + std::to_string(power);
    }
    return "?";
}

std::string to_string(OrbitalTensor t) {
    switch (t) {
        case OrbitalTensor::scalar: return "scalar";
        case OrbitalTensor::crystal_field: return "crystal_field";
        case OrbitalTensor::triple_q: return "triple_q";
    }
    return "?";
}

bool Term::radial_odd() const {
    int n = 0;
    for (const auto& f : radial) n += f.odd() ? 1 : 0;
    return n % 2 == 1;
}

void HamiltonianSpec::validate() const {
    if (dimension < 1) throw ConfigError("dimension must be positive");
    if (!(mass > 0.0)) throw ConfigError("mass must be positive");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Term& t = terms[i];
        const std::string where = "term " + std::to_string(i + 1);
        const bool orbital_odd = t.orbital == OrbitalTensor::triple_q;
        if (t.radial_odd() != orbital_odd) {
            throw ConfigError(where + " has odd net O(N) parity");
        }
        if (t.orbital == OrbitalTensor::crystal_field && dimension != 3) {
            throw ConfigError(where + ": crystal_field needs dimension 3");
        }
        if (t.orbital == OrbitalTensor::triple_q && dimension != 5) {
            throw ConfigError(where + ": triple_q needs dimension 5");
        }
        bool has_laplacian = false;
        bool has_odd = false;
        for (const auto& f : t.radial) {
            has_laplacian = has_laplacian || f.kind == RadialFactor::Kind::laplacian;
            has_odd = has_odd || f.odd();
        }
        if (has_laplacian && has_odd) {
            throw ConfigError(where + ": laplacian cannot be combined with odd radial factors");
        }
    }
    const bool cf = std::any_of(terms.begin(), terms.end(), [](const Term& t) {
        return t.orbital == OrbitalTensor::crystal_field;
    });
    const bool tq = std::any_of(terms.begin(), terms.end(), [](const Term& t) {
        return t.orbital == OrbitalTensor::triple_q;
    });
    if (cf && tq) throw ConfigError("crystal_field and triple_q terms cannot be mixed");
}

bool HamiltonianSpec::central() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.orbital == OrbitalTensor::scalar; });
}

bool HamiltonianSpec::couples_odd() const {
    return std::any_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.orbital == OrbitalTensor::triple_q; });
}

HamiltonianSpec rescale(const HamiltonianSpec& spec, double a) {
    if (!(a > 0.0)) throw DomainError("rescale requires a > 0");
    HamiltonianSpec out = spec;
    for (auto& t : out.terms) {
        int p = 0;
        for (const auto& f : t.radial) p += f.scale_power();
        t.coefficient *= std::pow(a, -p);
    }
    return out;
}

// BasisSpec

BasisSpec BasisSpec::harmonic(int N, double scale, int nu_max, int v_max) {
    if (!(scale > 0.0)) throw ConfigError("scale must be positive");
    if (nu_max < 0 || v_max < 0) throw ConfigError("nu_max and v_max must be non-negative");
    BasisSpec b;
    b.mode_ = Mode::harmonic;
    b.N_ = N;
    b.nu_max_ = nu_max;
    b.v_max_ = v_max;
    b.scales_ = {scale};
    return b;
}

BasisSpec BasisSpec::parity_pair(int N, double lambda_even, double lambda_odd, double scale,
                                 int nu_max, int v_max) {
    if (std::abs(std::abs(lambda_odd - lambda_even) - 1.0) > 1e-12) {
        throw PairingError("parity pair needs lambda_odd = lambda_even ± 1");
    }
    if (!(lambda_even > 0.0) || !(lambda_odd > 0.0)) throw ConfigError("lambda must be positive");
    BasisSpec b = harmonic(N, scale, nu_max, v_max);
    b.mode_ = Mode::parity_pair;
    b.lambdas_ = {lambda_even, lambda_odd};
    return b;
}

BasisSpec BasisSpec::per_v(int N, std::vector<double> lambdas, std::vector<double> scales,
                           int nu_max) {
    if (lambdas.empty() || lambdas.size() != scales.size()) {
        throw ConfigError("per-v basis needs one lambda and one scale for each v");
    }
    for (std::size_t v = 0; v < lambdas.size(); ++v) {
        if (!(lambdas[v] > 0.0) || !(scales[v] > 0.0)) {
            throw ConfigError("per-v basis: lambda and scale must be positive (v = " +
                              std::to_string(v) + ")");
        }
    }
    if (nu_max < 0) throw ConfigError("nu_max must be non-negative");
    BasisSpec b;
    b.mode_ = Mode::per_v;
    b.N_ = N;
    b.nu_max_ = nu_max;
    b.v_max_ = static_cast<int>(lambdas.size()) - 1;
    b.lambdas_ = std::move(lambdas);
    b.scales_ = std::move(scales);
    return b;
}

void BasisSpec::check_v(int v) const {
    if (v < 0 || v > v_max_) {
        throw DomainError("v = " + std::to_string(v) + " outside basis range 0.." +
                          std::to_string(v_max_));
    }
}

double BasisSpec::lambda(int v) const {
    check_v(v);
    switch (mode_) {
        case Mode::harmonic: return v + 0.5 * N_;
        case Mode::parity_pair: return lambdas_[v % 2];
        case Mode::per_v: return lambdas_[v];
    }
    return 0.0;
}

double BasisSpec::scale(int v) const {
    check_v(v);
    return mode_ == Mode::per_v ? scales_[v] : scales_[0];
}

RadialBasis BasisSpec::radial(int v) const { return RadialBasis(lambda(v), scale(v), nu_max_); }

bool BasisSpec::global_scale() const {
    return std::all_of(scales_.begin(), scales_.end(), [&](double s) { return s == scales_[0]; });
}

bool BasisSpec::adjacent() const {
    for (int v = 0; v < v_max_; ++v) {
        if (std::abs(std::abs(lambda(v + 1) - lambda(v)) - 1.0) > 1e-12) return false;
    }
    return true;
}

BasisSpec BasisSpec::with_nu_max(int nu_max) const {
    if (nu_max < 0) throw ConfigError("nu_max must be non-negative");
    BasisSpec b = *this;
    b.nu_max_ = nu_max;
    return b;
}

BasisSpec BasisSpec::with_v_max(int v_max) const {
    if (mode_ == Mode::per_v && v_max >= static_cast<int>(lambdas_.size())) {
        throw ConfigError("per-v basis defines lambda only up to v = " +
                          std::to_string(lambdas_.size() - 1));
    }
    if (v_max < 0) throw ConfigError("v_max must be non-negative");
    BasisSpec b = *this;
    b.v_max_ = v_max;
    return b;
}

std::string BasisSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (mode_) {
        case Mode::harmonic: os << "harmonic"; break;
        case Mode::parity_pair: os << "pair:" << lambdas_[0] << "," << lambdas_[1]; break;
        case Mode::per_v: os << "per-v"; break;
    }
    return os.str();
}

// Radial products

namespace {

Matrix crop(const Matrix& m, int rows, int cols) { return m.topLeftCorner(rows, cols); }

int margin_for(const std::vector<RadialFactor>& factors) {
    int m = 0;
    for (const auto& f : factors) {
        m += f.kind == RadialFactor::Kind::power ? std::abs(f.power) + 1 : 2;
    }
    return m;
}

OperatorMatrix single_factor(const RadialFactor& f, const RadialBasis& source, double target,
                             int N, int v) {
    const double d = target - source.lambda();
    switch (f.kind) {
        case RadialFactor::Kind::laplacian:
        case RadialFactor::Kind::d2dr2:
            if (std::abs(d) > 1e-12) {
                throw PairingError(f.to_string() + " does not change lambda");
            }
            return f.kind == RadialFactor::Kind::laplacian
                       ? radial::me_laplacian_radial(source, N, v)
                       : radial::me_d2dr2(source);
        case RadialFactor::Kind::ddr:
            if (std::abs(std::abs(d) - 1.0) > 1e-12) {
                throw PairingError("d/dr connects lambda and lambda ± 1");
            }
            return radial::me_ddr(source, d > 0 ? Shift::raise : Shift::lower);
        case RadialFactor::Kind::power:
            return radial::me_r_power(source, target, f.power);
    }
    throw Error("unknown radial factor");
}

}  // namespace

OperatorMatrix radial_term_matrix(const std::vector<RadialFactor>& factors,
                                  const RadialBasis& source, double target_lambda, int N, int v) {
    const int n = source.size();
    const RadialBasis target = source.with_lambda(target_lambda);
    if (factors.empty()) {
        if (std::abs(target_lambda - source.lambda()) > 1e-12) {
            throw PairingError("identity does not change lambda");
        }
        return {source, target, Matrix::Identity(n, n), true, 0};
    }
    if (factors.size() == 1) return single_factor(factors[0], source, target_lambda, N, v);

    int odd_left = 0;
    for (const auto& f : factors) odd_left += f.odd() ? 1 : 0;

    const RadialBasis ext = source.with_nu_max(source.nu_max() + margin_for(factors));
    Matrix acc = Matrix::Identity(ext.size(), ext.size());
    bool exact = true;
    int scale_power = 0;
    double lambda = source.lambda();
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        double next = lambda;
        if (it->odd()) {
            const double remaining = target_lambda - lambda;
            if (odd_left == 1) {
                next = target_lambda;
            } else {
                next = lambda + (remaining < -0.5 ? -1.0 : 1.0);
            }
            --odd_left;
        }
        const OperatorMatrix m = single_factor(*it, ext.with_lambda(lambda), next, N, v);
        acc = m.entries * acc;
        exact = exact && m.exact_within_truncation;
        scale_power += m.scale_power;
        lambda = next;
    }
    if (std::abs(lambda - target_lambda) > 1e-12) {
        throw PairingError("radial product cannot reach the target lambda");
    }
    return {source, target, crop(acc, n, n), exact, scale_power};
}

// Assembly

namespace {

void check_compatible(const HamiltonianSpec& spec, const BasisSpec& basis) {
    spec.validate();
    if (spec.dimension != basis.dimension()) {
        throw ConfigError("basis dimension " + std::to_string(basis.dimension()) +
                          " does not match the Hamiltonian dimension " +
                          std::to_string(spec.dimension));
    }
    if (!spec.central() && !basis.global_scale()) {
        throw ConfigError("coupled terms need a single global scale");
    }
    if (spec.couples_odd() && !basis.adjacent() && basis.mode() != BasisSpec::Mode::harmonic) {
        throw PairingError("terms coupling v to v ± 1 need |lambda_{v+1} − lambda_v| = 1");
    }
}

Matrix central_block(const HamiltonianSpec& spec, const BasisSpec& basis, int v) {
    const RadialBasis rb = basis.radial(v);
    Matrix h = Matrix::Zero(rb.size(), rb.size());
    for (const auto& t : spec.terms) {
        if (t.orbital != OrbitalTensor::scalar || t.coefficient == 0.0) continue;
        h += t.coefficient * radial_term_matrix(t.radial, rb, rb.lambda(), spec.dimension, v).entries;
    }
    return h;
}

// Radial part of a non-scalar term between the blocks of two SO(N) labels.
Matrix coupling_radial(const Term& t, const HamiltonianSpec& spec, const BasisSpec& basis,
                       int v_out, int v_in) {
    return radial_term_matrix(t.radial, basis.radial(v_in), basis.lambda(v_out), spec.dimension,
                              v_in)
        .entries;
}

AssembledMatrix crystal_field_blocks(const HamiltonianSpec& spec, const BasisSpec& basis) {
    const int n = basis.nu_max() + 1;
    const int lmax = basis.v_max();
    std::vector<Matrix> central(lmax + 1);
    for (int l = 0; l <= lmax; ++l) central[l] = central_block(spec, basis, l);

    // radial[term][l_out][l_in] for |Δl| ∈ {0, 2}
    std::map<std::tuple<std::size_t, int, int>, Matrix> radial_cache;
    auto radial_of = [&](std::size_t ti, int lo, int li) -> const Matrix& {
        auto key = std::make_tuple(ti, lo, li);
        auto it = radial_cache.find(key);
        if (it == radial_cache.end()) {
            it = radial_cache.emplace(key, coupling_radial(spec.terms[ti], spec, basis, lo, li)).first;
        }
        return it->second;
    };

    AssembledMatrix out;
    for (int m = -lmax; m <= lmax; ++m) {
        for (int parity : {1, -1}) {
            std::vector<int> ls;
            for (int l = std::abs(m); l <= lmax; ++l) {
                if ((l % 2 == 0 ? 1 : -1) == parity) ls.push_back(l);
            }
            if (ls.empty()) continue;
            Block b;
            b.label = "m=" + std::to_string(m) + ",parity=" + (parity > 0 ? "+" : "-");
            b.M = m;
            b.parity = parity;
            const int dim = static_cast<int>(ls.size()) * n;
            b.matrix = Matrix::Zero(dim, dim);
            for (std::size_t i = 0; i < ls.size(); ++i) {
                for (int nu = 0; nu < n; ++nu) b.states.push_back({nu, ls[i], 1, ls[i], m});
            }
            for (std::size_t i = 0; i < ls.size(); ++i) {
                b.matrix.block(i * n, i * n, n, n) = central[ls[i]];
                for (std::size_t j = 0; j < ls.size(); ++j) {
                    const int lo = ls[i];
                    const int li = ls[j];
                    if (std::abs(lo - li) > 2) continue;
                    const double ang = orbital::me_crystal_field(lo, li, m);
                    if (ang == 0.0) continue;
                    for (std::size_t ti = 0; ti < spec.terms.size(); ++ti) {
                        const Term& t = spec.terms[ti];
                        if (t.orbital != OrbitalTensor::crystal_field || t.coefficient == 0.0) continue;
                        b.matrix.block(i * n, j * n, n, n) += t.coefficient * ang * radial_of(ti, lo, li);
                    }
                }
            }
            out.blocks.push_back(std::move(b));
        }
    }
    return out;
}

AssembledMatrix triple_q_blocks(const HamiltonianSpec& spec, const BasisSpec& basis,
                                const CGTable& table) {
    const int n = basis.nu_max() + 1;
    const int vmax = basis.v_max();
    std::vector<Matrix> central(vmax + 1);
    for (int v = 0; v <= vmax; ++v) central[v] = central_block(spec, basis, v);

    std::map<std::tuple<std::size_t, int, int>, Matrix> radial_cache;
    auto radial_of = [&](std::size_t ti, int vo, int vi) -> const Matrix& {
        auto key = std::make_tuple(ti, vo, vi);
        auto it = radial_cache.find(key);
        if (it == radial_cache.end()) {
            it = radial_cache.emplace(key, coupling_radial(spec.terms[ti], spec, basis, vo, vi)).first;
        }
        return it->second;
    };

    AssembledMatrix out;
    for (int L = 0; L <= 2 * vmax; ++L) {
        std::vector<SO5Label> labels;
        for (int v = 0; v <= vmax; ++v) {
            for (const auto& c : orbital::so5_so3_branching(v)) {
                if (c.L == L) labels.push_back({v, c.alpha, L});
            }
        }
        if (labels.empty()) continue;
        Block b;
        b.label = "L=" + std::to_string(L);
        b.L = L;
        const int dim = static_cast<int>(labels.size()) * n;
        b.matrix = Matrix::Zero(dim, dim);
        for (const auto& lab : labels) {
            for (int nu = 0; nu < n; ++nu) b.states.push_back({nu, lab.v, lab.alpha, L, 0});
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            b.matrix.block(i * n, i * n, n, n) = central[labels[i].v];
            for (std::size_t j = 0; j < labels.size(); ++j) {
                const int dv = labels[i].v - labels[j].v;
                if (dv % 2 == 0 || std::abs(dv) > 3) continue;
                const double ang = orbital::triple_Q_me(table, labels[i], labels[j]);
                if (ang == 0.0) continue;
                for (std::size_t ti = 0; ti < spec.terms.size(); ++ti) {
                    const Term& t = spec.terms[ti];
                    if (t.orbital != OrbitalTensor::triple_q || t.coefficient == 0.0) continue;
                    b.matrix.block(i * n, j * n, n, n) +=
                        t.coefficient * ang * radial_of(ti, labels[i].v, labels[j].v);
                }
            }
        }
        out.blocks.push_back(std::move(b));
    }
    return out;
}

}  // namespace

Matrix build_central_force_block(const HamiltonianSpec& spec, const BasisSpec& basis, int v) {
    check_compatible(spec, basis);
    if (!spec.central()) throw ConfigError("central-force blocks need scalar terms only");
    return central_block(spec, basis, v);
}

AssembledMatrix build_coupled_matrix(const HamiltonianSpec& spec, const BasisSpec& basis,
                                     const CGTable* table) {
    check_compatible(spec, basis);
    if (spec.couples_odd()) {
        if (table == nullptr) throw ConfigError("triple_q terms need a CG table");
        return triple_q_blocks(spec, basis, *table);
    }
    if (spec.dimension == 3) return crystal_field_blocks(spec, basis);
    throw ConfigError("coupled assembly needs crystal_field (N = 3) or triple_q (N = 5) terms");
}

AssembledMatrix assemble(const HamiltonianSpec& spec, const BasisSpec& basis,
                         const CGTable* table) {
    if (!spec.central()) return build_coupled_matrix(spec, basis, table);
    check_compatible(spec, basis);
    AssembledMatrix out;
    for (int v = 0; v <= basis.v_max(); ++v) {
        Block b;
        b.label = "v=" + std::to_string(v);
        b.v = v;
        b.matrix = central_block(spec, basis, v);
        for (int nu = 0; nu <= basis.nu_max(); ++nu) b.states.push_back({nu, v, 1, v, 0});
        out.blocks.push_back(std::move(b));
    }
    return out;
}

}  // namespace polyham::hamiltonian
