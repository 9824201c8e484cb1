#include <doctest.h>

#include "polyham/error.hpp"
#include "polyham/solve.hpp"
#include "polyham/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace polyham;
using namespace polyham::solve;
using Eigen::MatrixXd;

namespace {

HamiltonianSpec spec_from(const std::string& text, const hamiltonian::Overrides& ov = {}) {
    std::istringstream in(text);
    return hamiltonian::parse_spec(in, "test", ov);
}

const char* ho3 = "dimension = 3\nterm -0.5 : laplacian\nterm 0.5 : r^2\n";
const char* collective =
    "dimension = 5\nmass = 100\nparam alpha = 1.5\n"
    "term -1/(2*M) : laplacian\nterm M/2*(1-2*alpha) : r^2\nterm M/2*alpha : r^4\n";

}  // namespace

TEST_CASE("eigh") {
    MatrixXd d = MatrixXd::Zero(3, 3);
    d.diagonal() << 3.0, -1.0, 2.0;
    const auto p = eigh(d);
    CHECK(p.values(0) == -1.0);
    CHECK(p.values(1) == 2.0);
    CHECK(p.values(2) == 3.0);

    MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    const auto q = eigh(m);
    CHECK(q.values(0) == doctest::Approx(1.0));
    CHECK(q.values(1) == doctest::Approx(3.0));

    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    MatrixXd r(60, 60);
    for (int i = 0; i < 60; ++i) for (int j = 0; j < 60; ++j) r(i, j) = g(rng);
    r = (r + r.transpose()).eval();
    const auto e = eigh(r);
    for (int k = 0; k < 60; ++k) {
        CHECK((r * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm() <= 1e-10 * r.norm());
        if (k > 0) CHECK(e.values(k) >= e.values(k - 1));
    }
    CHECK((e.vectors.transpose() * e.vectors - MatrixXd::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-10);

    m(0, 1) = 1.1;
    CHECK_THROWS_AS(eigh(m), DomainError);
}

TEST_CASE("oscillator spectrum and drift") {
    const auto spec = spec_from(ho3);
    const auto result = solve_spectrum(spec, BasisSpec::harmonic(3, 1.0, 20, 4));
    REQUIRE(result.blocks.size() == 5);
    for (const auto& b : result.blocks) {
        REQUIRE(b.drift.has_value());
        CHECK(*b.drift < 1e-13);
        for (int nu = 0; nu <= 20; ++nu) {
            CHECK(b.pairs.values(nu) == doctest::Approx(b.block.v + 2 * nu + 1.5).epsilon(1e-13));
        }
    }
    const auto rows = convergence_study(spec, BasisSpec::harmonic(3, 1.0, 0, 2), 2, {2, 5, 10}, 3);
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].drift.has_value());
    CHECK(*rows[1].drift < 1e-13);
    CHECK(*rows[2].drift < 1e-13);
}

TEST_CASE("variational optimum of the oscillator") {
    const auto spec = spec_from(ho3);
    VariationalOptions o;
    o.scale = {0.2, 5.0};
    o.lambda = {1.05, 20.0};
    for (int v = 0; v <= 3; ++v) {
        const auto r = variational_optimize(spec, v, o);
        CHECK(r.converged);
        CHECK(r.scale == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(r.lambda == doctest::Approx(v + 1.5).epsilon(1e-5));
        CHECK(r.energy == doctest::Approx(v + 1.5).epsilon(1e-10));
        CHECK(r.trace.size() == 25u);
    }
}

TEST_CASE("variational optimum of the Davidson oscillator") {
    // (λ − 3/2)(λ − 1/2) = v(v + 1) + r0⁴ with E0 = λ at a = 1
    for (double r04 : {2.0, 5.0}) {
        std::ostringstream text;
        text << "dimension = 3\nterm -0.5 : laplacian\nterm 0.5 : r^2\nterm " << 0.5 * r04 << " : 1/r^2\n";
        const auto spec = spec_from(text.str());
        VariationalOptions o;
        o.scale = {0.2, 5.0};
        o.lambda = {1.05, 20.0};
        for (int v : {0, 2}) {
            const auto r = variational_optimize(spec, v, o);
            const double lambda = 1.0 + std::sqrt((v + 0.5) * (v + 0.5) + r04);
            CHECK((r.lambda - 1.5) * (r.lambda - 0.5) == doctest::Approx(v * (v + 1) + r04).epsilon(1e-5));
            CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-5));
            CHECK(r.energy == doctest::Approx(lambda).epsilon(1e-10));
        }
    }
}

TEST_CASE("variational optimum beats its neighbours") {
    const auto spec = spec_from(collective);
    VariationalOptions o;
    o.scale = {1.0, 100.0};
    o.lambda = {1.05, 150.0};
    for (int v : {0, 3}) {
        const auto r = variational_optimize(spec, v, o);
        for (double da : {-1e-3, 0.0, 1e-3}) {
            for (double dl : {-1e-3, 0.0, 1e-3}) {
                const double e = ground_expectation(spec, v, r.lambda + dl, r.scale * (1 + da));
                CHECK(r.energy <= e + 1e-12 * std::abs(e));
            }
        }
        const double ref = eigh(central_block(spec, v, r.lambda, r.scale, 99)).values(0);
        CHECK(r.energy >= ref);
    }
}

TEST_CASE("variational errors") {
    const auto spec = spec_from(ho3);
    VariationalOptions o;
    o.scale = {2.0, 1.0};
    CHECK_THROWS_AS(variational_optimize(spec, 0, o), ConfigError);
    o = {};
    o.max_iterations = 1;
    CHECK_THROWS_AS(variational_optimize(spec, 0, o), ConvergenceError);
}

TEST_CASE("basis selection") {
    const auto spec = spec_from(collective);
    const Range scale{1.0, 100.0};
    std::vector<double> cands{70, 40, 57, 50, 60, 66};
    const auto s = select_basis(spec, 0, 3, 5, cands, scale);
    std::vector<double> rev(cands.rbegin(), cands.rend());
    const auto t = select_basis(spec, 0, 3, 5, rev, scale);
    CHECK(s.lambda == t.lambda);
    CHECK(s.scale == t.scale);
    CHECK(s.energy == t.energy);
    CHECK(std::is_sorted(s.evaluated.begin(), s.evaluated.end(),
                         [](const Candidate& a, const Candidate& b) { return a.lambda < b.lambda; }));
    for (const auto& c : s.evaluated) CHECK(s.energy <= c.energy);

    // n = 1 with one state is the variational problem restricted to the candidates
    const auto one = select_basis(spec, 0, 1, 1, cands, scale);
    double best = HUGE_VAL;
    for (double l : cands) best = std::min(best, ground_expectation(spec, 0, l, optimal_scale(spec, 0, l, scale)));
    CHECK(one.energy == best);

    // exact ties go to the smaller λ
    const auto ho = spec_from(ho3);
    const auto tie = select_basis(ho, 1, 1, 3, {2.5, 2.5, 7.0}, {0.5, 2.0});
    CHECK(tie.evaluated.size() == 2);

    CHECK_THROWS_AS(select_basis(spec, 0, 3, 5, {}, scale), ConfigError);
    CHECK_THROWS_AS(select_basis(spec, 0, 6, 5, cands, scale), ConfigError);
}

TEST_CASE("optimal scale of the oscillator") {
    const auto spec = spec_from(ho3);
    CHECK(optimal_scale(spec, 0, 1.5, {0.1, 10.0}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(optimal_scale(spec, 0, 1.5, {2.0, 10.0}) == doctest::Approx(2.0));
}

TEST_CASE("monotone convergence of the quartic oscillator") {
    const auto spec = spec_from("dimension = 3\nterm -0.5 : laplacian\nterm 1 : r^4\n");
    std::vector<int> schedule;
    for (int n = 4; n <= 60; n += 4) schedule.push_back(n);
    const auto rows = convergence_study(spec, BasisSpec::harmonic(3, 1.0, 0, 0), 0, schedule, 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            CHECK(rows[i].eigenvalues(k) <= rows[i - 1].eigenvalues(k) + 1e-12 * std::abs(rows[i - 1].eigenvalues(k)));
        }
    }
    const Eigen::VectorXd ref = rows.back().eigenvalues.head(2);
    const auto n = minimal_nu_max(spec, BasisSpec::harmonic(3, 1.0, 0, 0), 0, ref, 1e-6, 1, 60);
    REQUIRE(n.has_value());
    const auto at = eigh(hamiltonian::build_central_force_block(spec, BasisSpec::harmonic(3, 1.0, *n, 0), 0)).values;
    const auto below = eigh(hamiltonian::build_central_force_block(spec, BasisSpec::harmonic(3, 1.0, *n - 1, 0), 0)).values;
    CHECK(std::abs(at(1) - ref(1)) <= 1e-6 * ref(1));
    CHECK(std::max(std::abs(below(0) - ref(0)) / ref(0), std::abs(below(1) - ref(1)) / ref(1)) > 1e-6);
    CHECK_FALSE(minimal_nu_max(spec, BasisSpec::harmonic(3, 1.0, 0, 0), 0, ref, 1e-15, 1, 10).has_value());
}
