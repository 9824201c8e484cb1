#include <doctest.h>

#include "polyham/error.hpp"
#include "polyham/oracle.hpp"
#include "polyham/orbital.hpp"
#include "support/so5_fixture.hpp"

#include <cmath>
#include <sstream>

using namespace polyham;
using namespace polyham::orbital;

namespace {

const PhaseConvention so3 = PhaseConvention::so3_standard();
const PhaseConvention so5 = PhaseConvention::so5_unit();

// Brute-force recoupling: ⟨l2 m2|[A ⊗ B]_{kq}|l1 m1⟩ from magnetic sums, then reduced.
double brute_w_check(int a, int b, int c, int d, int e, int f) {
    // Σ over projections of four CG coefficients reproduces √((2e+1)(2f+1)) W(abcd;ef)
    // for the recoupling ((a b) e, d) c ↔ (a, (b d) f) c.
    double sum = 0.0;
    const int mc = 0;
    for (int ma = -a; ma <= a; ++ma) {
        for (int mb = -b; mb <= b; ++mb) {
            const int md = mc - ma - mb;
            if (std::abs(md) > d) continue;
            sum += so3_cg(a, ma, b, mb, e, ma + mb) * so3_cg(e, ma + mb, d, md, c, mc) *
                   so3_cg(b, mb, d, md, f, mb + md) * so3_cg(a, ma, f, mb + md, c, mc);
        }
    }
    return sum / std::sqrt((2.0 * e + 1) * (2.0 * f + 1));
}

}  // namespace

TEST_CASE("dimensions") {
    CHECK(dim_son(3, 2) == 5);
    CHECK(dim_son(5, 2) == 14);
    for (int N : {3, 4, 5, 6, 7}) CHECK(dim_son(N, 0) == 1);
    for (int l = 0; l <= 20; ++l) CHECK(dim_son(3, l) == 2 * l + 1);
    for (int v = 0; v <= 20; ++v) CHECK(dim_son(5, v) == (v + 1) * (v + 2) * (2 * v + 3) / 6);
    CHECK(dim_son(4, 3) == 16);
}

TEST_CASE("reduced Q elements") {
    CHECK(reduced_me_Q(3, 1, 0, so3) == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(reduced_me_Q(5, 0, 1, so5) == doctest::Approx(1.0));
    CHECK(reduced_me_Q(3, 0, 1, so3) == doctest::Approx(-1.0));
    CHECK(reduced_me_Q(3, 2, 2, so3) == 0.0);
    CHECK(reduced_me_Q(5, 4, 1, so5) == 0.0);
    for (int v = 1; v <= 10; ++v) {
        CHECK(reduced_me_Q(5, v - 1, v, so5) == doctest::Approx(std::sqrt((v + 2.0) / (2 * v + 1))));
        CHECK(reduced_me_Q(3, v - 1, v, so3) == doctest::Approx(-std::sqrt(v / (2.0 * v - 1))));
    }
    const PhaseConvention complex_phase("quarter", [](int v) { return 0.5 * std::acos(-1.0) * v; });
    CHECK_THROWS_AS(reduced_me_Q(3, 0, 1, complex_phase), DomainError);
}

TEST_CASE("symmetry relation of reduced elements") {
    const auto s = reduced_me_symmetry_check(3, 1, 0, so3);
    CHECK(s.lhs == doctest::Approx(s.rhs));
    CHECK(dim_son(3, 1) * std::pow(reduced_me_Q(3, 1, 0, so3), 2) ==
          doctest::Approx(dim_son(3, 0) * std::pow(reduced_me_Q(3, 0, 1, so3), 2)));
    const auto same = reduced_me_symmetry_check(5, 2, 2, so5);
    CHECK(same.lhs == same.rhs);
    const auto t = reduced_me_symmetry_check(5, 2, 1, so5);
    CHECK(std::abs(t.lhs - t.rhs) < 1e-14);
    for (int N : {3, 5}) {
        const auto& ph = N == 3 ? so3 : so5;
        for (int v1 = 0; v1 <= 10; ++v1) {
            for (int v3 : {v1 - 1, v1 + 1}) {
                if (v3 < 0) continue;
                const auto r = reduced_me_symmetry_check(N, v3, v1, ph);
                CHECK(std::abs(r.lhs - r.rhs) < 1e-13);
                const double sq1 = dim_son(N, v3) * std::pow(reduced_me_Q(N, v3, v1, ph), 2);
                const double sq2 = dim_son(N, v1) * std::pow(reduced_me_Q(N, v1, v3, ph), 2);
                CHECK(std::abs(sq1 - sq2) < 1e-13 * std::max(1.0, sq1));
            }
        }
    }
}

TEST_CASE("Q.Q is the identity on the sphere") {
    for (int N : {3, 4, 5, 7}) {
        const auto& ph = N == 3 ? so3 : so5;
        for (int v = 0; v <= 8; ++v) {
            double sum = 0.0;
            for (int w : {v - 1, v + 1}) {
                if (w < 0) continue;
                sum += scalar_contraction_factor(N, v, w, ph) * reduced_me_Q(N, v, w, ph) *
                       reduced_me_Q(N, w, v, ph);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("Clebsch-Gordan coefficients") {
    CHECK(so3_cg(1, 0, 1, 0, 2, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(so3_cg(3, 2, 0, 0, 3, 2) == doctest::Approx(1.0));
    CHECK(so3_cg(1, 1, 1, -1, 0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(so3_cg(1, 0, 1, 0, 3, 0) == 0.0);
    for (int l1 = 0; l1 <= 6; ++l1) {
        for (int l2 = 0; l2 <= 6; ++l2) {
            for (int L = std::abs(l1 - l2); L <= l1 + l2; ++L) {
                for (int Lp = std::abs(l1 - l2); Lp <= l1 + l2; ++Lp) {
                    for (int M = -std::min(L, Lp); M <= std::min(L, Lp); ++M) {
                        double s = 0.0;
                        for (int m1 = -l1; m1 <= l1; ++m1) {
                            s += so3_cg(l1, m1, l2, M - m1, L, M) *
                                 so3_cg(l1, m1, l2, M - m1, Lp, M);
                        }
                        CHECK(std::abs(s - (L == Lp ? 1.0 : 0.0)) < 1e-13);
                    }
                }
            }
        }
    }
}

TEST_CASE("Racah W against magnetic sums") {
    CHECK(racah_w(1, 2, 1, 2, 1, 2) == doctest::Approx(brute_w_check(1, 2, 1, 2, 1, 2)));
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            for (int d = 0; d <= 2; ++d)
                for (int e = std::abs(a - b); e <= a + b; ++e)
                    for (int f = std::abs(b - d); f <= b + d; ++f)
                        for (int c = std::max(std::abs(e - d), std::abs(a - f));
                             c <= std::min(e + d, a + f); ++c) {
                            CHECK(std::abs(racah_w(a, b, c, d, e, f) -
                                           brute_w_check(a, b, c, d, e, f)) < 1e-13);
                        }
}

TEST_CASE("crystal-field elements") {
    CHECK(reduced_me_QQ2(1, 0) == 0.0);
    CHECK(reduced_me_QQ2(3, 0) == 0.0);
    CHECK(me_crystal_field(0, 0, 0) == doctest::Approx(0.0));
    CHECK(me_crystal_field(1, 1, 0) == doctest::Approx(0.8));
    CHECK(me_crystal_field(1, 1, 1) == doctest::Approx(-0.4));
    CHECK(me_crystal_field(1, 1, -1) == doctest::Approx(-0.4));
    CHECK(me_crystal_field(0, 2, 0) == doctest::Approx(2.0 / std::sqrt(5.0)));

    for (int l = 0; l <= 6; ++l) {
        double trace = 0.0;
        for (int m = -l; m <= l; ++m) trace += me_crystal_field(l, l, m);
        CHECK(std::abs(trace) < 1e-12);
    }

    auto f = [](double theta, double) { return std::complex<double>(3 * std::pow(std::cos(theta), 2) - 1); };
    for (int l1 = 0; l1 <= 4; ++l1) {
        for (int l2 : {l1 - 2, l1, l1 + 2}) {
            if (l2 < 0) continue;
            for (int m = -std::min(l1, l2); m <= std::min(l1, l2); ++m) {
                const auto q = oracle::angular_quad_me(l2, m, l1, m, f);
                CHECK(std::abs(me_crystal_field(l2, l1, m) - q.real()) < 1e-12);
            }
        }
    }
    // reduced (Q⊗Q)_2 between l=0 and l=2 against quadrature of the M = 0 component
    const auto q20 = oracle::angular_quad_me(2, 0, 0, 0, f);
    CHECK(reduced_me_QQ2(2, 0) * so3_cg(0, 0, 2, 0, 2, 0) ==
          doctest::Approx(q20.real() / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("angular oracle basics") {
    auto one = [](double, double) { return std::complex<double>(1.0); };
    CHECK(std::abs(oracle::angular_quad_me(2, 1, 2, 1, one) - 1.0) < 1e-12);
    CHECK(std::abs(oracle::angular_quad_me(2, 1, 2, -1, one)) < 1e-12);
    auto cos_t = [](double theta, double) { return std::complex<double>(std::cos(theta)); };
    const auto c = oracle::angular_quad_me(1, 0, 0, 0, cos_t);
    CHECK(c.real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    // ⟨1 0|Q_0|0 0⟩ = (00,10|10)⟨1‖Q‖0⟩
    CHECK(c.real() == doctest::Approx(so3_cg(0, 0, 1, 0, 1, 0) * reduced_me_Q(3, 1, 0, so3)));
    // the down branch carries the minus sign of the standard phases
    const auto d = oracle::angular_quad_me(0, 0, 1, 0, cos_t);
    CHECK(d.real() == doctest::Approx(so3_cg(1, 0, 1, 0, 0, 0) * reduced_me_Q(3, 0, 1, so3)));
    // Y_11 sign
    const auto y = oracle::spherical_harmonic(1, 1, 0.3, 0.0);
    CHECK(y.real() == doctest::Approx(-std::sqrt(3.0 / (8.0 * std::acos(-1.0))) * std::sin(0.3)));
}

TEST_CASE("Q reduced elements against N = 3 quadrature for all l") {
    for (int l = 0; l <= 5; ++l) {
        for (int lp : {l - 1, l + 1}) {
            if (lp < 0) continue;
            for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m) {
                const double cg = so3_cg(l, m, 1, 0, lp, m);
                if (std::abs(cg) < 1e-8) continue;
                const auto q = oracle::angular_quad_me(
                    lp, m, l, m, [](double t, double) { return std::complex<double>(std::cos(t)); });
                CHECK(q.real() / cg == doctest::Approx(reduced_me_Q(3, lp, l, so3)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("SO(5) to SO(3) branching") {
    auto ls = [](int v) {
        std::vector<int> out;
        for (const auto& c : so5_so3_branching(v)) out.push_back(c.L);
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(ls(0) == std::vector<int>{0});
    CHECK(ls(1) == std::vector<int>{2});
    CHECK(ls(2) == std::vector<int>{2, 4});
    CHECK(ls(3) == std::vector<int>{0, 3, 4, 6});
    CHECK(ls(4) == std::vector<int>{2, 4, 5, 6, 8});
    CHECK(ls(6) == std::vector<int>{0, 3, 4, 6, 6, 7, 8, 9, 10, 12});
    for (int v = 0; v <= 10; ++v) {
        long long d = 0;
        for (const auto& c : so5_so3_branching(v)) d += 2 * c.L + 1;
        CHECK(d == dim_son(5, v));
    }
}

TEST_CASE("CG table parsing") {
    std::istringstream in(
        "# comment\n"
        "1 1 2  1 1 2  2 1 4  0.5  # trailing\n"
        "\n"
        "0 1 0 1 1 2 1 1 2 1.0\n");
    const auto t = CGTable::parse(in);
    CHECK(t.size() == 2);
    CHECK(t.at({{1, 1, 2}, {1, 1, 2}, {2, 1, 4}}) == 0.5);
    CHECK_THROWS_AS(t.at({{1, 1, 2}, {1, 1, 2}, {2, 1, 2}}), MissingCoefficient);

    std::istringstream bad("1 1 2 1 1 2 2 1 4\n");
    CHECK_THROWS_AS(CGTable::parse(bad), ConfigError);
    std::istringstream dup("0 1 0 1 1 2 1 1 2 1\n0 1 0 1 1 2 1 1 2 1\n");
    CHECK_THROWS_AS(CGTable::parse(dup), ConfigError);
    std::istringstream junk("0 1 0 1 1 2 1 1 2 1.0x\n");
    CHECK_THROWS_AS(CGTable::parse(junk), ConfigError);

    // round trip is bit exact
    std::istringstream val("0 1 0 1 1 2 1 1 2 0.1000000000000000055511151231257827\n");
    const auto v = CGTable::parse(val);
    std::ostringstream out;
    v.write(out);
    std::istringstream back(out.str());
    CHECK(CGTable::parse(back).at({{0, 1, 0}, {1, 1, 2}, {1, 1, 2}}) == 0.1);
}

TEST_CASE("triple Q error paths") {
    const CGTable empty;
    CHECK_THROWS_AS(triple_Q_me(empty, {1, 1, 2}, {2, 1, 2}), MissingCoefficient);
    CHECK(triple_Q_me(empty, {1, 1, 2}, {0, 1, 0}) == 0.0);
    CHECK(triple_Q_me(empty, {2, 1, 2}, {0, 1, 0}) == 0.0);
}

TEST_CASE("SO(5) fixture: table structure and triple Q") {
    const auto harmonics = fixture::so5_harmonics(3);
    // q_m is a proper spherical tensor: reduced values agree across projections
    for (const auto& bra : harmonics) {
        for (const auto& ket : harmonics) {
            if (std::abs(bra.label.v - ket.label.v) != 1) continue;
            CHECK(fixture::so3_reduced_q(bra, ket).spread < 1e-12);
        }
    }
    const CGTable table = fixture::isoscalar_table(3);
    // isoscalar factors from complete blocks are normalised
    for (const auto& b : table.block_norms()) {
        if (b.v1 + 1 > 3 && b.coupled.v > b.v1) continue;
        CAPTURE(b.v1);
        CAPTURE(b.coupled.L);
        CHECK(b.sum_of_squares == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const auto& bra : harmonics) {
        for (const auto& ket : harmonics) {
            if (bra.label.v > 2 || ket.label.v > 2 || bra.label.L != ket.label.L) continue;
            const auto direct = fixture::direct_triple_q(bra, ket);
            const double value = triple_Q_me(table, bra.label, ket.label);
            CAPTURE(bra.label.v);
            CAPTURE(ket.label.v);
            CAPTURE(ket.label.L);
            for (double d : direct) CHECK(std::abs(value - d) < 1e-12);
        }
    }
    // nonzero ground-band coupling exists
    CHECK(std::abs(triple_Q_me(table, {1, 1, 2}, {2, 1, 2})) > 1e-3);
}
