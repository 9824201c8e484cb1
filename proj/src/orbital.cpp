#include "polyham/orbital.hpp"

#include "polyham/error.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace polyham::orbital {

PhaseConvention::PhaseConvention(std::string name, std::function<double(int)> angle)
    : name_(std::move(name)), angle_(std::move(angle)) {}

PhaseConvention PhaseConvention::so3_standard() {
    return {"so3-standard", [](int v) { return std::numbers::pi * v; }};
}

PhaseConvention PhaseConvention::so5_unit() {
    return {"so5-unit", [](int) { return 0.0; }};
}

double PhaseConvention::relative(int a, int b) const {
    const double d = angle(a) - angle(b);
    if (std::abs(std::sin(d)) > 1e-12) {
        throw DomainError("phase convention " + name_ + " gives a complex relative phase");
    }
    return std::cos(d) > 0.0 ? 1.0 : -1.0;
}

long long dim_son(int N, int v) {
    if (N < 3 || v < 0) throw DomainError("dim_son requires N >= 3 and v >= 0");
    // (2v+N−2) C(v+N−3, N−3) / (N−2)
    long long c = 1;
    const int n = v + N - 3;
    for (int i = 0; i < N - 3; ++i) c = c * (n - i) / (i + 1);
    return (2LL * v + N - 2) * c / (N - 2);
}

double reduced_me_Q(int N, int v_out, int v_in, const PhaseConvention& phases) {
    if (v_in < 0 || v_out < 0) return 0.0;
    const double v = v_in;
    if (v_out == v_in + 1) return std::sqrt((v + 1.0) / (2.0 * v + N));
    if (v_out == v_in - 1) {
        const double ratio = static_cast<double>(dim_son(N, v_in)) / dim_son(N, v_in - 1);
        return phases.relative(v_in, v_in - 1) * std::sqrt(ratio * v / (2.0 * v + N - 2.0));
    }
    return 0.0;
}

SymmetrySides reduced_me_symmetry_check(int N, int v3, int v1, const PhaseConvention& phases) {
    const double lhs = reduced_me_Q(N, v3, v1, phases);
    const double rhs = phases.relative(v1, v3) *
                       std::sqrt(static_cast<double>(dim_son(N, v1)) / dim_son(N, v3)) *
                       reduced_me_Q(N, v1, v3, phases);
    return {lhs, rhs};
}

double scalar_contraction_factor(int N, int v, int v_mid, const PhaseConvention& phases) {
    return phases.relative(v, v_mid) *
           std::sqrt(static_cast<double>(dim_son(N, v_mid)) / dim_son(N, v));
}

namespace {

double lf(int n) { return std::lgamma(n + 1.0); }

bool triangle(int a, int b, int c) { return c >= std::abs(a - b) && c <= a + b; }

// log of the triangle coefficient Δ(abc)
double log_delta(int a, int b, int c) {
    return lf(a + b - c) + lf(a - b + c) + lf(-a + b + c) - lf(a + b + c + 1);
}

}  // namespace

double so3_cg(int l1, int m1, int l2, int m2, int L, int M) {
    if (m1 + m2 != M || !triangle(l1, l2, L)) return 0.0;
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(M) > L) return 0.0;
    const double pre = 0.5 * (std::log(2.0 * L + 1.0) + log_delta(l1, l2, L) + lf(l1 + m1) +
                              lf(l1 - m1) + lf(l2 + m2) + lf(l2 - m2) + lf(L + M) + lf(L - M));
    const int kmin = std::max({0, l2 - L - m1, l1 - L + m2});
    const int kmax = std::min({l1 + l2 - L, l1 - m1, l2 + m2});
    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double den = lf(k) + lf(l1 + l2 - L - k) + lf(l1 - m1 - k) + lf(l2 + m2 - k) +
                           lf(L - l2 + m1 + k) + lf(L - l1 - m2 + k);
        sum += ((k % 2) ? -1.0 : 1.0) * std::exp(pre - den);
    }
    return sum;
}

double wigner_6j(int j1, int j2, int j3, int j4, int j5, int j6) {
    if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
        !triangle(j4, j5, j3)) {
        return 0.0;
    }
    const double pre = 0.5 * (log_delta(j1, j2, j3) + log_delta(j1, j5, j6) +
                              log_delta(j4, j2, j6) + log_delta(j4, j5, j3));
    const int tmin = std::max({j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3});
    const int tmax = std::min({j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4});
    double sum = 0.0;
    for (int t = tmin; t <= tmax; ++t) {
        const double den = lf(t - j1 - j2 - j3) + lf(t - j1 - j5 - j6) + lf(t - j4 - j2 - j6) +
                           lf(t - j4 - j5 - j3) + lf(j1 + j2 + j4 + j5 - t) +
                           lf(j2 + j3 + j5 + j6 - t) + lf(j3 + j1 + j6 + j4 - t);
        sum += ((t % 2) ? -1.0 : 1.0) * std::exp(pre + lf(t + 1) - den);
    }
    return sum;
}

double racah_w(int a, int b, int c, int d, int e, int f) {
    return (((a + b + c + d) % 2) ? -1.0 : 1.0) * wigner_6j(a, b, e, d, c, f);
}

double recouple_product(int j_out, int j_in, int k1, int k2, int k,
                        const std::function<double(int, int)>& a,
                        const std::function<double(int, int)>& b,
                        const std::vector<int>& intermediates) {
    double sum = 0.0;
    for (int jm : intermediates) {
        if (jm < 0) continue;
        const double w = racah_w(j_in, j_out, k2, k1, k, jm);
        if (w == 0.0) continue;
        sum += std::sqrt((2.0 * k + 1.0) * (2.0 * jm + 1.0)) * w * a(j_out, jm) * b(jm, j_in);
    }
    return (((k1 + k2 + k) % 2) ? -1.0 : 1.0) * sum;
}

double reduced_me_QQ2(int l2, int l1) {
    const auto phases = PhaseConvention::so3_standard();
    auto q = [&](int out, int in) { return reduced_me_Q(3, out, in, phases); };
    return recouple_product(l2, l1, 1, 1, 2, q, q, {l1 - 1, l1 + 1});
}

double me_crystal_field(int l2, int l1, int m) {
    if (std::abs(m) > l1 || std::abs(m) > l2) return 0.0;
    return std::sqrt(6.0) * so3_cg(l1, m, 2, 0, l2, m) * reduced_me_QQ2(l2, l1);
}

std::vector<SO3Content> so5_so3_branching(int v) {
    std::vector<SO3Content> out;
    if (v < 0) return out;
    std::vector<int> seen(2 * v + 1, 0);
    for (int triplets = 0; 3 * triplets <= v; ++triplets) {
        const int tau = v - 3 * triplets;
        for (int L = tau; L <= 2 * tau; ++L) {
            if (L == 2 * tau - 1) continue;
            out.push_back({++seen[L], L});
        }
    }
    return out;
}

double so3_reduced_Q(const CGTable& table, const SO5Label& out, const SO5Label& in,
                     const PhaseConvention& phases) {
    const double so5 = reduced_me_Q(5, out.v, in.v, phases);
    if (so5 == 0.0 || !triangle(in.L, 2, out.L)) return 0.0;
    return table.at({in, {1, 1, 2}, out}) * so5;
}

double triple_Q_me(const CGTable& table, const SO5Label& bra, const SO5Label& ket,
                   const PhaseConvention& phases) {
    if ((bra.v - ket.v) % 2 == 0 || bra.L != ket.L) return 0.0;
    if (std::abs(bra.v - ket.v) > 3) return 0.0;
    const int L = ket.L;
    double total = 0.0;
    for (int v1 : {ket.v - 1, ket.v + 1}) {
        for (const auto& c1 : so5_so3_branching(v1)) {
            const SO5Label s1{v1, c1.alpha, c1.L};
            if (!triangle(L, 2, s1.L)) continue;
            const double q1 = so3_reduced_Q(table, s1, ket, phases);
            // ⟨bra‖[Q ⊗ Q]_2‖s1⟩
            double x = 0.0;
            for (int v2 : {v1 - 1, v1 + 1}) {
                if (std::abs(v2 - bra.v) != 1) continue;
                for (const auto& c2 : so5_so3_branching(v2)) {
                    const SO5Label s2{v2, c2.alpha, c2.L};
                    const double w = racah_w(s1.L, L, 2, 2, 2, s2.L);
                    if (w == 0.0) continue;
                    x += std::sqrt(5.0 * (2.0 * s2.L + 1.0)) * w *
                         so3_reduced_Q(table, bra, s2, phases) *
                         so3_reduced_Q(table, s2, s1, phases);
                }
            }
            total += std::sqrt(2.0 * s1.L + 1.0) * racah_w(L, L, 2, 2, 0, s1.L) * x * q1;
        }
    }
    return total;
}

}  // namespace polyham::orbital
