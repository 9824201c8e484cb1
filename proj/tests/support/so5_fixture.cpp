#include "so5_fixture.hpp"

#include "polyham/orbital.hpp"

#include <cmath>
#include <stdexcept>

namespace fixture {

using polyham::orbital::so3_cg;
using cd = std::complex<double>;

namespace {

Poly variable(int i) {
    Monomial m{};
    m[i] = 1;
    return {{m, 1.0}};
}

void add_into(Poly& acc, const Poly& p, cd scale) {
    for (const auto& [m, c] : p) acc[m] += scale * c;
}

double monomial_integral(const Monomial& a) {
    int total = 0;
    double log_num = 0.0;
    for (int e : a) {
        if (e % 2) return 0.0;
        total += e;
        log_num += std::lgamma((e + 1) / 2.0);
    }
    return 2.0 * std::exp(log_num - std::lgamma((total + 5) / 2.0));
}

Tensor q_tensor() {
    Tensor t;
    for (int m = -2; m <= 2; ++m) t.push_back(q_component(m));
    return t;
}

Tensor couple(const Tensor& a, int la, const Tensor& b, int lb, int L) {
    Tensor out(2 * L + 1);
    for (int M = -L; M <= L; ++M) {
        for (int ma = -la; ma <= la; ++ma) {
            const int mb = M - ma;
            if (std::abs(mb) > lb) continue;
            const double c = so3_cg(la, ma, lb, mb, L, M);
            if (c == 0.0) continue;
            add_into(out[M + L], multiply(a[ma + la], b[mb + lb]), c);
        }
    }
    return out;
}

bool normalise(Tensor& t) {
    const int L = (static_cast<int>(t.size()) - 1) / 2;
    const double n = std::sqrt(sphere_inner(t[2 * L], t[2 * L]).real());
    if (n < 1e-10) return false;
    for (auto& p : t)
        for (auto& [m, c] : p) c /= n;
    return true;
}

}  // namespace

Poly q_component(int m) {
    const double s = 1.0 / std::sqrt(2.0);
    const cd i(0.0, 1.0);
    Poly out;
    switch (m) {
        case 0: return variable(0);
        case 1: add_into(out, variable(1), -s); add_into(out, variable(2), -s * i); return out;
        case -1: add_into(out, variable(1), s); add_into(out, variable(2), -s * i); return out;
        case 2: add_into(out, variable(3), s); add_into(out, variable(4), s * i); return out;
        case -2: add_into(out, variable(3), s); add_into(out, variable(4), -s * i); return out;
    }
    throw std::invalid_argument("q component out of range");
}

Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m;
            for (int k = 0; k < 5; ++k) m[k] = ma[k] + mb[k];
            out[m] += ca * cb;
        }
    }
    return out;
}

cd sphere_inner(const Poly& a, const Poly& b) {
    cd sum = 0.0;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m;
            for (int k = 0; k < 5; ++k) m[k] = ma[k] + mb[k];
            sum += std::conj(ca) * cb * monomial_integral(m);
        }
    }
    return sum;
}

std::vector<Harmonic> so5_harmonics(int v_max) {
    if (v_max > 3) throw std::invalid_argument("fixture harmonics only go to v = 3");
    std::vector<Harmonic> out;
    const Tensor q = q_tensor();
    auto add = [&](int v, int L, Tensor t) {
        if (!normalise(t)) throw std::logic_error("vanishing harmonic");
        out.push_back({{v, 1, L}, std::move(t)});
    };
    add(0, 0, Tensor{Poly{{Monomial{}, 1.0}}});
    if (v_max >= 1) add(1, 2, q);
    if (v_max >= 2) {
        add(2, 2, couple(q, 2, q, 2, 2));
        add(2, 4, couple(q, 2, q, 2, 4));
    }
    if (v_max >= 3) {
        const Tensor q2 = couple(q, 2, q, 2, 2);
        const Tensor q4 = couple(q, 2, q, 2, 4);
        add(3, 0, couple(q2, 2, q, 2, 0));
        add(3, 3, couple(q4, 4, q, 2, 3));
        add(3, 4, couple(q4, 4, q, 2, 4));
        add(3, 6, couple(q4, 4, q, 2, 6));
    }
    return out;
}

Reduced so3_reduced_q(const Harmonic& bra, const Harmonic& ket) {
    const int L1 = bra.label.L;
    const int L = ket.label.L;
    double best = 0.0;
    double best_cg = 0.0;
    std::vector<double> values;
    double imag = 0.0;
    for (int M = -L; M <= L; ++M) {
        for (int m = -2; m <= 2; ++m) {
            const int M1 = M + m;
            if (std::abs(M1) > L1) continue;
            const double c = so3_cg(L, M, 2, m, L1, M1);
            if (std::abs(c) < 1e-8) continue;
            const cd me = sphere_inner(bra.components[M1 + L1],
                                       multiply(q_component(m), ket.components[M + L]));
            values.push_back(me.real() / c);
            imag = std::max(imag, std::abs(me.imag()));
            if (std::abs(c) > best_cg) {
                best_cg = std::abs(c);
                best = me.real() / c;
            }
        }
    }
    double spread = imag;
    for (double x : values) spread = std::max(spread, std::abs(x - best));
    return {best, spread};
}

polyham::CGTable isoscalar_table(int v_max) {
    const auto phases = polyham::orbital::PhaseConvention::so5_unit();
    const auto harmonics = so5_harmonics(v_max);
    polyham::CGTable table;
    for (const auto& ket : harmonics) {
        for (const auto& bra : harmonics) {
            if (std::abs(bra.label.v - ket.label.v) != 1) continue;
            if (bra.label.L < std::abs(ket.label.L - 2) || bra.label.L > ket.label.L + 2) continue;
            const double so5 = polyham::orbital::reduced_me_Q(5, bra.label.v, ket.label.v, phases);
            table.insert({ket.label, {1, 1, 2}, bra.label}, so3_reduced_q(bra, ket).value / so5);
        }
    }
    return table;
}

std::vector<double> direct_triple_q(const Harmonic& bra, const Harmonic& ket) {
    const Tensor q = q_tensor();
    const Tensor t = couple(couple(q, 2, q, 2, 2), 2, q, 2, 0);
    std::vector<double> out;
    const int L = ket.label.L;
    for (int M = -L; M <= L; ++M) {
        out.push_back(
            sphere_inner(bra.components[M + L], multiply(t[0], ket.components[M + L])).real());
    }
    return out;
}

}  // namespace fixture
