#pragma once

#include "polyham/cg_table.hpp"

#include <functional>
#include <string>
#include <vector>

namespace polyham::orbital {

// Phase angles φ(v) entering the relation between ⟨v−1‖Q‖v⟩ and ⟨v‖Q‖v−1⟩.
class PhaseConvention {
public:
    PhaseConvention(std::string name, std::function<double(int)> angle);

    static PhaseConvention so3_standard();  // e^{iφ(l)} = (−1)^l
    static PhaseConvention so5_unit();      // e^{iφ(v)} = 1

    const std::string& name() const { return name_; }
    double angle(int v) const { return angle_(v); }
    // e^{i(φ(a) − φ(b))}; throws DomainError unless it is ±1.
    double relative(int a, int b) const;

private:
    std::string name_;
    std::function<double(int)> angle_;
};

struct OrbitalLabel {
    int N = 3;
    int v = 0;
    int alpha = 1;
    int L = 0;
    int M = 0;
    int parity() const { return v % 2 == 0 ? 1 : -1; }
};

long long dim_son(int N, int v);

double reduced_me_Q(int N, int v_out, int v_in, const PhaseConvention& phases);

struct SymmetrySides {
    double lhs;
    double rhs;
};
// ⟨v3‖Q‖v1⟩ against e^{i(φ(v1)−φ(v3))} √(d(v1)/d(v3)) ⟨v1‖Q‖v3⟩.
SymmetrySides reduced_me_symmetry_check(int N, int v3, int v1, const PhaseConvention& phases);

// Factor κ with ⟨v|Σ_i A_i B_i|v⟩ = Σ_{v''} κ(v, v'') ⟨v‖A‖v''⟩⟨v''‖B‖v⟩ for vector operators A, B.
double scalar_contraction_factor(int N, int v, int v_mid, const PhaseConvention& phases);

// Condon–Shortley Clebsch–Gordan coefficient (l1 m1, l2 m2 | L M).
double so3_cg(int l1, int m1, int l2, int m2, int L, int M);
double wigner_6j(int a, int b, int c, int d, int e, int f);
// Racah W(abcd; ef) = (−1)^{a+b+c+d} {a b e; d c f}.
double racah_w(int a, int b, int c, int d, int e, int f);

// SO(3)-reduced matrix element ⟨j_out‖[A^{k1} ⊗ B^{k2}]^k‖j_in⟩, B acting first.
// a(j', j'') and b(j'', j) return the reduced elements of the factors; the sum runs
// over the supplied intermediate values.
double recouple_product(int j_out, int j_in, int k1, int k2, int k,
                        const std::function<double(int, int)>& a,
                        const std::function<double(int, int)>& b,
                        const std::vector<int>& intermediates);

// ⟨l2‖(Q ⊗ Q)_2‖l1⟩ for N = 3 with the standard phases.
double reduced_me_QQ2(int l2, int l1);
// ⟨l2 m|3cos²θ − 1|l1 m⟩.
double me_crystal_field(int l2, int l1, int m);

struct SO3Content {
    int alpha;
    int L;
};
// SO(5) ⊃ SO(3) content of the symmetric irrep v; α counts repeated L in order of
// increasing number of L = 0 triplets removed.
std::vector<SO3Content> so5_so3_branching(int v);

// ⟨v' α' L M|[[Q ⊗ Q]_2 ⊗ Q]_0|v α L M⟩ for N = 5, using SO(3)-reduced elements
// (vαL, 1 1 2‖v1 α1 L1)⟨v1‖Q‖v⟩ from the table.
double triple_Q_me(const CGTable& table, const SO5Label& bra, const SO5Label& ket,
                   const PhaseConvention& phases = PhaseConvention::so5_unit());

// ⟨v1 α1 L1‖Q‖v α L⟩ from the table (SO(3)-reduced).
double so3_reduced_Q(const CGTable& table, const SO5Label& out, const SO5Label& in,
                     const PhaseConvention& phases = PhaseConvention::so5_unit());

}  // namespace polyham::orbital
