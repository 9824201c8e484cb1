#pragma once

#include "polyham/hamiltonian.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace polyham::solve {

using hamiltonian::BasisSpec;
using hamiltonian::HamiltonianSpec;
using radial::Matrix;

struct EigenPairs {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns
};

// Rejects input whose asymmetry exceeds tolerance·max(1, max|m|).
EigenPairs eigh(const Matrix& m, double tolerance = 1e-12);

struct BlockSpectrum {
    hamiltonian::Block block;
    EigenPairs pairs;
    // max |E_k(nu_max) − E_k(nu_max − 10)| over the lowest drift_levels; empty when nu_max < 10
    std::optional<double> drift;
    std::vector<double> level_drift;  // per level, for the levels both sizes have
};

struct SpectrumResult {
    std::vector<BlockSpectrum> blocks;
    std::string basis;
    int nu_max = 0;
};

// drift_levels: number of lowest levels per block compared against nu_max − 10.
SpectrumResult solve_spectrum(const HamiltonianSpec& spec, const BasisSpec& basis,
                              const CGTable* table = nullptr, int drift_levels = 5);

// Central block of a single v at (λ, a).
Matrix central_block(const HamiltonianSpec& spec, int v, double lambda, double scale, int nu_max);

// ⟨0 v|H|0 v⟩ in the basis (λ, a).
double ground_expectation(const HamiltonianSpec& spec, int v, double lambda, double scale);

struct Range {
    double lo;
    double hi;
};

struct VariationalOptions {
    Range scale{0.1, 10.0};
    Range lambda{1.05, 100.0};
    int grid = 5;  // multistart grid per axis
    int max_iterations = 2000;
    double size_tolerance = 1e-9;  // simplex size in (log a, λ)
};

struct TracePoint {
    int start;
    int iteration;
    double scale;
    double lambda;
    double energy;
};

struct VariationalResult {
    int v = 0;
    double scale = 0.0;
    double lambda = 0.0;
    double energy = 0.0;
    bool converged = false;
    std::vector<TracePoint> trace;
};

// Minimizes ⟨0 v|H|0 v⟩ over (a, λ) by Nelder–Mead from a grid of starts.
// Throws ConvergenceError (with the trace in the message) if the best start did not converge.
VariationalResult variational_optimize(const HamiltonianSpec& spec, int v,
                                       const VariationalOptions& options = {});

// Scale minimizing ⟨0 v|H|0 v⟩ at fixed λ, searched within the range.
double optimal_scale(const HamiltonianSpec& spec, int v, double lambda, const Range& scale);

struct Candidate {
    double lambda;
    double scale;
    double energy;  // n-th eigenvalue of the N_basis block
};

struct Selection {
    double lambda;
    double scale;
    double energy;
    std::vector<Candidate> evaluated;  // sorted by λ
};

// Chooses the λ (with its variational scale) minimizing the n-th lowest eigenvalue
// of the n_basis-state block; ties go to the smaller λ.
Selection select_basis(const HamiltonianSpec& spec, int v, int n, int n_basis,
                       std::vector<double> candidates, const Range& scale);

struct ConvergenceRow {
    int nu_max;
    Eigen::VectorXd eigenvalues;  // lowest k
    std::optional<double> drift;  // against the previous row
};

std::vector<ConvergenceRow> convergence_study(const HamiltonianSpec& spec, const BasisSpec& basis,
                                              int v, const std::vector<int>& schedule, int k);

// Smallest nu_max in [lo, hi] for which the lowest reference.size() eigenvalues of block v
// agree with the reference to relative tolerance; nullopt if none does.
std::optional<int> minimal_nu_max(const HamiltonianSpec& spec, const BasisSpec& basis, int v,
                                  const Eigen::VectorXd& reference, double tolerance, int lo,
                                  int hi);

}  // namespace polyham::solve
