#pragma once

// Schrödinger propagation of the three-level system under piecewise-constant
// control, dynamic transition probabilities and control searches.

#include <cstdint>
#include <optional>
#include <vector>

#include "kinscape/matrix3.hpp"

namespace kinscape {

struct SystemHamiltonians {
    Matrix3C h0;  // diag(0, 1, 2)
    Matrix3C v;   // mu * tridiagonal(1)
    double mu = 1.0;

    static SystemHamiltonians standard(double mu = 1.0);
};

class PiecewiseControl {
public:
    PiecewiseControl(std::vector<double> amplitudes, double dt);

    // f(t) = c0 + sum_k a_k cos(2 pi k t / T) + b_k sin(2 pi k t / T), sampled
    // at interval midpoints. coeffs = (c0, a1, b1, a2, b2, ...).
    static PiecewiseControl fourier(const std::vector<double>& coeffs, double duration, int steps);
    static PiecewiseControl zero(double duration, int steps);

    const std::vector<double>& amplitudes() const { return amp_; }
    double dt() const { return dt_; }
    double duration() const { return dt_ * static_cast<double>(amp_.size()); }

private:
    std::vector<double> amp_;
    double dt_;
};

struct StateVector {
    cplx c1, c2, c3;

    // Throws InvalidArgument unless normalized within 1e-12.
    static StateVector from(const Vector3C& v);
    Vector3C vec() const { return {c1, c2, c3}; }
};

// exp(-i (H0 + f V) dt) through a Hermitian eigendecomposition.
Matrix3C step_propagator(double f, double dt, const SystemHamiltonians& sys);
Matrix3C propagate(const PiecewiseControl& ctrl, const SystemHamiltonians& sys);

// State after each interval, starting with psi0 itself.
std::vector<StateVector> trajectory(const PiecewiseControl& ctrl, const SystemHamiltonians& sys,
                                    const StateVector& psi0);

// |c1 c3 - c2²/2|, invariant under the coherent dynamics.
double conserved_quantity(const StateVector& psi);
// c1 c3 - c2²/2 itself; rotates as e^{-2it} with the identity part of H0.
cplx conserved_complex(const StateVector& psi);

double dynamic_transition_probability(const PiecewiseControl& f1, std::optional<int> measured_state,
                                      const PiecewiseControl& f2, int target, const SystemHamiltonians& sys);

// Same probability computed kinematically: Euler angles of u1, u2 (ZYZ) fed
// through the chart evaluation.
double kinematic_transition_probability(const Matrix3C& u1, std::optional<int> measured_state, const Matrix3C& u2,
                                        int target);

struct BoundSearchOptions {
    std::optional<int> measured;  // empty: coherent control only
    int target = 2;
    int harmonics = 3;
    double duration = 20.0;
    int steps = 48;
    double amplitude = 1.0;  // random starting coefficients drawn from [-a, a]
};

struct BoundSearchResult {
    double best = 0.0;
    long evaluations = 0;
    std::vector<double> coeffs;  // f1 coefficients then f2 coefficients
};

// Random restarts with Nelder-Mead refinement over Fourier-parameterized
// control pairs. Evaluation 0 is always the zero control.
BoundSearchResult coherent_bound_search(long budget, std::uint64_t seed, const SystemHamiltonians& sys,
                                        const BoundSearchOptions& opts = {});

struct ConservationReport {
    int trajectories = 0;
    double max_drift = 0.0;        // of |c1 c3 - c2²/2|
    double max_phase_drift = 0.0;  // of (c1 c3 - c2²/2) e^{2it}
    double max_norm_drift = 0.0;
};

// Random initial states and random piecewise controls (seeded per trajectory).
ConservationReport conservation_suite(int trajectories, int steps, std::uint64_t seed, const SystemHamiltonians& sys);

struct CrosscheckReport {
    int samples = 0;
    double max_discrepancy = 0.0;  // |dynamic - kinematic|
    double max_unitarity_defect = 0.0;
    double max_r_residual = 0.0;   // Euler-decomposition residual of propagators
};

// Random control pairs; cycles the measured state over none, 1, 2, 3 and the target over 2, 3.
CrosscheckReport crosscheck_suite(int samples, std::uint64_t seed, const SystemHamiltonians& sys);

// ½[1 + cos(dphi/(N+1))^{N+1}]
double anti_zeno_pmax(long n, double delta_phi);

}  // namespace kinscape
