#include "kinscape/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "kinscape/error.hpp"
#include "kinscape/landscape.hpp"
#include "kinscape/quantum.hpp"
#include "kinscape/su2rep.hpp"

namespace kinscape {

SystemHamiltonians SystemHamiltonians::standard(double mu) {
    SystemHamiltonians s;
    s.mu = mu;
    s.h0 = Matrix3C::Zero();
    s.h0(1, 1) = 1.0;
    s.h0(2, 2) = 2.0;
    s.v = Matrix3C::Zero();
    s.v(0, 1) = s.v(1, 0) = s.v(1, 2) = s.v(2, 1) = mu;
    return s;
}

PiecewiseControl::PiecewiseControl(std::vector<double> amplitudes, double dt) : amp_(std::move(amplitudes)), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("control dt must be positive");
    for (double a : amp_)
        if (!std::isfinite(a)) throw InvalidArgument("control amplitudes must be finite");
}

PiecewiseControl PiecewiseControl::fourier(const std::vector<double>& coeffs, double duration, int steps) {
    if (steps <= 0) throw InvalidArgument("steps must be positive");
    if (coeffs.empty() || coeffs.size() % 2 == 0) throw InvalidArgument("fourier coefficients: expected c0 plus cos/sin pairs");
    const double dt = duration / steps;
    const std::size_t harmonics = (coeffs.size() - 1) / 2;
    std::vector<double> amp(static_cast<std::size_t>(steps));
    for (int n = 0; n < steps; ++n) {
        const double t = (n + 0.5) * dt;
        double f = coeffs[0];
        for (std::size_t k = 1; k <= harmonics; ++k) {
            const double w = 2.0 * kPi * static_cast<double>(k) * t / duration;
            f += coeffs[2 * k - 1] * std::cos(w) + coeffs[2 * k] * std::sin(w);
        }
        amp[static_cast<std::size_t>(n)] = f;
    }
    return PiecewiseControl(std::move(amp), dt);
}

PiecewiseControl PiecewiseControl::zero(double duration, int steps) {
    if (steps <= 0) throw InvalidArgument("steps must be positive");
    return PiecewiseControl(std::vector<double>(static_cast<std::size_t>(steps), 0.0), duration / steps);
}

StateVector StateVector::from(const Vector3C& v) {
    if (!v.allFinite() || std::abs(v.squaredNorm() - 1.0) > 1e-12) throw InvalidArgument("state vector is not normalized");
    return {v(0), v(1), v(2)};
}

Matrix3C step_propagator(double f, double dt, const SystemHamiltonians& sys) {
    const Matrix3C h = sys.h0 + f * sys.v;
    Eigen::SelfAdjointEigenSolver<Matrix3C> es(h);
    const auto& w = es.eigenvalues();
    Vector3C phase;
    for (int i = 0; i < 3; ++i) phase(i) = std::polar(1.0, -w(i) * dt);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix3C propagate(const PiecewiseControl& ctrl, const SystemHamiltonians& sys) {
    Matrix3C u = Matrix3C::Identity();
    for (double f : ctrl.amplitudes()) u = step_propagator(f, ctrl.dt(), sys) * u;
    return u;
}

std::vector<StateVector> trajectory(const PiecewiseControl& ctrl, const SystemHamiltonians& sys,
                                    const StateVector& psi0) {
    std::vector<StateVector> out{psi0};
    Vector3C psi = psi0.vec();
    for (double f : ctrl.amplitudes()) {
        psi = step_propagator(f, ctrl.dt(), sys) * psi;
        out.push_back({psi(0), psi(1), psi(2)});
    }
    return out;
}

cplx conserved_complex(const StateVector& psi) { return psi.c1 * psi.c3 - 0.5 * psi.c2 * psi.c2; }

double conserved_quantity(const StateVector& psi) { return std::abs(conserved_complex(psi)); }

double dynamic_transition_probability(const PiecewiseControl& f1, std::optional<int> measured_state,
                                      const PiecewiseControl& f2, int target, const SystemHamiltonians& sys) {
    return transition_probability(propagate(f1, sys), measured_state, propagate(f2, sys), target);
}

double kinematic_transition_probability(const Matrix3C& u1, std::optional<int> measured_state, const Matrix3C& u2,
                                        int target) {
    const RMembership m1 = euler_from_unitary(u1, Convention::ZYZ);
    const RMembership m2 = euler_from_unitary(u2, Convention::ZYZ);
    Chart chart;
    chart.kind = ChartKind::Full;
    chart.measured = measured_state.value_or(0);
    chart.target = target;
    const EulerAngles& a = m1.angles;
    const EulerAngles& b = m2.angles;
    return chart_eval(chart, {a.alpha(), a.beta(), a.gamma(), b.alpha(), b.beta(), b.gamma()});
}

namespace {

struct SearchState {
    const SystemHamiltonians* sys;
    const BoundSearchOptions* opts;
    long budget;
    long evaluations = 0;
    double best = -1.0;
    std::vector<double> best_coeffs;
};

double evaluate(SearchState& s, const std::vector<double>& coeffs) {
    if (s.evaluations >= s.budget) return 0.0;
    ++s.evaluations;
    const std::size_t half = coeffs.size() / 2;
    const std::vector<double> c1(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<double> c2(coeffs.begin() + static_cast<std::ptrdiff_t>(half), coeffs.end());
    const auto f1 = PiecewiseControl::fourier(c1, s.opts->duration, s.opts->steps);
    const auto f2 = PiecewiseControl::fourier(c2, s.opts->duration, s.opts->steps);
    const double p = dynamic_transition_probability(f1, s.opts->measured, f2, s.opts->target, *s.sys);
    if (p > s.best) {
        s.best = p;
        s.best_coeffs = coeffs;
    }
    return p;
}

double nm_objective(const gsl_vector* x, void* params) {
    auto& s = *static_cast<SearchState*>(params);
    std::vector<double> c(x->size);
    for (std::size_t i = 0; i < x->size; ++i) c[i] = gsl_vector_get(x, i);
    return -evaluate(s, c);
}

}  // namespace

BoundSearchResult coherent_bound_search(long budget, std::uint64_t seed, const SystemHamiltonians& sys,
                                        const BoundSearchOptions& opts) {
    if (budget <= 0) throw InvalidArgument("budget must be positive");
    if (opts.harmonics < 0 || opts.steps <= 0 || !(opts.duration > 0.0)) throw InvalidArgument("invalid search options");
    const std::size_t per = static_cast<std::size_t>(2 * opts.harmonics + 1);
    const std::size_t dim = 2 * per;

    SearchState s{&sys, &opts, budget, 0, -1.0, {}};
    evaluate(s, std::vector<double>(dim, 0.0));

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    auto draw = [&] { return opts.amplitude * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0); };

    gsl_multimin_fminimizer* nm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
    gsl_vector* x = gsl_vector_alloc(dim);
    gsl_vector* step = gsl_vector_alloc(dim);
    gsl_multimin_function fn{&nm_objective, dim, &s};

    while (s.evaluations < budget) {
        for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, draw());
        gsl_vector_set_all(step, 0.3 * opts.amplitude);
        gsl_multimin_fminimizer_set(nm, &fn, x, step);
        for (int it = 0; it < 20000 && s.evaluations < budget; ++it) {
            if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), 1e-7) == GSL_SUCCESS) break;
        }
    }

    gsl_vector_free(step);
    gsl_vector_free(x);
    gsl_multimin_fminimizer_free(nm);
    return {s.best, s.evaluations, s.best_coeffs};
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PiecewiseControl random_control(std::mt19937_64& rng, int steps, double dt, double amp) {
    std::vector<double> a(static_cast<std::size_t>(steps));
    for (double& x : a) x = amp * (2.0 * unit(rng) - 1.0);
    return PiecewiseControl(std::move(a), dt);
}

}  // namespace

ConservationReport conservation_suite(int trajectories, int steps, std::uint64_t seed, const SystemHamiltonians& sys) {
    if (trajectories <= 0 || steps <= 0) throw InvalidArgument("trajectories and steps must be positive");
    ConservationReport rep;
    rep.trajectories = trajectories;
    std::normal_distribution<double> gauss;
    for (int t = 0; t < trajectories; ++t) {
        auto rng = stream(seed, static_cast<std::uint64_t>(t));
        Vector3C v;
        for (int i = 0; i < 3; ++i) v(i) = cplx(gauss(rng), gauss(rng));
        v.normalize();
        // every fourth trajectory starts in |1>
        if (t % 4 == 0) v = Vector3C(1.0, 0.0, 0.0);
        const double dt = 0.02 + 0.2 * unit(rng);
        const PiecewiseControl ctrl = random_control(rng, steps, dt, 2.0);
        const auto traj = trajectory(ctrl, sys, StateVector::from(v));
        const double q0 = conserved_quantity(traj.front());
        const cplx z0 = conserved_complex(traj.front());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const double time = static_cast<double>(k) * dt;
            rep.max_drift = std::max(rep.max_drift, std::abs(conserved_quantity(traj[k]) - q0));
            rep.max_phase_drift =
                std::max(rep.max_phase_drift, std::abs(conserved_complex(traj[k]) * std::polar(1.0, 2.0 * time) - z0));
            rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(traj[k].vec().squaredNorm() - 1.0));
        }
    }
    return rep;
}

CrosscheckReport crosscheck_suite(int samples, std::uint64_t seed, const SystemHamiltonians& sys) {
    if (samples <= 0) throw InvalidArgument("samples must be positive");
    CrosscheckReport rep;
    rep.samples = samples;
    for (int s = 0; s < samples; ++s) {
        auto rng = stream(seed, static_cast<std::uint64_t>(s));
        const PiecewiseControl f1 = random_control(rng, 40, 0.25, 1.5);
        const PiecewiseControl f2 = random_control(rng, 40, 0.25, 1.5);
        const std::optional<int> measured = s % 4 == 0 ? std::nullopt : std::optional<int>(s % 4);
        const int target = 2 + (s / 4) % 2;
        const Matrix3C u1 = propagate(f1, sys);
        const Matrix3C u2 = propagate(f2, sys);
        rep.max_unitarity_defect = std::max({rep.max_unitarity_defect, unitarity_defect(u1), unitarity_defect(u2)});
        rep.max_r_residual = std::max({rep.max_r_residual, r_membership(u1, Convention::ZYZ).residual,
                                       r_membership(u2, Convention::ZYZ).residual});
        const double dyn = dynamic_transition_probability(f1, measured, f2, target, sys);
        const double kin = kinematic_transition_probability(u1, measured, u2, target);
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(dyn - kin));
    }
    return rep;
}

double anti_zeno_pmax(long n, double delta_phi) {
    if (n < 1) throw InvalidArgument("N must be at least 1");
    if (!(delta_phi >= 0.0 && delta_phi <= kPi)) throw InvalidArgument("delta_phi must lie in [0, pi]");
    const double m = static_cast<double>(n) + 1.0;
    return 0.5 * (1.0 + std::pow(std::cos(delta_phi / m), m));
}

}  // namespace kinscape
