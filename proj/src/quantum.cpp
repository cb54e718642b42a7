#include "kinscape/quantum.hpp"

#include <string>

#include <Eigen/Eigenvalues>

#include "kinscape/error.hpp"

namespace kinscape {

namespace {

constexpr double kTol = 1e-12;
constexpr double kPositivityTol = 1e-10;

void check_index(int k, const char* what) {
    if (k < 1 || k > 3) throw InvalidArgument(std::string(what) + " must be 1, 2 or 3, got " + std::to_string(k));
}

void check_unitary(const Matrix3C& u, const char* what) {
    // loose enough for long products of propagated steps
    if (!u.allFinite() || unitarity_defect(u) > 1e-10) throw InvalidArgument(std::string(what) + " is not unitary");
}

Matrix3C hermitian_part(const Matrix3C& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix::DensityMatrix(const Matrix3C& m) : m_(m) {
    if (!m.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
    if (!is_hermitian(m, kTol)) throw InvalidArgument("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > kTol) throw InvalidArgument("density matrix trace is not 1");
    if (min_eigenvalue() < -kPositivityTol) throw InvalidArgument("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::basis(int k) {
    check_index(k, "basis index");
    return DensityMatrix(basis_projector(k), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const Vector3C& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw InvalidArgument("zero state vector");
    const Vector3C v = psi / n;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::trusted(const Matrix3C& m) { return DensityMatrix(hermitian_part(m), Unchecked{}); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix3C> es(hermitian_part(m_), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

MeasurementSpec::MeasurementSpec(std::vector<Matrix3C> projectors) : p_(std::move(projectors)) {
    if (p_.empty()) throw InvalidSpec("measurement needs at least one projector");
    Matrix3C sum = Matrix3C::Zero();
    for (std::size_t i = 0; i < p_.size(); ++i) {
        const Matrix3C& p = p_[i];
        if (!p.allFinite() || !is_hermitian(p, kTol)) throw InvalidSpec("projector " + std::to_string(i) + " is not Hermitian");
        if ((p * p - p).norm() > kTol) throw InvalidSpec("projector " + std::to_string(i) + " is not idempotent");
        for (std::size_t j = 0; j < i; ++j)
            if ((p * p_[j]).norm() > kTol)
                throw InvalidSpec("projectors " + std::to_string(j) + " and " + std::to_string(i) + " are not orthogonal");
        sum += p;
    }
    if ((sum - Matrix3C::Identity()).norm() > kTol) throw InvalidSpec("projectors do not sum to the identity");
}

MeasurementSpec MeasurementSpec::population(int k) {
    check_index(k, "measured state");
    const Matrix3C p = basis_projector(k);
    return MeasurementSpec({p, Matrix3C::Identity() - p});
}

DensityMatrix measure_nonselective(const DensityMatrix& rho, const MeasurementSpec& spec) {
    Matrix3C out = Matrix3C::Zero();
    for (const Matrix3C& p : spec.projectors()) out += p * rho.mat() * p;
    return DensityMatrix::trusted(out);
}

DensityMatrix measure_population(const DensityMatrix& rho, int state_index) {
    return measure_nonselective(rho, MeasurementSpec::population(state_index));
}

DensityMatrix evolve_chain(const DensityMatrix& rho0, const std::vector<EvolutionStep>& steps) {
    DensityMatrix rho = rho0;
    for (const EvolutionStep& step : steps) {
        if (const auto* u = std::get_if<UnitaryStep>(&step)) {
            check_unitary(u->u, "unitary step");
            rho = DensityMatrix::trusted(u->u * rho.mat() * u->u.adjoint());
        } else {
            rho = measure_nonselective(rho, std::get<MeasurementSpec>(step));
        }
    }
    return rho;
}

double transition_probability(const Matrix3C& u1, std::optional<int> measured_state, const Matrix3C& u2,
                              int target) {
    check_unitary(u1, "u1");
    check_unitary(u2, "u2");
    check_index(target, "target");
    if (measured_state) check_index(*measured_state, "measured state");
    return transition_probability_t(from_eigen(u1), measured_state.value_or(0), from_eigen(u2), target);
}

double transition_probability_channel(const Matrix3C& u1, std::optional<int> measured_state,
                                      const Matrix3C& u2, int target) {
    check_index(target, "target");
    std::vector<EvolutionStep> steps;
    steps.emplace_back(UnitaryStep{u1});
    if (measured_state) steps.emplace_back(MeasurementSpec::population(*measured_state));
    steps.emplace_back(UnitaryStep{u2});
    const DensityMatrix out = evolve_chain(DensityMatrix::basis(1), steps);
    return out.mat()(target - 1, target - 1).real();
}

}  // namespace kinscape
