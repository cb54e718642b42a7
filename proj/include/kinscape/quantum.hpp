#pragma once

// Density matrices, non-selective projective measurements and the
// unitary/measurement evolution chain.

#include <optional>
#include <variant>
#include <vector>

#include "kinscape/matrix3.hpp"

namespace kinscape {

class DensityMatrix {
public:
    // Validates Hermiticity and unit trace to 1e-12 and eigenvalues >= -1e-10.
    explicit DensityMatrix(const Matrix3C& m);

    static DensityMatrix basis(int k);  // |k><k|, k in {1,2,3}
    static DensityMatrix pure(const Vector3C& psi);

    const Matrix3C& mat() const { return m_; }
    double min_eigenvalue() const;

    // Channel outputs: Hermitian part of m, no validation.
    static DensityMatrix trusted(const Matrix3C& m);

private:
    struct Unchecked {};
    DensityMatrix(const Matrix3C& m, Unchecked) : m_(m) {}
    Matrix3C m_;
};

class MeasurementSpec {
public:
    // Throws InvalidSpec unless the projectors are Hermitian, idempotent,
    // pairwise orthogonal and complete, all within 1e-12.
    explicit MeasurementSpec(std::vector<Matrix3C> projectors);

    // {|k><k|, I - |k><k|}
    static MeasurementSpec population(int k);

    const std::vector<Matrix3C>& projectors() const { return p_; }

private:
    std::vector<Matrix3C> p_;
};

struct UnitaryStep {
    Matrix3C u;
};

using EvolutionStep = std::variant<UnitaryStep, MeasurementSpec>;

DensityMatrix measure_nonselective(const DensityMatrix& rho, const MeasurementSpec& spec);
DensityMatrix measure_population(const DensityMatrix& rho, int state_index);
DensityMatrix evolve_chain(const DensityMatrix& rho0, const std::vector<EvolutionStep>& steps);

// P(1 -> target) for U2 . M_{measured} . U1 acting on |1><1|, closed form.
// measured_state empty means no intermediate measurement.
double transition_probability(const Matrix3C& u1, std::optional<int> measured_state, const Matrix3C& u2,
                              int target);

// Same quantity through explicit channel composition.
double transition_probability_channel(const Matrix3C& u1, std::optional<int> measured_state,
                                      const Matrix3C& u2, int target);

// Closed form over a generic scalar. measured in {0 (none), 1, 2, 3}.
template <class S>
S transition_probability_t(const Mat3<S>& u1, int measured, const Mat3<S>& u2, int target) {
    const int k = target - 1;
    const Cx<S> a[3] = {u1[0][0], u1[1][0], u1[2][0]};
    if (measured == 0) {
        Cx<S> amp = u2[k][0] * a[0];
        amp = amp + u2[k][1] * a[1];
        amp = amp + u2[k][2] * a[2];
        return norm2(amp);
    }
    S p = norm2(a[0]) * norm2(u2[k][0]);
    p += norm2(a[1]) * norm2(u2[k][1]);
    p += norm2(a[2]) * norm2(u2[k][2]);
    // coherence survives between the two unmeasured levels
    int x = -1;
    int y = -1;
    for (int m = 0; m < 3; ++m) {
        if (m == measured - 1) continue;
        if (x < 0)
            x = m;
        else
            y = m;
    }
    const Cx<S> t = (a[x] * conj(a[y])) * (u2[k][x] * conj(u2[k][y]));
    p += 2.0 * t.re;
    return p;
}

}  // namespace kinscape
