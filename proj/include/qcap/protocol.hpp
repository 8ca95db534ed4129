#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qcap/channel.hpp"
#include "qcap/errors.hpp"
#include "qcap/qubit_algebra.hpp"
#include "qcap/random.hpp"

namespace qcap {

// Simulation of the detection scheme: Werner probe state, channel on the
// system qubit, local Pauli-basis measurements on both photons, optical
// efficiencies, and Poissonian coincidence statistics.

inline Mat4 bell_phi_plus_projector() {
    // |Phi+> = (|00> + |11>)/sqrt(2)
    Mat4 m;
    const std::array<std::size_t, 2> idx{0, 3};
    for (std::size_t r : idx)
        for (std::size_t c : idx) m(r, c) = 0.5;
    return m;
}

struct WernerState {
    double fidelity = 1.0;
    Density4 rho;
    bool near_singular = false;  // F <= 1/4 + 1e-6: deconvolution would blow up
};

// rho_F = ((4F-1)/3)|Phi+><Phi+| + ((1-F)/3) I4
inline WernerState werner_state(double fidelity) {
    if (fidelity < 0.0 || fidelity > 1.0) throw data_error("werner_state: fidelity out of [0,1]");
    Mat4 m = (cplx{(4.0 * fidelity - 1.0) / 3.0}) * bell_phi_plus_projector() +
             (cplx{(1.0 - fidelity) / 3.0}) * Mat4::identity();
    return {fidelity, Density4(m), fidelity <= 0.25 + 1e-6};
}

// Transmissions of the optical train; defaults follow the tabletop values
// (0.9 optics, 0.73 fiber coupling, 0.7 detectors).
struct EfficiencyModel {
    double opt = 0.9;
    double smf = 0.73;
    double spad = 0.7;
    double channel = 0.98;

    double eps_system() const { return opt * channel * smf * smf * spad; }
    double eps_ancilla() const { return opt * smf * spad; }
    double eps_coincidence() const { return eps_system() * eps_ancilla(); }
};

// Four coincidence counts for one measurement axis, c[j][i] with j the
// system outcome and i the ancilla outcome (basis order of pauli_basis).
// Real-valued before Poisson sampling, integer-valued after.
struct CoincidenceSet {
    Axis axis = Axis::Z;
    std::array<std::array<double, 2>, 2> c{};
    double integration_time = 0.0;  // seconds
    double flux = 0.0;              // pairs / second

    double total() const { return c[0][0] + c[0][1] + c[1][0] + c[1][1]; }

    void validate() const {
        for (const auto& row : c)
            for (double v : row)
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    throw data_error("CoincidenceSet: counts must be finite and nonnegative");
                }
    }
};

struct JointProbabilities {
    Axis axis = Axis::Z;
    std::array<std::array<double, 2>, 2> p{};  // p[j][i], sums to 1
};

// p_F(j,i) = Tr[(|j><j|_s ⊗ |i><i|_a)(E ⊗ I) rho_F] with |j>,|i> the
// eigenvectors of the chosen axis.
inline JointProbabilities joint_probabilities(const KrausChannel& ch, double fidelity, Axis axis) {
    const WernerState probe = werner_state(fidelity);
    const Density4 out = apply_extended(ch, probe.rho);
    const QubitBasis basis = pauli_basis(axis);

    JointProbabilities jp;
    jp.axis = axis;
    double sum = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const Mat4 obs = kron(projector(basis.kets[static_cast<std::size_t>(j)]),
                                  projector(basis.kets[static_cast<std::size_t>(i)]));
            double v = expectation(obs, out);
            if (v < 0.0 && v > -1e-12) v = 0.0;
            jp.p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
            sum += v;
        }
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw numerical_error("joint_probabilities: probabilities do not sum to one");
    }
    return jp;
}

// Expected (real-valued) counts: C(ji) = flux * t * eps_{s,a} * p(j,i).
inline CoincidenceSet expected_counts(const JointProbabilities& p, const EfficiencyModel& eff,
                                      double flux, double integration_time) {
    if (flux <= 0.0 || integration_time <= 0.0) {
        throw data_error("expected_counts: flux and integration time must be positive");
    }
    CoincidenceSet cs;
    cs.axis = p.axis;
    cs.flux = flux;
    cs.integration_time = integration_time;
    const double scale = flux * integration_time * eff.eps_coincidence();
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            cs.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                scale * p.p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return cs;
}

// One Poissonian resample of a set of expected counts.
inline CoincidenceSet sample_counts(const CoincidenceSet& expected, Rng& rng) {
    expected.validate();
    CoincidenceSet out = expected;
    for (auto& row : out.c)
        for (double& v : row) v = static_cast<double>(rng.poisson(v));
    return out;
}

inline CoincidenceSet sample_counts(const CoincidenceSet& expected, std::uint64_t seed) {
    Rng rng(seed);
    return sample_counts(expected, rng);
}

// Weighted entrywise combination; models Pauli channels realized as
// count mixtures of independent unitary runs rather than single-shot
// Kraus sampling.
inline CoincidenceSet mixture_counts(const std::vector<std::pair<double, CoincidenceSet>>& components) {
    if (components.empty()) throw data_error("mixture_counts: no components");
    double wsum = 0.0;
    CoincidenceSet out = components.front().second;
    for (auto& row : out.c) row = {0.0, 0.0};
    for (const auto& [w, cs] : components) {
        if (w < 0.0) throw data_error("mixture_counts: negative weight");
        if (cs.axis != out.axis) throw data_error("mixture_counts: axis mismatch");
        wsum += w;
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
                out.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +=
                    w * cs.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw data_error("mixture_counts: weights must sum to one");
    return out;
}

// Expected counts for one axis straight from the Kraus description.
inline CoincidenceSet simulate_expected_counts(const KrausChannel& ch, double fidelity, Axis axis,
                                               const EfficiencyModel& eff, double flux,
                                               double integration_time) {
    return expected_counts(joint_probabilities(ch, fidelity, axis), eff, flux, integration_time);
}

// Expected counts for a Pauli channel as the experiment realizes it:
// a q-weighted mixture over the four independent unitary operations.
inline CoincidenceSet pauli_mixture_expected_counts(const PauliParams& p, double fidelity, Axis axis,
                                                    const EfficiencyModel& eff, double flux,
                                                    double integration_time) {
    p.validate();
    std::vector<std::pair<double, CoincidenceSet>> parts;
    const std::array<std::pair<double, Mat2>, 4> terms{
        std::pair{p.q_identity(), Mat2::identity()},
        std::pair{p.qx, pauli_x()},
        std::pair{p.qy, pauli_y()},
        std::pair{p.qz, pauli_z()},
    };
    for (const auto& [w, op] : terms) {
        if (w <= 0.0) continue;
        KrausChannel unitary;
        unitary.kraus.push_back(op);
        unitary.tag = PauliParams{};  // tag unused here; the mixture carries the weights
        parts.emplace_back(w, simulate_expected_counts(unitary, fidelity, axis, eff, flux,
                                                       integration_time));
    }
    return mixture_counts(parts);
}

// Waveplate angle <-> damping parameter for the AD interferometer:
// omega = arccos(-sqrt(1-eta))/2 degrees, eta = 1 - cos^2(2 omega).
inline double ad_angle_map(double omega_degrees) {
    if (omega_degrees < 45.0 - 1e-9 || omega_degrees > 90.0 + 1e-9) {
        throw data_error("ad_angle_map: omega outside [45, 90] degrees");
    }
    const double rad = omega_degrees * M_PI / 180.0;
    const double c = std::cos(2.0 * rad);
    return std::clamp(1.0 - c * c, 0.0, 1.0);
}

inline double ad_angle_inverse(double eta) {
    if (eta < 0.0 || eta > 1.0) throw data_error("ad_angle_inverse: eta out of [0,1]");
    return std::acos(-std::sqrt(1.0 - eta)) / 2.0 * 180.0 / M_PI;
}

}  // namespace qcap
