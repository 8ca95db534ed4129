#pragma once

#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qcap/capacity.hpp"
#include "qcap/errors.hpp"
#include "qcap/qubit_algebra.hpp"

namespace qcap {

// Kraus-operator channel models and their closed-form predictions:
// per-axis binary error probabilities, the detected capacity they imply,
// and the Holevo capacity of the amplitude damping channel.

struct PauliParams {
    double qx = 0.0;
    double qy = 0.0;
    double qz = 0.0;

    double q_identity() const { return 1.0 - (qx + qy + qz); }

    void validate() const {
        if (qx < 0.0 || qy < 0.0 || qz < 0.0 || qx + qy + qz > 1.0 + 1e-12) {
            throw data_error("PauliParams: weights must be nonnegative with sum <= 1");
        }
    }

    static PauliParams phase_damping(double q) { return {0.0, 0.0, q}; }
    static PauliParams depolarizing(double q) { return {q, q, q}; }
};

struct AmplitudeDamping {
    double eta = 0.0;
};

// The channel kind travels with the Kraus list so theoretical predictors
// can dispatch without re-identifying the channel from its matrices.
using ChannelTag = std::variant<PauliParams, AmplitudeDamping>;

struct KrausChannel {
    std::vector<Mat2> kraus;
    ChannelTag tag;

    // sum_k K_k^dag K_k = I within kDensityTol
    double completeness_deviation() const {
        Mat2 s;
        for (const auto& k : kraus) s += k.adjoint() * k;
        return s.max_abs_diff(Mat2::identity());
    }
};

inline std::string channel_name(const ChannelTag& tag) {
    if (const auto* p = std::get_if<PauliParams>(&tag)) {
        if (p->qx == 0.0 && p->qy == 0.0 && p->qz == 0.0) return "identity";
        if (p->qx == 0.0 && p->qy == 0.0) return "pd";
        if (p->qx == p->qy && p->qy == p->qz) return "d";
        return "pauli";
    }
    return "ad";
}

inline KrausChannel make_pauli_channel(const PauliParams& p) {
    p.validate();
    KrausChannel ch;
    ch.tag = p;
    const std::array<std::pair<double, Mat2>, 4> terms{
        std::pair{p.q_identity(), Mat2::identity()},
        std::pair{p.qx, pauli_x()},
        std::pair{p.qy, pauli_y()},
        std::pair{p.qz, pauli_z()},
    };
    for (const auto& [w, op] : terms) {
        if (w > 0.0) ch.kraus.push_back(std::sqrt(w) * op);
    }
    if (ch.completeness_deviation() > kDensityTol) {
        throw numerical_error("make_pauli_channel: completeness violated");
    }
    return ch;
}

inline KrausChannel make_identity_channel() { return make_pauli_channel({}); }

// K0 = |0><0| + sqrt(1-eta)|1><1|,  K1 = sqrt(eta)|0><1|.
inline KrausChannel make_amplitude_damping(double eta) {
    if (eta < 0.0 || eta > 1.0) throw data_error("make_amplitude_damping: eta out of [0,1]");
    KrausChannel ch;
    ch.tag = AmplitudeDamping{eta};
    Mat2 k0;
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - eta);
    ch.kraus.push_back(k0);
    if (eta > 0.0) {
        Mat2 k1;
        k1(0, 1) = std::sqrt(eta);
        ch.kraus.push_back(k1);
    }
    if (ch.completeness_deviation() > kDensityTol) {
        throw numerical_error("make_amplitude_damping: completeness violated");
    }
    return ch;
}

inline Density2 apply(const KrausChannel& ch, const Density2& rho) {
    Mat2 out;
    for (const auto& k : ch.kraus) out += k * rho.matrix() * k.adjoint();
    if (std::abs(out.trace() - 1.0) > kDensityTol) {
        throw numerical_error("apply: output trace drifted beyond tolerance");
    }
    return Density2(out);
}

// (E ⊗ I) on a two-qubit state, channel acting on the system slot.
inline Density4 apply_extended(const KrausChannel& ch, const Density4& rho) {
    Mat4 out;
    for (const auto& k : ch.kraus) {
        const Mat4 kk = kron(k, Mat2::identity());
        out += kk * rho.matrix() * kk.adjoint();
    }
    if (std::abs(out.trace() - 1.0) > kDensityTol) {
        throw numerical_error("apply_extended: output trace drifted beyond tolerance");
    }
    return Density4(out);
}

// Per-axis canonical error probabilities, indexed by axis_index.
using ChannelErrorProfile = std::array<ErrorPair, 3>;

namespace detail {
inline ErrorPair symmetric_canonical(double s) {
    const double e = std::min(s, 1.0 - s);
    return {e, e, {}};
}
}  // namespace detail

// AD: eps^(x) = eps^(y) = (1 - sqrt(1-eta))/2 on both symbols, z is a
// Z-channel (0, eta). Pauli: symmetric per axis with s_x = qy+qz,
// s_y = qx+qz, s_z = qx+qy, relabeled to min{s, 1-s}.
inline ChannelErrorProfile theoretical_errors(const ChannelTag& tag) {
    ChannelErrorProfile prof;
    if (const auto* ad = std::get_if<AmplitudeDamping>(&tag)) {
        if (ad->eta < 0.0 || ad->eta > 1.0) throw data_error("theoretical_errors: eta out of [0,1]");
        const double s = (1.0 - std::sqrt(1.0 - ad->eta)) / 2.0;
        prof[axis_index(Axis::X)] = {s, s, {}};
        prof[axis_index(Axis::Y)] = {s, s, {}};
        prof[axis_index(Axis::Z)] = {0.0, ad->eta, {}};
        return prof;
    }
    const auto& p = std::get<PauliParams>(tag);
    p.validate();
    prof[axis_index(Axis::X)] = detail::symmetric_canonical(p.qy + p.qz);
    prof[axis_index(Axis::Y)] = detail::symmetric_canonical(p.qx + p.qz);
    prof[axis_index(Axis::Z)] = detail::symmetric_canonical(p.qx + p.qy);
    return prof;
}

struct TheoryPrediction {
    double cd = 0.0;
    std::vector<Axis> winners;
};

inline TheoryPrediction theoretical_detected_capacity(const ChannelTag& tag) {
    const CapacityReport rep = detected_capacity(theoretical_errors(tag));
    return {rep.cd, rep.tie_set};
}

namespace detail {
inline double holevo_ad_objective(double eta, double t) {
    const double g = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * eta * (1.0 - eta) * t * t)));
    return binary_entropy(t * (1.0 - eta)) - binary_entropy(g);
}
}  // namespace detail

// Holevo capacity of the AD channel:
//   C1 = max_t H[t(1-eta)] - H[g(eta,t)],  g = (1 + sqrt(1-4eta(1-eta)t^2))/2.
// Golden-section search assumes the objective is unimodal in t; a
// 10^4-point grid guards that assumption and refines the incumbent.
inline double holevo_capacity_AD(double eta) {
    if (eta < 0.0 || eta > 1.0) throw data_error("holevo_capacity_AD: eta out of [0,1]");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = detail::holevo_ad_objective(eta, c);
    double fd = detail::holevo_ad_objective(eta, d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = detail::holevo_ad_objective(eta, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = detail::holevo_ad_objective(eta, d);
        }
    }
    double best = std::max(fc, fd);

    double grid_best = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        grid_best = std::max(grid_best, detail::holevo_ad_objective(eta, k / 10000.0));
    }
    if (grid_best > best + 1e-9) {
        throw numerical_error("holevo_capacity_AD: grid exceeded golden-section optimum");
    }
    return std::max(best, grid_best);
}

}  // namespace qcap
