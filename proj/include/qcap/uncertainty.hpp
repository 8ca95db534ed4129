#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qcap/capacity.hpp"
#include "qcap/errors.hpp"
#include "qcap/protocol.hpp"
#include "qcap/random.hpp"
#include "qcap/reconstruction.hpp"

namespace qcap {

// Monte Carlo propagation of Poissonian counting noise through the full
// reconstruction pipeline, plus the closed-form noise laws.

// sigma_F / sigma = sqrt(8F^2 - 4F + 5) / |4F - 1|: the price of noise
// deconvolution on the standard deviation of the joint probabilities.
inline double sigma_F_ratio(double fidelity) {
    if (std::abs(4.0 * fidelity - 1.0) <= 1e-6) {
        throw data_error("sigma_F_ratio: diverges at fidelity 1/4");
    }
    return std::sqrt(8.0 * fidelity * fidelity - 4.0 * fidelity + 5.0) /
           std::abs(4.0 * fidelity - 1.0);
}

// |d eta / d omega| * delta_omega with eta = 1 - cos^2(2 omega), so
// d eta/d omega = 2 sin(4 omega) (per radian). Angles in degrees.
inline double ad_angle_uncertainty(double omega_degrees, double delta_omega_degrees = 0.5) {
    if (omega_degrees < 45.0 - 1e-9 || omega_degrees > 90.0 + 1e-9) {
        throw data_error("ad_angle_uncertainty: omega outside [45, 90] degrees");
    }
    const double rad = omega_degrees * M_PI / 180.0;
    const double slope = std::abs(2.0 * std::sin(4.0 * rad));
    return slope * delta_omega_degrees * M_PI / 180.0;
}

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    long n = 0;
};

namespace detail {

// Welford accumulator; deterministic for a fixed trial order.
struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    Stat stat() const {
        Stat s;
        s.mean = mean;
        s.n = n;
        s.stddev = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
        return s;
    }
};

}  // namespace detail

struct AxisDistribution {
    Stat eps0, eps1, capacity;
    std::array<std::array<Stat, 2>, 2> q;  // deconvolved (pre-sanitize) entries
};

struct MonteCarloResult {
    std::array<AxisDistribution, 3> axes;  // indexed by axis_index
    Stat cd;
    long trials = 0;
    long excluded = 0;
    std::uint64_t seed = 0;
};

struct MonteCarloOptions {
    long trials = 1000;
    std::uint64_t seed = 1;
    SanitizeMode mode = SanitizeMode::Clamp;
    double max_exclusion_fraction = 0.01;
};

// Resample counts, run deconvolve -> sanitize -> identify -> capacity per
// trial, and report mean/std of every pipeline quantity. Failed trials
// (e.g. an empty column after resampling) are excluded and counted; more
// than max_exclusion_fraction of them invalidates the whole result.
inline MonteCarloResult mc_capacity_distribution(const std::array<CoincidenceSet, 3>& expected,
                                                 double fidelity, const MonteCarloOptions& opt) {
    if (opt.trials < 8) throw data_error("mc_capacity_distribution: need at least 8 trials");
    if (std::abs(4.0 * fidelity - 1.0) <= 1e-6) {
        throw data_error("mc_capacity_distribution: fidelity too close to 1/4");
    }
    for (const auto& cs : expected) cs.validate();

    std::array<detail::Welford, 3> w_e0, w_e1, w_c;
    std::array<std::array<std::array<detail::Welford, 2>, 2>, 3> w_q;
    detail::Welford w_cd;
    long excluded = 0;

    for (long trial = 0; trial < opt.trials; ++trial) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(trial)));
        try {
            double cd = 0.0;
            std::array<AxisCapacity, 3> per_axis;
            std::array<TransitionMatrix, 3> raw;
            for (Axis ax : kAxes) {
                const auto i = axis_index(ax);
                const CoincidenceSet sampled = sample_counts(expected[i], rng);
                raw[i] = deconvolve_Q(sampled, fidelity);
                const TransitionMatrix clean = sanitize(raw[i], opt.mode);
                per_axis[i].errors = identify_errors(clean);
                per_axis[i].capacity = capacity_CB(per_axis[i].errors);
                cd = std::max(cd, per_axis[i].capacity);
            }
            for (Axis ax : kAxes) {
                const auto i = axis_index(ax);
                w_e0[i].add(per_axis[i].errors.eps0);
                w_e1[i].add(per_axis[i].errors.eps1);
                w_c[i].add(per_axis[i].capacity);
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        w_q[i][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].add(
                            raw[i](j, k));
            }
            w_cd.add(cd);
        } catch (const data_error&) {
            ++excluded;
        }
    }

    if (static_cast<double>(excluded) >
        opt.max_exclusion_fraction * static_cast<double>(opt.trials)) {
        throw numerical_error("mc_capacity_distribution: excluded trial fraction above threshold");
    }

    MonteCarloResult res;
    res.trials = opt.trials;
    res.excluded = excluded;
    res.seed = opt.seed;
    res.cd = w_cd.stat();
    for (Axis ax : kAxes) {
        const auto i = axis_index(ax);
        res.axes[i].eps0 = w_e0[i].stat();
        res.axes[i].eps1 = w_e1[i].stat();
        res.axes[i].capacity = w_c[i].stat();
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                res.axes[i].q[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    w_q[i][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].stat();
    }
    return res;
}

}  // namespace qcap
