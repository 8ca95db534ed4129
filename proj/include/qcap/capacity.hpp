#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "qcap/binary_channel.hpp"
#include "qcap/errors.hpp"

namespace qcap {

// Closed-form capacity of the binary asymmetric channel, the optimal
// input prior, general mutual information, and an independent grid
// oracle. All capacities are in bits (log base 2).

inline constexpr double kDegenerateTol = 1e-9;  // 1 - eps0 - eps1 below this => C = 0

inline double binary_entropy(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12) {
        throw data_error("binary_entropy: probability out of [0,1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

// I(X;Y) = sum_{x,y} p_x Q(y|x) log2[ Q(y|x) / sum_x' p_x' Q(y|x') ],
// zero-probability terms contributing zero.
inline double mutual_information(const TransitionMatrix& Q, const PriorDistribution& prior) {
    const double p[2] = {prior.p0, prior.p1()};
    double info = 0.0;
    for (int y = 0; y < 2; ++y) {
        const double marginal = p[0] * Q(y, 0) + p[1] * Q(y, 1);
        for (int x = 0; x < 2; ++x) {
            const double w = p[x] * Q(y, x);
            if (w > 0.0 && marginal > 0.0) info += w * std::log2(Q(y, x) / marginal);
        }
    }
    return info;
}

namespace detail {

// log2 of z = 2^{(H[e0]-H[e1]) / (1-e0-e1)}; kept in log space since the
// exponent diverges toward the degenerate line.
inline double log2_z(double e0, double e1, double denom) {
    return (binary_entropy(e0) - binary_entropy(e1)) / denom;
}

inline double log2_one_plus_exp2(double l) {
    // log2(1 + 2^l) without overflow for large |l|
    if (l > 50.0) return l + std::log1p(std::exp2(-l)) / M_LN2;
    return std::log1p(std::exp2(l)) / M_LN2;
}

}  // namespace detail

// Maximizing prior for the canonical error pair. Degenerate channels
// (eps0 + eps1 -> 1) carry no information; the uniform prior is returned
// with the degeneracy flag set.
inline PriorDistribution optimal_prior(const ErrorPair& e) {
    if (!e.canonical()) throw data_error("optimal_prior: error pair violates canonical convention");
    const double denom = 1.0 - e.eps0 - e.eps1;
    if (denom < kDegenerateTol) return {0.5, true};
    const double z = std::exp2(detail::log2_z(e.eps0, e.eps1, denom));
    double p0 = (1.0 - e.eps1 * (1.0 + z)) / (denom * (1.0 + z));
    if (p0 < -kDegenerateTol || p0 > 1.0 + kDegenerateTol) {
        throw numerical_error("optimal_prior: maximizer escaped [0,1]");
    }
    return {std::clamp(p0, 0.0, 1.0), false};
}

// C_B(eps0, eps1) = log2[1+z] + eps0/(1-eps0-eps1) H[eps1]
//                 - (1-eps1)/(1-eps0-eps1) H[eps0].
inline double capacity_CB(const ErrorPair& e) {
    if (!e.canonical()) throw data_error("capacity_CB: error pair violates canonical convention");
    const double denom = 1.0 - e.eps0 - e.eps1;
    if (denom < kDegenerateTol) return 0.0;
    const double lz = detail::log2_z(e.eps0, e.eps1, denom);
    const double c = detail::log2_one_plus_exp2(lz) +
                     (e.eps0 / denom) * binary_entropy(e.eps1) -
                     ((1.0 - e.eps1) / denom) * binary_entropy(e.eps0);
    return std::clamp(c, 0.0, 1.0);
}

struct AxisCapacity {
    ErrorPair errors;
    PriorDistribution prior;
    double capacity = 0.0;  // bits
};

struct CapacityStat {
    double mean = 0.0;
    double stddev = 0.0;
};

struct CapacityUncertainty {
    std::array<CapacityStat, 3> eps0;      // indexed by axis
    std::array<CapacityStat, 3> eps1;
    std::array<CapacityStat, 3> capacity;
    CapacityStat cd;
};

struct CapacityReport {
    std::array<AxisCapacity, 3> axes;  // indexed by axis_index
    double cd = 0.0;                   // bits
    Axis winner = Axis::Z;
    std::vector<Axis> tie_set;         // all axes within tie tolerance of cd
    std::optional<CapacityUncertainty> mc;
};

// C^(alpha) per axis plus the witness C_D = max_alpha C^(alpha).
// Ties resolved in the order z, x, y and reported as a tie set.
inline CapacityReport detected_capacity(const std::array<ErrorPair, 3>& per_axis) {
    CapacityReport rep;
    for (Axis ax : kAxes) {
        const auto i = axis_index(ax);
        rep.axes[i].errors = per_axis[i];
        rep.axes[i].prior = optimal_prior(per_axis[i]);
        rep.axes[i].capacity = capacity_CB(per_axis[i]);
    }
    rep.cd = std::max({rep.axes[0].capacity, rep.axes[1].capacity, rep.axes[2].capacity});
    for (Axis ax : kAxes) {
        if (rep.axes[axis_index(ax)].capacity >= rep.cd - 1e-12) rep.tie_set.push_back(ax);
    }
    rep.winner = rep.tie_set.front();
    return rep;
}

struct BruteForceResult {
    double capacity = 0.0;
    PriorDistribution argmax;
};

// Independent oracle: maximize the mutual information over p0 on a
// uniform grid, then refine once around the incumbent.
inline BruteForceResult brute_force_capacity(const TransitionMatrix& Q, double resolution = 1e-3) {
    if (resolution <= 0.0 || resolution >= 1.0) throw data_error("brute_force_capacity: bad resolution");

    auto scan = [&Q](double lo, double hi, int points, double& best_p) {
        double best = -1.0;
        for (int k = 0; k <= points; ++k) {
            const double p0 = lo + (hi - lo) * static_cast<double>(k) / points;
            const double v = mutual_information(Q, {p0, false});
            if (v > best) {
                best = v;
                best_p = p0;
            }
        }
        return best;
    };

    const int coarse = static_cast<int>(std::lround(1.0 / resolution));
    double p_best = 0.5;
    double c_best = scan(0.0, 1.0, coarse, p_best);

    const double lo = std::max(0.0, p_best - resolution);
    const double hi = std::min(1.0, p_best + resolution);
    double p_fine = p_best;
    const double c_fine = scan(lo, hi, 2000, p_fine);
    if (c_fine > c_best) {
        c_best = c_fine;
        p_best = p_fine;
    }
    return {std::max(0.0, c_best), {p_best, false}};
}

}  // namespace qcap
