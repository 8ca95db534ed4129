#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qcap/binary_channel.hpp"
#include "qcap/errors.hpp"
#include "qcap/protocol.hpp"

namespace qcap {

// From coincidence counts to deconvolved transition matrices and the
// canonical binary-channel error pair.

// The y basis carries the transposition of the detection identity: the
// ancilla clicking L heralds logical input R and vice versa. This single
// function owns that convention; everything else indexes logically.
inline int physical_input_index(Axis axis, int logical_input) {
    return axis == Axis::Y ? 1 - logical_input : logical_input;
}

// Unbiased joint-probability deconvolution (physical ancilla labels):
//   p_{F=1}(j,i) = [(1+2F) p_F(j,i) - 2(1-F) p_F(j, i xor 1)] / (4F-1).
inline std::array<std::array<double, 2>, 2> deconvolve_joint(
    const std::array<std::array<double, 2>, 2>& p, double fidelity) {
    if (std::abs(4.0 * fidelity - 1.0) <= 1e-6) {
        throw data_error("deconvolve_joint: fidelity too close to 1/4, deconvolution singular");
    }
    const double a = 1.0 + 2.0 * fidelity;
    const double b = 2.0 * (1.0 - fidelity);
    const double d = 4.0 * fidelity - 1.0;
    std::array<std::array<double, 2>, 2> out{};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            out[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                (a * p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                 b * p[static_cast<std::size_t>(j)][static_cast<std::size_t>(1 - i)]) /
                d;
    return out;
}

// Transition matrix from raw coincidences. For each logical input the
// numerator/denominator ratios are the ones written out per axis in the
// count-to-probability formulas; the second row is the column complement.
//   Q(j0|in) = [(1+2F) C(j0, m) - 2(1-F) C(j0, m^1)] /
//              [(1+2F) (C(0,m)+C(1,m)) - 2(1-F) (C(0,m^1)+C(1,m^1))]
// with m the physical ancilla column for that logical input (swapped for y).
inline TransitionMatrix deconvolve_Q(const CoincidenceSet& counts, double fidelity) {
    counts.validate();
    if (std::abs(4.0 * fidelity - 1.0) <= 1e-6) {
        throw data_error("deconvolve_Q: fidelity too close to 1/4, deconvolution singular");
    }
    const double a = 1.0 + 2.0 * fidelity;
    const double b = 2.0 * (1.0 - fidelity);

    TransitionMatrix Q;
    Q.axis = counts.axis;
    Q.sanitized = SanitizeMode::None;
    for (int input = 0; input < 2; ++input) {
        const auto m = static_cast<std::size_t>(physical_input_index(counts.axis, input));
        const std::size_t n = 1 - m;
        const double col_m = counts.c[0][m] + counts.c[1][m];
        const double col_n = counts.c[0][n] + counts.c[1][n];
        if (col_m == 0.0) {
            throw data_error(std::string("deconvolve_Q: no counts for input ") +
                             std::to_string(input) + " on axis " + axis_name(counts.axis));
        }
        const double denom = a * col_m - b * col_n;
        if (denom <= 0.0) {
            throw numerical_error("deconvolve_Q: nonpositive deconvolved column weight");
        }
        const double q0 = (a * counts.c[0][m] - b * counts.c[0][n]) / denom;
        Q.q[0][static_cast<std::size_t>(input)] = q0;
        Q.q[1][static_cast<std::size_t>(input)] = 1.0 - q0;
    }
    return Q;
}

// paper-abs: negative entries to their absolute values, affected columns
// renormalized (this is what produces the systematic offset below unity
// on otherwise clean z data). clamp: negatives to zero, renormalize.
// none: pass-through.
inline TransitionMatrix sanitize(const TransitionMatrix& Q, SanitizeMode mode) {
    TransitionMatrix out = Q;
    out.sanitized = mode;
    if (mode == SanitizeMode::None) return out;
    for (std::size_t i = 0; i < 2; ++i) {
        bool touched = false;
        for (std::size_t j = 0; j < 2; ++j) {
            if (out.q[j][i] < 0.0) {
                out.q[j][i] = mode == SanitizeMode::PaperAbs ? -out.q[j][i] : 0.0;
                touched = true;
            }
        }
        if (touched) {
            const double s = out.q[0][i] + out.q[1][i];
            if (s <= 0.0) throw data_error("sanitize: column vanished");
            out.q[0][i] /= s;
            out.q[1][i] /= s;
        }
    }
    return out;
}

// Search the four input/output relabelings for the one meeting the
// canonical convention (eps0 is the smallest error entry); ties prefer
// identity, then output swap, then input swap. The capacity is invariant
// under the choice.
inline ErrorPair identify_errors(const TransitionMatrix& Q) {
    if (!Q.entries_in_range(1e-9) || !Q.column_stochastic(1e-9)) {
        throw data_error("identify_errors: matrix must be sanitized and column stochastic");
    }
    const double q10 = Q(1, 0);
    const double q01 = Q(0, 1);
    const double q00 = Q(0, 0);
    const double q11 = Q(1, 1);
    const std::array<ErrorPair, 4> candidates{
        ErrorPair{q10, q01, {false, false}},  // identity
        ErrorPair{q00, q11, {true, false}},   // output swap
        ErrorPair{q11, q00, {false, true}},   // input swap
        ErrorPair{q01, q10, {true, true}},    // both
    };
    for (const auto& cand : candidates) {
        if (cand.canonical(1e-12)) return cand;
    }
    // Entries within fp noise of the convention boundaries: retry with a
    // loose tolerance and clamp.
    for (auto cand : candidates) {
        if (cand.canonical(1e-9)) {
            cand.eps0 = std::clamp(cand.eps0, 0.0, 0.5);
            cand.eps1 = std::clamp(cand.eps1, 0.0, 1.0);
            return cand;
        }
    }
    throw numerical_error("identify_errors: no relabeling satisfies the canonical convention");
}

}  // namespace qcap
