#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qcap/errors.hpp"
#include "qcap/qubit_algebra.hpp"

namespace qcap {

// Domain types for the induced binary classical channels. Kept in one
// header because both the reconstruction and the capacity layers speak
// in these terms.

enum class SanitizeMode { None = 0, PaperAbs = 1, Clamp = 2 };

inline const char* sanitize_mode_name(SanitizeMode m) {
    switch (m) {
        case SanitizeMode::None: return "none";
        case SanitizeMode::PaperAbs: return "paper-abs";
        case SanitizeMode::Clamp: return "clamp";
    }
    return "?";
}

inline SanitizeMode parse_sanitize_mode(const std::string& s) {
    if (s == "none") return SanitizeMode::None;
    if (s == "paper-abs") return SanitizeMode::PaperAbs;
    if (s == "clamp") return SanitizeMode::Clamp;
    throw data_error("unknown sanitize mode: " + s);
}

// Conditional probabilities q[j][i] = Q(output j | input i) for one
// measurement axis. Columns sum to one by construction; individual
// entries may leave [0,1] until sanitized.
struct TransitionMatrix {
    Axis axis = Axis::Z;
    std::array<std::array<double, 2>, 2> q{};
    SanitizeMode sanitized = SanitizeMode::None;

    double operator()(int j, int i) const { return q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }

    double column_sum(int i) const { return q[0][static_cast<std::size_t>(i)] + q[1][static_cast<std::size_t>(i)]; }

    bool column_stochastic(double tol = 1e-9) const {
        return std::abs(column_sum(0) - 1.0) <= tol && std::abs(column_sum(1) - 1.0) <= tol;
    }

    bool entries_in_range(double tol = 1e-12) const {
        for (const auto& col : {0, 1})
            for (const auto& row : {0, 1})
                if (q[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] < -tol ||
                    q[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] > 1.0 + tol)
                    return false;
        return true;
    }
};

// Which of the four input/output bit relabelings maps raw entries onto
// the canonical error pair.
struct Relabeling {
    bool swap_output = false;
    bool swap_input = false;
};

// Canonical binary-channel errors: eps0 = P(1|0), eps1 = P(0|1) after
// relabeling so that 0 <= eps0 <= 1/2, eps0 <= eps1, eps0 <= 1 - eps1.
struct ErrorPair {
    double eps0 = 0.0;
    double eps1 = 0.0;
    Relabeling labeling{};

    bool canonical(double tol = 1e-9) const {
        return eps0 >= -tol && eps0 <= 0.5 + tol && eps0 <= eps1 + tol &&
               eps0 <= 1.0 - eps1 + tol && eps1 <= 1.0 + tol;
    }
};

struct PriorDistribution {
    double p0 = 0.5;
    bool degenerate = false;

    double p1() const { return 1.0 - p0; }
};

}  // namespace qcap
