#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "qcap/capacity.hpp"
#include "qcap/protocol.hpp"
#include "qcap/random.hpp"
#include "qcap/reconstruction.hpp"

using namespace qcap;
using Catch::Approx;

namespace {

CoincidenceSet make_counts(Axis axis, double c00, double c01, double c10, double c11) {
    CoincidenceSet cs;
    cs.axis = axis;
    cs.c = {{{c00, c01}, {c10, c11}}};
    cs.flux = 1.0;
    cs.integration_time = 1.0;
    return cs;
}

std::vector<KrausChannel> channel_zoo() {
    return {
        make_identity_channel(),
        make_pauli_channel(PauliParams::phase_damping(0.3)),
        make_pauli_channel(PauliParams::depolarizing(0.15)),
        make_amplitude_damping(0.4),
    };
}

TransitionMatrix matrix_from_errors(double e0, double e1) {
    TransitionMatrix Q;
    Q.axis = Axis::Z;
    Q.sanitized = SanitizeMode::Clamp;
    Q.q = {{{1.0 - e0, e1}, {e0, 1.0 - e1}}};
    return Q;
}

TransitionMatrix relabel(const TransitionMatrix& Q, bool swap_output, bool swap_input) {
    TransitionMatrix out = Q;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            out.q[static_cast<std::size_t>(swap_output ? 1 - j : j)]
                 [static_cast<std::size_t>(swap_input ? 1 - i : i)] =
                Q.q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return out;
}

}  // namespace

TEST_CASE("deconvolution at F = 1 reduces to column ratios") {
    const CoincidenceSet cs = make_counts(Axis::Z, 180.0, 30.0, 20.0, 170.0);
    const TransitionMatrix Q = deconvolve_Q(cs, 1.0);
    REQUIRE(Q(0, 0) == Approx(180.0 / 200.0).margin(1e-15));
    REQUIRE(Q(1, 0) == Approx(20.0 / 200.0).margin(1e-15));
    REQUIRE(Q(0, 1) == Approx(30.0 / 200.0).margin(1e-15));
    REQUIRE(Q.column_stochastic(1e-15));
}

TEST_CASE("y axis reads the swapped ancilla column") {
    // ideal probe through the identity channel: p(R,R) = 0 yet Q(R|R) = 1
    const CoincidenceSet cs =
        expected_counts(joint_probabilities(make_identity_channel(), 1.0, Axis::Y),
                        EfficiencyModel{}, 1.0e4, 10.0);
    REQUIRE(cs.c[0][0] == Approx(0.0).margin(1e-9));
    const TransitionMatrix Q = deconvolve_Q(cs, 1.0);
    REQUIRE(Q(0, 0) == Approx(1.0).margin(1e-12));
    REQUIRE(Q(1, 1) == Approx(1.0).margin(1e-12));
}

TEST_CASE("deconvolution is unbiased for Werner probes") {
    EfficiencyModel eff;
    for (const auto& ch : channel_zoo()) {
        for (Axis ax : kAxes) {
            const TransitionMatrix ideal =
                deconvolve_Q(expected_counts(joint_probabilities(ch, 1.0, ax), eff, 2.6e4, 10.0),
                             1.0);
            for (double F : {0.5, 0.7, 0.9, 0.979}) {
                const TransitionMatrix rec = deconvolve_Q(
                    expected_counts(joint_probabilities(ch, F, ax), eff, 2.6e4, 10.0), F);
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < 2; ++i)
                        REQUIRE(rec(j, i) == Approx(ideal(j, i)).margin(1e-10));
            }
        }
    }
}

TEST_CASE("identity channel reconstructs to the unit matrix") {
    const CoincidenceSet cs =
        expected_counts(joint_probabilities(make_identity_channel(), 0.7, Axis::Z),
                        EfficiencyModel{}, 2.6e4, 10.0);
    const TransitionMatrix Q = deconvolve_Q(cs, 0.7);
    REQUIRE(Q(0, 0) == Approx(1.0).margin(1e-12));
    REQUIRE(Q(1, 1) == Approx(1.0).margin(1e-12));
    REQUIRE(Q(1, 0) == Approx(0.0).margin(1e-12));
    REQUIRE(Q(0, 1) == Approx(0.0).margin(1e-12));
}

TEST_CASE("deconvolution is scale invariant") {
    const CoincidenceSet cs = make_counts(Axis::X, 812.0, 154.0, 96.0, 777.0);
    CoincidenceSet scaled = cs;
    for (auto& row : scaled.c)
        for (double& v : row) v *= 37.25;
    const TransitionMatrix a = deconvolve_Q(cs, 0.92);
    const TransitionMatrix b = deconvolve_Q(scaled, 0.92);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) REQUIRE(a(j, i) == Approx(b(j, i)).margin(1e-12));
}

TEST_CASE("deconvolution error paths") {
    const CoincidenceSet ok = make_counts(Axis::Z, 10.0, 10.0, 10.0, 10.0);
    REQUIRE_THROWS_AS(deconvolve_Q(ok, 0.25), data_error);
    REQUIRE_THROWS_AS(deconvolve_Q(ok, 0.2500001), data_error);

    const CoincidenceSet empty_col = make_counts(Axis::Z, 0.0, 10.0, 0.0, 10.0);
    REQUIRE_THROWS_AS(deconvolve_Q(empty_col, 1.0), data_error);

    CoincidenceSet bad = ok;
    bad.c[0][0] = -1.0;
    REQUIRE_THROWS_AS(deconvolve_Q(bad, 1.0), data_error);
}

TEST_CASE("sanitize") {
    // the published phase-damping row at q = 0 carries a -0.0163 entry
    TransitionMatrix Q;
    Q.axis = Axis::Z;
    Q.q = {{{1.0005, -0.0163}, {-0.0005, 1.0163}}};

    SECTION("paper-abs flips the sign and renormalizes the column") {
        const TransitionMatrix s = sanitize(Q, SanitizeMode::PaperAbs);
        REQUIRE(s(0, 1) == Approx(0.0163 / 1.0326).margin(1e-12));
        REQUIRE(s(1, 1) == Approx(1.0163 / 1.0326).margin(1e-12));
        REQUIRE(s(1, 0) == Approx(0.0005 / 1.0010).margin(1e-12));
        REQUIRE(s.column_stochastic(1e-12));
        REQUIRE(s.entries_in_range());
        REQUIRE(s.sanitized == SanitizeMode::PaperAbs);
    }

    SECTION("clamp zeroes the negatives") {
        const TransitionMatrix s = sanitize(Q, SanitizeMode::Clamp);
        REQUIRE(s(0, 1) == Approx(0.0).margin(1e-15));
        REQUIRE(s(1, 1) == Approx(1.0).margin(1e-15));
        REQUIRE(s(0, 0) == Approx(1.0).margin(1e-15));
        REQUIRE(s.column_stochastic(1e-12));
    }

    SECTION("clean matrices pass through unchanged") {
        const TransitionMatrix clean = matrix_from_errors(0.1, 0.3);
        for (SanitizeMode mode : {SanitizeMode::PaperAbs, SanitizeMode::Clamp}) {
            const TransitionMatrix s = sanitize(clean, mode);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) REQUIRE(s(j, i) == clean(j, i));
        }
    }

    SECTION("none passes through") {
        const TransitionMatrix s = sanitize(Q, SanitizeMode::None);
        REQUIRE(s(0, 1) == -0.0163);
    }
}

TEST_CASE("identify errors") {
    SECTION("identity matrix carries no errors") {
        const ErrorPair e = identify_errors(matrix_from_errors(0.0, 0.0));
        REQUIRE(e.eps0 == 0.0);
        REQUIRE(e.eps1 == 0.0);
        REQUIRE_FALSE(e.labeling.swap_output);
        REQUIRE_FALSE(e.labeling.swap_input);
    }

    SECTION("already canonical pair keeps the identity labeling") {
        const ErrorPair e = identify_errors(matrix_from_errors(0.1, 0.3));
        REQUIRE(e.eps0 == Approx(0.1).margin(1e-15));
        REQUIRE(e.eps1 == Approx(0.3).margin(1e-15));
        REQUIRE_FALSE(e.labeling.swap_output);
        REQUIRE_FALSE(e.labeling.swap_input);
    }

    SECTION("symmetric error above 1/2 relabels the output") {
        const ErrorPair e = identify_errors(matrix_from_errors(0.6, 0.6));
        REQUIRE(e.eps0 == Approx(0.4).margin(1e-15));
        REQUIRE(e.eps1 == Approx(0.4).margin(1e-15));
        REQUIRE(e.labeling.swap_output);
        REQUIRE_FALSE(e.labeling.swap_input);
    }

    SECTION("unsanitized entries are rejected") {
        TransitionMatrix Q;
        Q.q = {{{1.01, 0.3}, {-0.01, 0.7}}};
        REQUIRE_THROWS_AS(identify_errors(Q), data_error);
    }
}

TEST_CASE("capacity is invariant under the four relabelings") {
    Rng rng(77);
    for (int k = 0; k < 100; ++k) {
        const double e0 = rng.uniform();
        const double e1 = rng.uniform();
        if (std::abs(1.0 - e0 - e1) < 1e-3) continue;
        const TransitionMatrix Q = matrix_from_errors(e0, e1);
        const double base = capacity_CB(identify_errors(Q));
        for (bool so : {false, true}) {
            for (bool si : {false, true}) {
                const ErrorPair e = identify_errors(relabel(Q, so, si));
                REQUIRE(capacity_CB(e) == Approx(base).margin(1e-12));
                // identify_errors is idempotent over relabelings: the
                // canonical pair itself is labeling independent
                const ErrorPair again = identify_errors(matrix_from_errors(e.eps0, e.eps1));
                REQUIRE(again.eps0 == Approx(e.eps0).margin(1e-15));
                REQUIRE(again.eps1 == Approx(e.eps1).margin(1e-15));
            }
        }
    }
}
