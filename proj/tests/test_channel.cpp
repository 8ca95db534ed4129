#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "qcap/channel.hpp"
#include "qcap/protocol.hpp"
#include "qcap/random.hpp"
#include "qcap/reconstruction.hpp"

using namespace qcap;
using Catch::Approx;

namespace {

// value frozen from a 10^6-point grid maximization of the Holevo objective
constexpr double kHolevoAdHalf = 0.47172939059849456;

Density2 random_density(Rng& rng) {
    cplx a(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    cplx b(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    const double w = rng.uniform();
    Mat2 m;
    m(0, 0) = w * std::norm(a) + (1.0 - w) * 0.5;
    m(0, 1) = w * a * std::conj(b);
    m(1, 0) = w * b * std::conj(a);
    m(1, 1) = w * std::norm(b) + (1.0 - w) * 0.5;
    return Density2(m);
}

std::vector<KrausChannel> channel_zoo() {
    return {
        make_identity_channel(),
        make_pauli_channel(PauliParams::phase_damping(0.3)),
        make_pauli_channel(PauliParams::depolarizing(0.15)),
        make_pauli_channel({0.2, 0.1, 0.3}),
        make_amplitude_damping(0.4),
    };
}

// Eq.-(4)-style direct transition matrix: Q(j|i) = <j|E(|i><i|)|j>.
TransitionMatrix direct_transition(const KrausChannel& ch, Axis axis) {
    const QubitBasis basis = pauli_basis(axis);
    TransitionMatrix Q;
    Q.axis = axis;
    Q.sanitized = SanitizeMode::Clamp;
    for (int i = 0; i < 2; ++i) {
        const Density2 in(projector(basis.kets[static_cast<std::size_t>(i)]));
        const Density2 out = apply(ch, in);
        for (int j = 0; j < 2; ++j) {
            const Mat2 pj = projector(basis.kets[static_cast<std::size_t>(j)]);
            cplx v = 0.0;
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) v += pj(r, c) * out(c, r);
            Q.q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                std::max(0.0, v.real());
        }
    }
    return Q;
}

}  // namespace

TEST_CASE("pauli channel construction") {
    const KrausChannel id = make_pauli_channel({});
    REQUIRE(id.kraus.size() == 1);
    REQUIRE(id.kraus[0].max_abs_diff(Mat2::identity()) == 0.0);

    const KrausChannel pd = make_pauli_channel(PauliParams::phase_damping(0.36));
    REQUIRE(pd.kraus.size() == 2);
    REQUIRE(pd.kraus[0].max_abs_diff(cplx{std::sqrt(0.64)} * Mat2::identity()) < 1e-15);
    REQUIRE(pd.kraus[1].max_abs_diff(cplx{std::sqrt(0.36)} * pauli_z()) < 1e-15);

    REQUIRE(make_pauli_channel(PauliParams::depolarizing(0.2)).kraus.size() == 4);

    REQUIRE_THROWS_AS(make_pauli_channel({-0.1, 0.0, 0.0}), data_error);
    REQUIRE_THROWS_AS(make_pauli_channel({0.5, 0.4, 0.3}), data_error);
}

TEST_CASE("amplitude damping construction") {
    REQUIRE(make_amplitude_damping(0.0).kraus.size() == 1);

    const KrausChannel ad = make_amplitude_damping(0.5);
    REQUIRE(ad.kraus[0](0, 0) == cplx{1.0});
    REQUIRE(std::abs(ad.kraus[0](1, 1) - std::sqrt(0.5)) < 1e-15);
    REQUIRE(std::abs(ad.kraus[1](0, 1) - std::sqrt(0.5)) < 1e-15);

    REQUIRE_THROWS_AS(make_amplitude_damping(-0.01), data_error);
    REQUIRE_THROWS_AS(make_amplitude_damping(1.01), data_error);
}

TEST_CASE("completeness holds for every constructed channel") {
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        double qx = 0.5 * rng.uniform();
        double qy = 0.3 * rng.uniform();
        double qz = 0.2 * rng.uniform();
        REQUIRE(make_pauli_channel({qx, qy, qz}).completeness_deviation() < 1e-10);
        REQUIRE(make_amplitude_damping(rng.uniform()).completeness_deviation() < 1e-10);
    }
}

TEST_CASE("apply") {
    Rng rng(31);
    const Density2 rho = random_density(rng);

    REQUIRE(apply(make_identity_channel(), rho).matrix().max_abs_diff(rho.matrix()) < 1e-15);

    // q = 1/4 depolarizes everything to I/2
    const Density2 out = apply(make_pauli_channel(PauliParams::depolarizing(0.25)), rho);
    REQUIRE(out.matrix().max_abs_diff(cplx{0.5} * Mat2::identity()) < 1e-12);

    Mat2 one;
    one(1, 1) = 1.0;
    for (double eta : {0.0, 0.3, 0.7, 1.0}) {
        const Density2 decayed = apply(make_amplitude_damping(eta), Density2(one));
        REQUIRE(decayed(0, 0).real() == Approx(eta).margin(1e-12));
        REQUIRE(decayed(1, 1).real() == Approx(1.0 - eta).margin(1e-12));
    }
}

TEST_CASE("apply preserves trace and positivity on random states") {
    Rng rng(53);
    for (const KrausChannel& ch : channel_zoo()) {
        for (int k = 0; k < 1000; ++k) {
            const Density2 out = apply(ch, random_density(rng));
            REQUIRE(std::abs(out.matrix().trace() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("apply_extended") {
    const Density4 bell(bell_phi_plus_projector());
    REQUIRE(apply_extended(make_identity_channel(), bell)
                .matrix()
                .max_abs_diff(bell.matrix()) < 1e-15);

    // full decay on the system leaves |0><0| x I/2
    const Density4 out = apply_extended(make_amplitude_damping(1.0), bell);
    Mat2 ground;
    ground(0, 0) = 1.0;
    REQUIRE(out.matrix().max_abs_diff(kron(ground, cplx{0.5} * Mat2::identity())) < 1e-12);

    // phase damping leaves the computational diagonal of a Werner state alone
    const WernerState w = werner_state(0.83);
    const Density4 dephased =
        apply_extended(make_pauli_channel(PauliParams::phase_damping(0.4)), w.rho);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(std::abs(dephased(i, i) - w.rho(i, i)) < 1e-12);
    }
}

TEST_CASE("theoretical error profiles") {
    const ChannelErrorProfile id = theoretical_errors(ChannelTag{PauliParams{}});
    for (Axis ax : kAxes) {
        REQUIRE(id[axis_index(ax)].eps0 == 0.0);
        REQUIRE(id[axis_index(ax)].eps1 == 0.0);
    }

    for (double eta : {0.1, 0.5, 0.9}) {
        const ChannelErrorProfile ad = theoretical_errors(ChannelTag{AmplitudeDamping{eta}});
        const double s = (1.0 - std::sqrt(1.0 - eta)) / 2.0;
        REQUIRE(ad[axis_index(Axis::X)].eps0 == Approx(s).margin(1e-15));
        REQUIRE(ad[axis_index(Axis::Y)].eps1 == Approx(s).margin(1e-15));
        REQUIRE(ad[axis_index(Axis::Z)].eps0 == 0.0);
        REQUIRE(ad[axis_index(Axis::Z)].eps1 == Approx(eta).margin(1e-15));
    }

    const ChannelErrorProfile p = theoretical_errors(ChannelTag{PauliParams{0.3, 0.35, 0.3}});
    REQUIRE(p[axis_index(Axis::Z)].eps0 ==
            Approx(std::min(0.65, 1.0 - 0.65)).margin(1e-15));  // min{qx+qy, 1-(qx+qy)}
    REQUIRE(p[axis_index(Axis::X)].eps0 == Approx(0.35).margin(1e-15));
}

TEST_CASE("closed-form errors match direct channel simulation") {
    const std::vector<ChannelTag> tags{
        ChannelTag{PauliParams::phase_damping(0.3)},
        ChannelTag{PauliParams::depolarizing(0.15)},
        ChannelTag{PauliParams{0.2, 0.1, 0.3}},
        ChannelTag{PauliParams{0.5, 0.3, 0.2}},  // relabeling kicks in, s > 1/2
        ChannelTag{AmplitudeDamping{0.4}},
    };
    for (const auto& tag : tags) {
        const KrausChannel ch =
            std::holds_alternative<PauliParams>(tag)
                ? make_pauli_channel(std::get<PauliParams>(tag))
                : make_amplitude_damping(std::get<AmplitudeDamping>(tag).eta);
        const ChannelErrorProfile prof = theoretical_errors(tag);
        for (Axis ax : kAxes) {
            const ErrorPair direct = identify_errors(direct_transition(ch, ax));
            REQUIRE(direct.eps0 == Approx(prof[axis_index(ax)].eps0).margin(1e-12));
            REQUIRE(direct.eps1 == Approx(prof[axis_index(ax)].eps1).margin(1e-12));
        }
    }
}

TEST_CASE("theoretical detected capacity") {
    const auto depol = theoretical_detected_capacity(ChannelTag{PauliParams::depolarizing(0.25)});
    REQUIRE(depol.cd == Approx(0.0).margin(1e-12));  // 1 - H(1/2)

    const auto pd = theoretical_detected_capacity(ChannelTag{PauliParams::phase_damping(0.3)});
    REQUIRE(pd.cd == 1.0);
    REQUIRE(pd.winners == std::vector<Axis>{Axis::Z});

    const auto ad = theoretical_detected_capacity(ChannelTag{AmplitudeDamping{0.5}});
    REQUIRE(ad.cd == Approx(0.39912396330714384).margin(1e-12));
    REQUIRE(ad.winners == std::vector<Axis>{Axis::X, Axis::Y});
}

TEST_CASE("holevo capacity of amplitude damping") {
    REQUIRE(holevo_capacity_AD(0.0) == Approx(1.0).margin(1e-12));
    REQUIRE(holevo_capacity_AD(1.0) == Approx(0.0).margin(1e-12));
    REQUIRE(holevo_capacity_AD(0.5) == Approx(kHolevoAdHalf).margin(1e-9));

    // monotone non-increasing, and never below the detected capacity
    double prev = 2.0;
    for (int k = 0; k <= 100; ++k) {
        const double eta = k / 100.0;
        const double c1 = holevo_capacity_AD(eta);
        REQUIRE(c1 <= prev + 1e-12);
        const double cd = theoretical_detected_capacity(ChannelTag{AmplitudeDamping{eta}}).cd;
        REQUIRE(c1 >= cd - 1e-9);
        prev = c1;
    }
}
