#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "qcap/protocol.hpp"
#include "qcap/qubit_algebra.hpp"
#include "qcap/random.hpp"

using namespace qcap;
using Catch::Approx;

namespace {

Mat2 random_mat2(Rng& rng) {
    Mat2 m;
    for (auto& v : m.a) v = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return m;
}

Mat2 random_density2(Rng& rng) {
    // random pure state mixed with I/2
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
    return m;
}

}  // namespace

TEST_CASE("kron basics") {
    REQUIRE(kron(Mat2::identity(), Mat2::identity()).max_abs_diff(Mat4::identity()) == 0.0);

    const Mat4 zz = kron(pauli_z(), pauli_z());
    Mat4 expected;
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    expected(2, 2) = -1.0;
    expected(3, 3) = 1.0;
    REQUIRE(zz.max_abs_diff(expected) == 0.0);

    const Density4 bell(bell_phi_plus_projector());
    REQUIRE(expectation(kron(pauli_x(), Mat2::identity()), bell) == Approx(0.0).margin(1e-12));
}

TEST_CASE("kron is bilinear and multiplicative on traces") {
    Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        const Mat2 a = random_mat2(rng);
        const Mat2 b = random_mat2(rng);
        const Mat2 c = random_mat2(rng);
        REQUIRE((kron(a + b, c) - (kron(a, c) + kron(b, c))).max_abs_diff(Mat4::zero()) < 1e-12);
        REQUIRE(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
    }
}

TEST_CASE("pauli bases") {
    const double s = 1.0 / std::sqrt(2.0);

    const QubitBasis z = pauli_basis(Axis::Z);
    REQUIRE(z.kets[0] == Vec2{1.0, 0.0});
    REQUIRE(z.kets[1] == Vec2{0.0, 1.0});

    const QubitBasis x = pauli_basis(Axis::X);
    REQUIRE(std::abs(x.kets[0][0] - s) < 1e-15);
    REQUIRE(std::abs(x.kets[0][1] - s) < 1e-15);
    REQUIRE(std::abs(x.kets[1][1] + s) < 1e-15);

    const QubitBasis y = pauli_basis(Axis::Y);
    REQUIRE(std::abs(y.kets[0][1] - cplx(0.0, -s)) < 1e-15);  // R = (|H> - i|V>)/sqrt(2)
    REQUIRE(std::abs(y.kets[1][1] - cplx(0.0, s)) < 1e-15);   // L = (|H> + i|V>)/sqrt(2)

    for (Axis ax : kAxes) {
        const QubitBasis b = pauli_basis(ax);
        REQUIRE(basis_orthonormal(b));
        const Mat2 sum = projector(b.kets[0]) + projector(b.kets[1]);
        REQUIRE(sum.max_abs_diff(Mat2::identity()) < 1e-12);
    }

    REQUIRE((pauli_x() * pauli_x()).max_abs_diff(Mat2::identity()) == 0.0);
    REQUIRE((pauli_y() * pauli_y()).max_abs_diff(Mat2::identity()) == 0.0);
    REQUIRE((pauli_z() * pauli_z()).max_abs_diff(Mat2::identity()) == 0.0);
}

TEST_CASE("expectation values") {
    const Density4 bell(bell_phi_plus_projector());
    REQUIRE(expectation(Mat4::identity(), bell) == Approx(1.0).margin(1e-12));
    REQUIRE(expectation(kron(pauli_z(), pauli_z()), bell) == Approx(1.0).margin(1e-12));

    for (double F : {0.3, 0.7, 0.979}) {
        const WernerState w = werner_state(F);
        REQUIRE(expectation(kron(pauli_z(), pauli_z()), w.rho) ==
                Approx((4.0 * F - 1.0) / 3.0).margin(1e-12));
    }

    Mat4 not_hermitian;
    not_hermitian(0, 1) = 1.0;
    REQUIRE_THROWS_AS(expectation(not_hermitian, bell), data_error);
}

TEST_CASE("density validation") {
    Mat2 mixed;
    mixed(0, 0) = 0.5;
    mixed(1, 1) = 0.5;
    REQUIRE_NOTHROW(validate_density(mixed));

    Mat2 negative;
    negative(0, 0) = 1.2;
    negative(1, 1) = -0.2;
    REQUIRE_THROWS_AS(validate_density(negative), data_error);

    REQUIRE_NOTHROW(validate_density(bell_phi_plus_projector()));

    Mat2 traceless;
    traceless(0, 0) = 0.7;
    traceless(1, 1) = 0.7;
    REQUIRE_THROWS_AS(validate_density(traceless), data_error);

    Mat2 skew;
    skew(0, 0) = 0.5;
    skew(1, 1) = 0.5;
    skew(0, 1) = cplx(0.0, 0.3);
    skew(1, 0) = cplx(0.0, 0.3);  // not the conjugate
    REQUIRE_THROWS_AS(validate_density(skew), data_error);
}

TEST_CASE("4x4 eigenvalues via Jacobi") {
    // Werner spectrum: F on the Bell projector, (1-F)/3 threefold.
    for (double F : {0.0, 0.25, 0.6, 0.979, 1.0}) {
        const WernerState w = werner_state(F);
        auto ev = hermitian_eigenvalues(w.rho.matrix());
        std::sort(ev.begin(), ev.end());
        REQUIRE(ev[3] == Approx(std::max(F, (1.0 - F) / 3.0)).margin(1e-12));
        REQUIRE(ev[0] == Approx(std::min(F, (1.0 - F) / 3.0)).margin(1e-12));
        REQUIRE(ev[0] + ev[1] + ev[2] + ev[3] == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("random states stay valid") {
    Rng rng(23);
    for (int k = 0; k < 200; ++k) {
        REQUIRE_NOTHROW(validate_density(random_density2(rng)));
    }
}
