#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>

#include "qcap/errors.hpp"

namespace qcap {

using cplx = std::complex<double>;

inline constexpr double kDensityTol = 1e-10;   // hermiticity / trace / positivity
inline constexpr double kBasisTol = 1e-12;     // basis orthonormality

// Fixed-size complex square matrix, row-major. Only N = 2 and N = 4 are
// used: single-qubit operators and system-plus-ancilla operators.
template <std::size_t N>
struct Matrix {
    std::array<cplx, N * N> a{};

    static constexpr std::size_t dim() { return N; }

    cplx& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix zero() { return Matrix{}; }

    Matrix adjoint() const {
        Matrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    Matrix transpose() const {
        Matrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = (*this)(c, r);
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) a[i] += o.a[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) a[i] -= o.a[i];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& v : a) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
    friend Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
    friend Matrix operator*(cplx s, Matrix m) { return m *= s; }

    friend Matrix operator*(const Matrix& l, const Matrix& r) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx lik = l(i, k);
                if (lik == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) m(i, j) += lik * r(k, j);
            }
        return m;
    }

    // max_ij |a_ij - conj(a_ji)|
    double hermiticity_deviation() const {
        double d = 0.0;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c)
                d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return d;
    }

    double max_abs_diff(const Matrix& o) const {
        double d = 0.0;
        for (std::size_t i = 0; i < N * N; ++i) d = std::max(d, std::abs(a[i] - o.a[i]));
        return d;
    }
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;
using Vec2 = std::array<cplx, 2>;

// Pauli operators -----------------------------------------------------------

inline Mat2 pauli_x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline Mat2 pauli_y() {
    Mat2 m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

inline Mat2 pauli_z() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

// Kronecker product, system factor first: (a ⊗ b)_{(i s),(j t)} = a_ij b_st.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t s = 0; s < 2; ++s)
                for (std::size_t t = 0; t < 2; ++t)
                    m(2 * i + s, 2 * j + t) = a(i, j) * b(s, t);
    return m;
}

// Measurement bases ----------------------------------------------------------

enum class Axis : int { Z = 0, X = 1, Y = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::Z, Axis::X, Axis::Y};

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::Z: return "z";
        case Axis::X: return "x";
        case Axis::Y: return "y";
    }
    return "?";
}

inline std::size_t axis_index(Axis a) { return static_cast<std::size_t>(a); }

// Ordered eigenbasis of one Pauli observable; the first ket is logical 0.
struct QubitBasis {
    Axis axis;
    std::array<Vec2, 2> kets;
};

// z: computational {H, V}; x: diagonal {+, -}; y: circular {R, L} with
// R = (|H> - i|V>)/sqrt(2) listed first.
inline QubitBasis pauli_basis(Axis axis) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (axis) {
        case Axis::Z:
            return {axis, {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}}};
        case Axis::X:
            return {axis, {Vec2{s, s}, Vec2{s, -s}}};
        case Axis::Y:
            return {axis, {Vec2{s, cplx(0.0, -s)}, Vec2{s, cplx(0.0, s)}}};
    }
    throw data_error("pauli_basis: unknown axis");
}

inline Mat2 projector(const Vec2& v) {
    Mat2 m;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) m(r, c) = v[r] * std::conj(v[c]);
    return m;
}

inline bool basis_orthonormal(const QubitBasis& b, double tol = kBasisTol) {
    auto dot = [](const Vec2& u, const Vec2& v) {
        return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
    };
    return std::abs(dot(b.kets[0], b.kets[0]) - 1.0) <= tol &&
           std::abs(dot(b.kets[1], b.kets[1]) - 1.0) <= tol &&
           std::abs(dot(b.kets[0], b.kets[1])) <= tol;
}

// Eigenvalues ----------------------------------------------------------------

// Hermitian 2x2 eigenvalues from the characteristic polynomial.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double h = (a + d) / 2.0;
    const double r = std::sqrt(std::max(0.0, (a - d) * (a - d) / 4.0 + std::norm(m(0, 1))));
    return {h - r, h + r};
}

// Hermitian 4x4 eigenvalues by cyclic Jacobi sweeps with complex rotations.
inline std::array<double, 4> hermitian_eigenvalues(const Mat4& m) {
    Mat4 a = m;
    // symmetrize away fp-level asymmetry up front
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const cplx v = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = v;
        }
    double scale = 0.0;
    for (const auto& v : a.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {0.0, 0.0, 0.0, 0.0};

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t q = p + 1; q < 4; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Rotation diagonalizing the (p,q) 2x2 block:
                // phase e^{i phi} = apq/|apq|, angle from the real problem.
                const cplx phase = apq / std::abs(apq);
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta);
                const cplx s = std::sin(theta) * phase;
                for (std::size_t k = 0; k < 4; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + std::conj(s) * akq;
                    a(k, q) = -s * akp + c * akq;
                }
                for (std::size_t k = 0; k < 4; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + s * aqk;
                    a(q, k) = -std::conj(s) * apk + c * aqk;
                }
            }
        }
    }
    return {a(0, 0).real(), a(1, 1).real(), a(2, 2).real(), a(3, 3).real()};
}

// Density matrices -----------------------------------------------------------

template <std::size_t N>
struct DensityDiagnostics {
    double hermiticity_deviation = 0.0;
    double trace_deviation = 0.0;
    double min_eigenvalue = 0.0;

    bool valid(double tol = kDensityTol) const {
        return hermiticity_deviation <= tol && trace_deviation <= tol &&
               min_eigenvalue >= -tol;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "hermiticity_dev=" << hermiticity_deviation
           << " trace_dev=" << trace_deviation << " min_eig=" << min_eigenvalue;
        return os.str();
    }
};

template <std::size_t N>
inline DensityDiagnostics<N> density_diagnostics(const Matrix<N>& m) {
    DensityDiagnostics<N> d;
    d.hermiticity_deviation = m.hermiticity_deviation();
    d.trace_deviation = std::abs(m.trace() - 1.0);
    if constexpr (N == 2) {
        d.min_eigenvalue = hermitian_eigenvalues(m)[0];
    } else {
        const auto ev = hermitian_eigenvalues(m);
        d.min_eigenvalue = ev[0];
        for (double e : ev) d.min_eigenvalue = std::min(d.min_eigenvalue, e);
    }
    return d;
}

// A validated state: Hermitian, unit trace, positive semidefinite, all
// within kDensityTol.
template <std::size_t N>
class DensityMatrix {
  public:
    explicit DensityMatrix(const Matrix<N>& m) : m_(m) {
        const auto d = density_diagnostics(m);
        if (!d.valid()) {
            throw data_error(std::string("invalid density matrix: ") + d.describe());
        }
    }

    const Matrix<N>& matrix() const { return m_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    Matrix<N> m_;
};

using Density2 = DensityMatrix<2>;
using Density4 = DensityMatrix<4>;

template <std::size_t N>
inline DensityMatrix<N> validate_density(const Matrix<N>& m) {
    return DensityMatrix<N>(m);
}

// Tr[obs * state] for a Hermitian observable; the imaginary residue is
// checked against kDensityTol before being discarded.
inline double expectation(const Mat4& obs, const Density4& state) {
    if (obs.hermiticity_deviation() > kDensityTol) {
        throw data_error("expectation: observable is not Hermitian");
    }
    cplx t = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) t += obs(i, k) * state(k, i);
    if (std::abs(t.imag()) > kDensityTol) {
        throw numerical_error("expectation: imaginary residue above tolerance");
    }
    return t.real();
}

}  // namespace qcap
