#pragma once

// Small dense linear-algebra helpers shared by every module: Pauli matrices,
// single-qubit rotations, and embeddings into the n-qubit register.
//
// Basis ordering: qubit 1 is the most significant bit of the basis index.
// Qubit indices are 1-based in every public interface.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ddgate {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class Axis { x, y, z };

inline char axis_name(Axis a) {
    switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
    }
    return '?';
}

inline Axis parse_axis(char c) {
    switch (c) {
    case 'x': case 'X': return Axis::x;
    case 'y': case 'Y': return Axis::y;
    case 'z': case 'Z': return Axis::z;
    default: throw std::invalid_argument(std::string("unknown axis '") + c + "'");
    }
}

inline Mat2 pauli(Axis a) {
    Mat2 m;
    switch (a) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, -I, I, 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
    }
    return m;
}

/// R_a(angle) = exp(-i angle sigma^a / 2).
inline Mat2 rotation(Axis a, double angle) {
    return std::cos(angle / 2) * Mat2::Identity() - I * std::sin(angle / 2) * pauli(a);
}

inline Mat2 exp_z(double phase) {  // exp(-i phase sigma^z)
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(-I * phase);
    m(1, 1) = std::exp(I * phase);
    return m;
}

inline int dimension(int n_qubits) { return 1 << n_qubits; }

/// Bit mask of qubit q (1-based) in an n-qubit basis index.
inline int qubit_mask(int n_qubits, int q) { return 1 << (n_qubits - q); }

/// sigma^z eigenvalue (+1 for |0>, -1 for |1>) of qubit q in basis state idx.
inline int z_sign(int n_qubits, int q, int idx) {
    return (idx & qubit_mask(n_qubits, q)) ? -1 : 1;
}

/// Embed a single-qubit operator acting on qubit q into the n-qubit space.
inline Matrix embed(const Mat2& op, int n_qubits, int q) {
    const int d = dimension(n_qubits);
    const int mask = qubit_mask(n_qubits, q);
    Matrix out = Matrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const int b = (col & mask) ? 1 : 0;
        for (int a = 0; a < 2; ++a) {
            const int row = a ? (col | mask) : (col & ~mask);
            out(row, col) = op(a, b);
        }
    }
    return out;
}

/// Embed a two-qubit operator (basis |q1 q2>, q1 most significant) acting on (q1, q2).
inline Matrix embed2(const Eigen::Matrix4cd& op, int n_qubits, int q1, int q2) {
    const int d = dimension(n_qubits);
    const int m1 = qubit_mask(n_qubits, q1);
    const int m2 = qubit_mask(n_qubits, q2);
    Matrix out = Matrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const int b = ((col & m1) ? 2 : 0) | ((col & m2) ? 1 : 0);
        const int rest = col & ~(m1 | m2);
        for (int a = 0; a < 4; ++a) {
            const int row = rest | ((a & 2) ? m1 : 0) | ((a & 1) ? m2 : 0);
            out(row, col) = op(a, b);
        }
    }
    return out;
}

/// min over global phases of ||a - e^{i phi} b||_F.
inline double phase_adjusted_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase_adjusted_distance: dimension mismatch");
    const cplx overlap = (b.adjoint() * a).trace();
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
    return (a - phase * b).norm();
}

inline double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

/// Closest unitary in Frobenius norm (polar factor).
inline Matrix polar_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace ddgate
