#pragma once

// Reference computations for the tests. They deliberately avoid the library's
// integrators: dense matrix exponentials and a fourth-order commutator-free
// Magnus scheme stand in for RK4.

#include "ddgate/linalg.hpp"
#include "ddgate/pulse_shapes.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <functional>

namespace oracle {

using ddgate::Axis;
using ddgate::cplx;
using ddgate::Mat2;
using ddgate::Matrix;

inline Matrix expm(const Matrix& a) { return a.exp(); }

/// exp(-i H) for a Hermitian 2x2 H, closed form.
inline Mat2 expi2(const Mat2& h) {
    const cplx tr = 0.5 * (h(0, 0) + h(1, 1));
    const double nx = std::real(0.5 * (h(0, 1) + h(1, 0)));
    const double ny = std::real(0.5 * ddgate::I * (h(0, 1) - h(1, 0)));
    const double nz = std::real(0.5 * (h(0, 0) - h(1, 1)));
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    Mat2 u = std::cos(r) * Mat2::Identity();
    if (r > 0) {
        Mat2 n;
        n << nz, nx - ddgate::I * ny, nx + ddgate::I * ny, -nz;
        u -= ddgate::I * std::sin(r) / r * n;
    }
    return std::exp(-ddgate::I * tr) * u;
}

/// Control amplitude of a cosine-series pulse, written out independently.
inline double series_amplitude(const ddgate::PulseShape& s, double t) {
    double v = s.angle / s.duration;
    for (std::size_t k = 0; k < s.coefficients.size(); ++k)
        v += s.coefficients[k] * std::cos(2 * ddgate::pi * double(k + 1) * t / s.duration);
    return v;
}

/// Fourth-order commutator-free Magnus step product for dU/dt = -i H(t) U.
template <class Mat, class Exp>
Mat magnus4(const std::function<Mat(double)>& h, double t0, double t1, int steps, Exp expo, int dim) {
    const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6, c2 = 0.5 + s3 / 6;
    const double a1 = 0.25 + s3 / 6, a2 = 0.25 - s3 / 6;
    const double dt = (t1 - t0) / steps;
    Mat u = Mat::Identity(dim, dim);
    for (int k = 0; k < steps; ++k) {
        const double t = t0 + k * dt;
        const Mat h1 = h(t + c1 * dt), h2 = h(t + c2 * dt);
        u = expo(Mat(dt * (a2 * h1 + a1 * h2))) * expo(Mat(dt * (a1 * h1 + a2 * h2))) * u;
    }
    return u;
}

/// Single-qubit pulse propagator under a static shift.
inline Mat2 pulse_propagator(const ddgate::PulseShape& s, double shift, int steps = 20000) {
    const Mat2 sa = ddgate::pauli(s.axis), sz = ddgate::pauli(Axis::z);
    std::function<Mat2(double)> h = [&](double t) -> Mat2 {
        const double v = s.kind == ddgate::PulseKind::shaped ? series_amplitude(s, t) : ddgate::amplitude(s, t);
        return 0.5 * v * sa + 0.5 * shift * sz;
    };
    return magnus4<Mat2>(h, 0.0, s.duration, steps, expi2, 2);
}

/// Free half, instantaneous rotation, free half.
inline Mat2 hard_pulse(const ddgate::PulseShape& s, double shift) {
    Mat2 half = Mat2::Zero();
    half(0, 0) = std::exp(-ddgate::I * 0.25 * shift * s.duration);
    half(1, 1) = std::exp(ddgate::I * 0.25 * shift * s.duration);
    const Mat2 r = expi2(0.5 * s.angle * ddgate::pauli(s.axis));
    return half * r * half;
}

struct Defect {
    double first, second;
};

/// Derivatives in the shift of E(D) = U_hard(D)^dag U(D), by central
/// differences on a symmetric 7-point stencil. The probe is kept large: step
/// roundoff in the propagator is divided by probe^2 in the second derivative.
inline Defect defect(const ddgate::PulseShape& s, double probe = 2e-2, int steps = 5000) {
    auto e = [&](double d) -> Mat2 { return hard_pulse(s, d).adjoint() * pulse_propagator(s, d, steps); };
    const Mat2 p1 = e(probe), m1 = e(-probe), p2 = e(2 * probe), m2 = e(-2 * probe), p3 = e(3 * probe),
               m3 = e(-3 * probe), z = e(0.0);
    const double h = probe;
    const Mat2 d1 = (45.0 * (p1 - m1) - 9.0 * (p2 - m2) + (p3 - m3)) / (60.0 * h);
    const Mat2 d2 = (270.0 * (p1 + m1) - 27.0 * (p2 + m2) + 2.0 * (p3 + m3) - 490.0 * z) / (180.0 * h * h);
    return {d1.norm(), 0.5 * d2.norm()};
}

} // namespace oracle
