#pragma once

// Shaped control pulses: Fourier-cosine envelopes, Gaussian baselines and
// hard (delta) pulses, together with the self-refocusing order analysis and
// the profile optimizer.
//
// Time is measured in units of the pulse duration tau_p = 1.

#include "ddgate/linalg.hpp"
#include "ddgate/rk4.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddgate {

enum class PulseKind { hard, gaussian, shaped };

inline std::string kind_name(PulseKind k) {
    switch (k) {
    case PulseKind::hard: return "hard";
    case PulseKind::gaussian: return "gaussian";
    case PulseKind::shaped: return "shaped";
    }
    return "?";
}

inline PulseKind parse_kind(const std::string& s) {
    if (s == "hard") return PulseKind::hard;
    if (s == "gaussian") return PulseKind::gaussian;
    if (s == "shaped") return PulseKind::shaped;
    throw std::invalid_argument("unknown pulse kind '" + s + "'");
}

/// Standard deviation of the Gaussian baseline pulse, in units of its duration.
inline constexpr double gaussian_width = 1.0 / 6.0;

struct PulseShape {
    Axis axis = Axis::x;
    double angle = pi;
    double duration = 1.0;
    PulseKind kind = PulseKind::hard;
    /// a_1..a_K of V(t) = a_0 + sum_k a_k cos(2 pi k t / duration); a_0 = angle / duration.
    std::vector<double> coefficients;

    double a0() const { return angle / duration; }

    /// Same profile with the rotation sense reversed (the "antipulse").
    PulseShape reversed() const {
        PulseShape s = *this;
        s.angle = -angle;
        for (double& c : s.coefficients) c = -c;
        return s;
    }

    PulseShape with_axis(Axis a) const {
        PulseShape s = *this;
        s.axis = a;
        return s;
    }
};

inline PulseShape make_hard(double angle, Axis axis, double duration = 1.0) {
    return PulseShape{axis, angle, duration, PulseKind::hard, {}};
}

inline PulseShape make_gaussian(double angle, Axis axis, double duration = 1.0) {
    return PulseShape{axis, angle, duration, PulseKind::gaussian, {}};
}

/// Shaped pulse from its harmonic coefficients. The endpoint condition
/// a_0 + sum a_k = 0 is enforced unless waived; K = 0 therefore fails for any
/// nonzero angle.
inline PulseShape make_shaped(double angle, Axis axis, std::vector<double> coefficients,
                              double duration = 1.0, bool waive_endpoints = false) {
    if (duration <= 0.0) throw std::invalid_argument("pulse duration must be positive");
    PulseShape s{axis, angle, duration, PulseKind::shaped, std::move(coefficients)};
    if (!waive_endpoints) {
        double endpoint = s.a0();
        for (double c : s.coefficients) endpoint += c;
        if (std::abs(endpoint) > 1e-9 * std::max(1.0, std::abs(s.a0())))
            throw std::invalid_argument("shaped pulse amplitude does not vanish at the endpoints");
    }
    return s;
}

namespace detail {

struct GaussianNorm {
    double scale;  // multiplies the shifted bump
    double floor;  // bump value at the endpoints
    double sigma;
};

inline GaussianNorm gaussian_norm(const PulseShape& s) {
    const double sig = gaussian_width * s.duration;
    const double half = 0.5 * s.duration;
    const double floor = std::exp(-half * half / (2 * sig * sig));
    const double area = sig * std::sqrt(2 * pi) * std::erf(half / (std::sqrt(2.0) * sig)) -
                        floor * s.duration;
    return {s.angle / area, floor, sig};
}

inline void check_time(const PulseShape& s, double t) {
    const double eps = 1e-12 * s.duration;
    if (t < -eps || t > s.duration + eps)
        throw std::out_of_range("pulse time outside [0, duration]");
}

} // namespace detail

/// Control amplitude V(t) for 0 <= t <= duration.
inline double amplitude(const PulseShape& s, double t) {
    if (s.kind == PulseKind::hard)
        throw std::invalid_argument("hard pulses have no finite amplitude profile");
    detail::check_time(s, t);
    if (s.kind == PulseKind::gaussian) {
        const auto g = detail::gaussian_norm(s);
        const double u = t - 0.5 * s.duration;
        return g.scale * (std::exp(-u * u / (2 * g.sigma * g.sigma)) - g.floor);
    }
    double v = s.a0();
    const double w = 2 * pi / s.duration;
    for (std::size_t k = 0; k < s.coefficients.size(); ++k)
        v += s.coefficients[k] * std::cos(w * double(k + 1) * t);
    return v;
}

/// Rotation angle accumulated up to time t, theta(t) = int_0^t V.
inline double accumulated_angle(const PulseShape& s, double t) {
    detail::check_time(s, t);
    switch (s.kind) {
    case PulseKind::hard:
        return t < 0.5 * s.duration ? 0.0 : s.angle;
    case PulseKind::gaussian: {
        const auto g = detail::gaussian_norm(s);
        const double r = std::sqrt(2.0) * g.sigma;
        const double half = 0.5 * s.duration;
        return g.scale * (g.sigma * std::sqrt(pi / 2) *
                              (std::erf((t - half) / r) + std::erf(half / r)) -
                          g.floor * t);
    }
    case PulseKind::shaped: {
        double th = s.a0() * t;
        const double w = 2 * pi / s.duration;
        for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
            const double wk = w * double(k + 1);
            th += s.coefficients[k] * std::sin(wk * t) / wk;
        }
        return th;
    }
    }
    return 0.0;
}

/// Ideal hard-pulse reference: free evolution for half the pulse, an
/// instantaneous rotation, and the other half of free evolution.
inline Mat2 hard_reference(const PulseShape& s, double shift) {
    const Mat2 half = exp_z(0.25 * shift * s.duration);
    return half * rotation(s.axis, s.angle) * half;
}

/// Steps per pulse duration used by the single-pulse analyses.
inline constexpr int fine_steps = 4096;

/// Time-ordered evolution under V(t) sigma^a / 2 + shift sigma^z / 2 over the
/// pulse, integrated with RK4 and projected back onto the unitary group.
inline Mat2 single_qubit_propagator(const PulseShape& s, double shift, int steps = fine_steps) {
    if (s.kind == PulseKind::hard) return hard_reference(s, shift);
    if (steps <= 0) throw std::invalid_argument("steps must be positive");
    const Mat2 sa = pauli(s.axis);
    const Mat2 sz = pauli(Axis::z);
    const double h = s.duration / steps;
    Mat2 u = Mat2::Identity();
    Rk4Stepper<Mat2> rk;
    auto rhs = [&](double t, const Mat2& y, Mat2& dy) {
        const double tt = std::clamp(t, 0.0, s.duration);
        const Mat2 hm = 0.5 * amplitude(s, tt) * sa + 0.5 * shift * sz;
        dy.noalias() = -I * (hm * y);
    };
    for (int i = 0; i < steps; ++i) rk.step(u, i * h, h, rhs);
    return polar_unitary(u);
}

struct OrderDefect {
    double first = 0.0;   // delta_1
    double second = 0.0;  // delta_2

    bool refocuses(int order, double tol = 1e-8) const {
        return first < tol && (order < 2 || second < tol);
    }
};

/// Taylor coefficients of U_ref(D)^dag U(D) - 1 in D tau_p, extracted by
/// five-point symmetric finite differences at +-probe and +-2 probe.
inline OrderDefect order_defect(const PulseShape& s, double probe = 1e-3, int steps = fine_steps) {
    if (s.kind == PulseKind::hard) return {};
    auto m = [&](double d) -> Mat2 {
        return hard_reference(s, d).adjoint() * single_qubit_propagator(s, d, steps) -
               Mat2::Identity();
    };
    const Mat2 m0 = m(0.0), mp = m(probe), mm = m(-probe), m2p = m(2 * probe), m2m = m(-2 * probe);
    const double h = probe * s.duration;
    const Mat2 c1 = (8.0 * (mp - mm) - (m2p - m2m)) / (12.0 * h);
    const Mat2 c2 = (16.0 * (mp + mm) - (m2p + m2m) - 30.0 * m0) / (24.0 * h * h);
    Eigen::JacobiSVD<Mat2> s1(c1), s2(c2);
    return {s1.singularValues()(0), s2.singularValues()(0)};
}

// ---------------------------------------------------------------------------
// Profile optimization

class OptimizationError : public std::runtime_error {
public:
    OptimizationError(const std::string& what, OrderDefect best, PulseShape best_shape)
        : std::runtime_error(what), best_(best), shape_(std::move(best_shape)) {}
    const OrderDefect& best() const { return best_; }
    const PulseShape& best_shape() const { return shape_; }

private:
    OrderDefect best_;
    PulseShape shape_;
};

/// Self-refocusing conditions in the toggling frame of the pulse:
/// int cos(theta) and int sin(theta) must match the hard reference at first
/// order; the ordered double integral of sin(theta_1 - theta_2) must match it
/// at second order. Returns (first-order residuals..., second-order residual).
inline Eigen::Vector3d refocusing_residuals(const PulseShape& s, int steps = fine_steps) {
    Eigen::Vector3d y = Eigen::Vector3d::Zero();  // C, S, ordered area
    Rk4Stepper<Eigen::Vector3d> rk;
    auto rhs = [&](double t, const Eigen::Vector3d& v, Eigen::Vector3d& dv) {
        const double th = accumulated_angle(s, std::clamp(t, 0.0, s.duration));
        const double c = std::cos(th), sn = std::sin(th);
        dv = Eigen::Vector3d(c, sn, sn * v(0) - c * v(1));
    };
    const double h = s.duration / steps;
    for (int i = 0; i < steps; ++i) rk.step(y, i * h, h, rhs);
    const double tau = s.duration;
    const double phi = s.angle;
    return Eigen::Vector3d(y(0) / tau - 0.5 * (1 + std::cos(phi)),
                           y(1) / tau - 0.5 * std::sin(phi),
                           y(2) / (tau * tau) - 0.25 * std::sin(phi));
}

struct OptimizerOptions {
    double tolerance = 1e-8;
    long max_evaluations = 100000;
    double probe = 1e-3;
    std::uint64_t restart_seed = 20120619;
    double restart_scale = 3.0;
    /// Number of starts (the first is a_k = 0). Among the converged profiles
    /// the one with the smallest peak amplitude is returned.
    int starts = 16;
};

namespace detail {

inline PulseShape shape_from_free(double angle, Axis axis, const Eigen::VectorXd& x) {
    std::vector<double> c(x.data(), x.data() + x.size());
    double sum = 0.0;
    for (double v : c) sum += v;
    c.push_back(-angle - sum);
    return make_shaped(angle, axis, std::move(c));
}

} // namespace detail

inline double peak_amplitude(const PulseShape& s, int samples = 512) {
    double peak = 0.0;
    for (int i = 0; i <= samples; ++i)
        peak = std::max(peak, std::abs(amplitude(s, s.duration * i / samples)));
    return peak;
}

/// Searches for Fourier coefficients a_1..a_K making the pulse self-refocusing
/// to the requested order. Levenberg-Marquardt on the toggling-frame residuals,
/// started from a_k = 0 and then from a fixed sequence of pseudo-random
/// starts; each candidate is accepted only after order_defect confirms it.
inline PulseShape optimize_shape(double angle, Axis axis, int order, int harmonics,
                                 const OptimizerOptions& opt = {}) {
    if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
    if (harmonics < order) throw std::invalid_argument("need at least `order` harmonics");
    if (angle == 0.0) throw std::invalid_argument("angle must be nonzero");

    const int nfree = harmonics - 1;
    const int nres = order == 1 ? 2 : 3;
    long evaluations = 0;

    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        ++evaluations;
        const Eigen::Vector3d r = refocusing_residuals(detail::shape_from_free(angle, axis, x));
        return r.head(nres);
    };

    std::mt19937_64 rng(opt.restart_seed);
    std::normal_distribution<double> normal(0.0, opt.restart_scale);

    PulseShape best_shape = detail::shape_from_free(angle, axis, Eigen::VectorXd::Zero(nfree));
    OrderDefect best_defect{1e300, 1e300};
    auto score = [&](const OrderDefect& d) { return d.first + (order == 2 ? d.second : 0.0); };

    std::optional<PulseShape> chosen;
    double chosen_peak = 0.0;
    bool first_start = true;
    for (int start = 0; start < opt.starts && evaluations < opt.max_evaluations; ++start) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(nfree);
        if (!first_start)
            for (int i = 0; i < nfree; ++i) x(i) = normal(rng);
        first_start = false;

        Eigen::VectorXd r = residual(x);
        double cost = r.squaredNorm();
        double lambda = 1e-3;
        for (int iter = 0; iter < 200 && nfree > 0 && evaluations < opt.max_evaluations; ++iter) {
            if (std::sqrt(cost) < 1e-14) break;
            Eigen::MatrixXd jac(nres, nfree);
            for (int j = 0; j < nfree; ++j) {
                const double step = 1e-6 * std::max(1.0, std::abs(x(j)));
                Eigen::VectorXd xp = x, xm = x;
                xp(j) += step;
                xm(j) -= step;
                jac.col(j) = (residual(xp) - residual(xm)) / (2 * step);
            }
            const Eigen::MatrixXd jtj = jac.transpose() * jac;
            const Eigen::VectorXd g = jac.transpose() * r;
            bool improved = false;
            for (int tries = 0; tries < 20; ++tries) {
                Eigen::MatrixXd a = jtj;
                a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
                const Eigen::VectorXd dx = a.ldlt().solve(-g);
                const Eigen::VectorXd xn = x + dx;
                const Eigen::VectorXd rn = residual(xn);
                const double cn = rn.squaredNorm();
                if (cn < cost) {
                    x = xn;
                    r = rn;
                    lambda = std::max(lambda / 10, 1e-15);
                    improved = cost - cn > 1e-30;
                    cost = cn;
                    break;
                }
                lambda *= 10;
            }
            if (!improved) break;
        }

        PulseShape cand = detail::shape_from_free(angle, axis, x);
        const OrderDefect d = order_defect(cand, opt.probe);
        if (score(d) < score(best_defect)) {
            best_defect = d;
            best_shape = cand;
        }
        if (d.refocuses(order, opt.tolerance)) {
            const double peak = peak_amplitude(cand);
            if (!chosen || peak < chosen_peak) {
                chosen = cand;
                chosen_peak = peak;
            }
        }
        if (nfree == 0) break;
    }
    if (chosen) return *chosen;
    std::ostringstream msg;
    msg << "pulse optimization did not converge (order " << order << ", K=" << harmonics
        << "): best delta1=" << best_defect.first << " delta2=" << best_defect.second;
    throw OptimizationError(msg.str(), best_defect, best_shape);
}

/// Harmonic count used for shipped shapes of the given order.
inline int default_harmonics(int order) { return order + 1; }

} // namespace ddgate
