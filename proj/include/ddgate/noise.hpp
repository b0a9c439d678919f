#pragma once

// Classical stationary Gaussian dephasing B_i(t) with correlator
// <B_i(t) B_j(t')> = sigma^2 delta_ij exp(-(t-t')^2 / tau_c^2).
//
// White noise on a grid of spacing h is convolved with exp(-t^2/a^2),
// a = tau_c / sqrt(2), normalised by the discrete kernel self-overlap, and
// interpolated with natural cubic splines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace ddgate {

struct NoiseParams {
    double sigma = 0.0;
    double tau_c = 128.0;
    double h = 0.0;  // grid spacing; 0 selects tau_c / 16
    std::uint64_t seed = 1;

    double spacing() const { return h > 0.0 ? h : tau_c / 16.0; }
};

/// Natural cubic spline on a uniform grid starting at t = 0.
class UniformSpline {
public:
    UniformSpline() = default;

    UniformSpline(double h, std::vector<double> y) : h_(h), y_(std::move(y)) {
        const std::size_t n = y_.size();
        if (n < 2) throw std::invalid_argument("spline needs at least two knots");
        m_.assign(n, 0.0);
        if (n > 2) {
            // Thomas algorithm for M_{k-1} + 4 M_k + M_{k+1} = 6 (y_{k+1} - 2 y_k + y_{k-1}) / h^2.
            std::vector<double> c(n, 0.0), d(n, 0.0);
            for (std::size_t k = 1; k + 1 < n; ++k) {
                const double rhs = 6.0 * (y_[k + 1] - 2.0 * y_[k] + y_[k - 1]) / (h_ * h_);
                const double denom = 4.0 - (k > 1 ? c[k - 1] : 0.0);
                c[k] = 1.0 / denom;
                d[k] = (rhs - (k > 1 ? d[k - 1] : 0.0)) / denom;
            }
            for (std::size_t k = n - 2; k >= 1; --k) {
                m_[k] = d[k] - c[k] * m_[k + 1];
                if (k == 1) break;
            }
        }
        cumulative_.assign(n, 0.0);
        for (std::size_t k = 0; k + 1 < n; ++k) cumulative_[k + 1] = cumulative_[k] + piece_integral(k, 1.0);
    }

    double span() const { return h_ * double(y_.size() - 1); }
    const std::vector<double>& knots() const { return y_; }
    double spacing() const { return h_; }

    double operator()(double t) const {
        std::size_t k;
        double u;
        locate(t, k, u);
        const double v = 1.0 - u;
        return v * y_[k] + u * y_[k + 1] +
               h_ * h_ / 6.0 * ((v * v * v - v) * m_[k] + (u * u * u - u) * m_[k + 1]);
    }

    /// int_0^t S.
    double integral(double t) const {
        std::size_t k;
        double u;
        locate(t, k, u);
        return cumulative_[k] + piece_integral(k, u);
    }

private:
    void locate(double t, std::size_t& k, double& u) const {
        if (t < -1e-9 * h_ || t > span() * (1 + 1e-12) + 1e-9)
            throw std::out_of_range("noise evaluated outside its trajectory");
        const double x = std::clamp(t / h_, 0.0, double(y_.size() - 1));
        k = std::min(std::size_t(x), y_.size() - 2);
        u = x - double(k);
    }

    double piece_integral(std::size_t k, double u) const {
        const double v = 1.0 - u;
        const double lin = y_[k] * (u - 0.5 * u * u) + y_[k + 1] * 0.5 * u * u;
        const double curv = m_[k] * (-0.25 * v * v * v * v + 0.5 * v * v - 0.25) +
                            m_[k + 1] * (0.25 * u * u * u * u - 0.5 * u * u);
        return h_ * (lin + h_ * h_ / 6.0 * curv);
    }

    double h_ = 1.0;
    std::vector<double> y_, m_, cumulative_;
};

class NoiseTrajectory {
public:
    NoiseTrajectory() = default;
    NoiseTrajectory(double duration, std::vector<UniformSpline> q) : duration_(duration), q_(std::move(q)) {}

    int qubits() const { return int(q_.size()); }
    double duration() const { return duration_; }
    bool empty() const { return q_.empty(); }

    /// B_q(t), qubit 1-based.
    double evaluate(int qubit, double t) const {
        check(qubit, t);
        return q_[qubit - 1](t);
    }

    /// int_0^t B_q.
    double integral(int qubit, double t) const {
        check(qubit, t);
        return q_[qubit - 1].integral(t);
    }

    const UniformSpline& spline(int qubit) const { return q_.at(qubit - 1); }

    void write_csv(std::ostream& out) const {
        out << "qubit,t,B\n";
        for (int q = 1; q <= qubits(); ++q) {
            const auto& s = q_[q - 1];
            for (std::size_t k = 0; k < s.knots().size(); ++k)
                out << q << ',' << s.spacing() * double(k) << ',' << s.knots()[k] << '\n';
        }
    }

private:
    void check(int qubit, double t) const {
        if (qubit < 1 || qubit > qubits()) throw std::invalid_argument("noise qubit out of range");
        if (t < 0.0 || t > duration_ * (1 + 1e-12) + 1e-12) throw std::out_of_range("noise time out of range");
    }

    double duration_ = 0.0;
    std::vector<UniformSpline> q_;
};

/// Deterministic per (params, qubit, duration).
inline NoiseTrajectory generate_noise(int n_qubits, double duration, const NoiseParams& p) {
    if (!(duration > 0.0)) throw std::invalid_argument("noise duration must be positive");
    if (p.sigma < 0.0 || p.tau_c < 0.0) throw std::invalid_argument("sigma and tau_c must be nonnegative");
    const double h = p.spacing();
    const bool silent = p.sigma == 0.0;
    if (!silent && (p.tau_c == 0.0 || h > p.tau_c / 8.0 * (1 + 1e-12) || h <= 0.0))
        throw std::invalid_argument("noise grid spacing must satisfy 0 < h <= tau_c/8");

    const std::size_t n_knots = std::size_t(std::ceil(duration / (silent ? duration : h) - 1e-9)) + 1;
    const double spacing = silent ? duration : h;
    std::vector<UniformSpline> splines;
    if (silent) {
        for (int q = 0; q < n_qubits; ++q) splines.emplace_back(spacing, std::vector<double>(n_knots, 0.0));
        return NoiseTrajectory(duration, std::move(splines));
    }

    const double a = p.tau_c / std::sqrt(2.0);
    const int half = int(std::ceil(4.0 * p.tau_c / h));
    std::vector<double> kernel(2 * half + 1);
    double norm = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double t = j * h;
        kernel[j + half] = std::exp(-t * t / (a * a));
        norm += kernel[j + half] * kernel[j + half];
    }
    const double scale = p.sigma / std::sqrt(norm);

    for (int q = 1; q <= n_qubits; ++q) {
        std::seed_seq seq{std::uint32_t(p.seed & 0xffffffffu), std::uint32_t(p.seed >> 32), std::uint32_t(q)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> white(n_knots + 2 * half);
        for (double& w : white) w = normal(rng);
        std::vector<double> y(n_knots, 0.0);
        for (std::size_t k = 0; k < n_knots; ++k) {
            double s = 0.0;
            for (int j = 0; j <= 2 * half; ++j) s += kernel[j] * white[k + j];
            y[k] = scale * s;
        }
        splines.emplace_back(h, std::move(y));
    }
    return NoiseTrajectory(duration, std::move(splines));
}

} // namespace ddgate
