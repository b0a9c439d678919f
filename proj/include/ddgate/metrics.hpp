#pragma once

// Fidelity measures, log-log slopes, and the gate benchmark (mean gate
// infidelity against the r.m.s. chemical shift).

#include "ddgate/dynamics.hpp"
#include "ddgate/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddgate {

/// 1 - |Tr(V^dag U)|^2 / 4^n.
inline double gate_infidelity(const Matrix& u, const Matrix& target, int n_qubits) {
    const int d = dimension(n_qubits);
    if (u.rows() != d || u.cols() != d || target.rows() != d || target.cols() != d)
        throw std::invalid_argument("gate_infidelity: dimension mismatch");
    const double o = std::abs((target.adjoint() * u).trace());
    return std::clamp(1.0 - o * o / (double(d) * d), 0.0, 1.0);
}

inline double state_fidelity(const Vector& psi, const Vector& ref) {
    if (psi.size() != ref.size()) throw std::invalid_argument("state_fidelity: dimension mismatch");
    return std::norm(ref.dot(psi));
}

/// d log y / d log x: centred differences inside, one-sided at the ends.
inline std::vector<double> slope_estimate(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("slope_estimate: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("slope_estimate needs at least two points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("slope_estimate needs positive data");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const std::size_t n = xs.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? n - 1 : i + 1;
        s[i] = (ly[b] - ly[a]) / (lx[b] - lx[a]);
    }
    return s;
}

/// Least-squares slope of log y against log x.
inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("fit_slope needs matching data");
    double mx = 0, my = 0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_slope needs positive data");
        mx += std::log(xs[i]) / n;
        my += std::log(ys[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad logarithmic grid");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (points - 1));
    return g;
}

struct GateSpec {
    enum class Kind { rotation, cnot } kind = Kind::rotation;
    int q1 = 3;  // rotated qubit, or control
    int q2 = 0;  // target
    Axis axis = Axis::y;
    double angle = pi / 2;

    std::string describe() const {
        if (kind == Kind::cnot) return "CNOT(" + std::to_string(q1) + "," + std::to_string(q2) + ")";
        return std::string("R") + axis_name(axis) + "(" + std::to_string(angle / pi) + "pi)@" + std::to_string(q1);
    }

    Schedule compile(const Compiler& c) const {
        return kind == Kind::cnot ? c.cnot(q1, q2) : c.single_qubit(q1, axis, angle);
    }

    Matrix target(int n) const {
        if (kind == Kind::rotation) return embed(rotation(axis, angle), n, q1);
        Eigen::Matrix4cd cn = Eigen::Matrix4cd::Identity();
        cn.block<2, 2>(2, 2) = pauli(Axis::x);
        return embed2(cn, n, q1, q2);
    }
};

struct GateBenchResult {
    std::vector<double> delta;
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> slope;
    std::string gate;
    std::string pulses;
    int m = 0;
    double J = 0.0;
    double dt = 0.0;
    int draws = 0;
    std::uint64_t seed = 0;
};

struct BenchOptions {
    int draws = 20;
    std::uint64_t seed = 1;
    double dt = 1.0 / 256;
    int workers = 1;
};

/// Seed of draw k. Grid points reuse the same normal deviates scaled by their
/// r.m.s. shift (common random numbers), so each curve is smooth in delta.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t k) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(i), std::uint32_t(k)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t(out[0]) << 32) | out[1];
}

inline GateBenchResult run_gate_bench(const Compiler& compiler, const GateSpec& gate,
                                      const std::vector<double>& deltas, const BenchOptions& opt) {
    if (opt.draws < 1) throw std::invalid_argument("need at least one draw per point");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i - 1])) throw std::invalid_argument("delta grid must be strictly increasing");
    const QubitGraph& g = compiler.graph();
    const Schedule sched = gate.compile(compiler);
    const Matrix target = gate.target(g.size());

    std::vector<double> values(deltas.size() * opt.draws);
    parallel_for(values.size(), opt.workers, [&](std::size_t job) {
        const std::size_t i = job / opt.draws, k = job % opt.draws;
        EvolutionProblem p(g, sched);
        p.dt = opt.dt;
        p.shifts = draw_shifts(g, deltas[i], derived_seed(opt.seed, 0, k));
        values[job] = gate_infidelity(propagate(p), target, g.size());
    });

    GateBenchResult r;
    r.delta = deltas;
    r.gate = gate.describe();
    r.pulses = compiler.pulses().describe();
    r.m = compiler.m();
    r.J = g.edges().empty() ? 0.0 : g.edges()[0].J;
    r.dt = opt.dt;
    r.draws = opt.draws;
    r.seed = opt.seed;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        double s = 0, s2 = 0;
        for (int k = 0; k < opt.draws; ++k) {
            const double v = values[i * opt.draws + k];
            s += v;
            s2 += v * v;
        }
        const double mean = s / opt.draws;
        const double var = opt.draws > 1 ? std::max(0.0, (s2 - opt.draws * mean * mean) / (opt.draws - 1)) : 0.0;
        r.mean.push_back(mean);
        r.stderr_.push_back(std::sqrt(var / opt.draws));
    }
    std::vector<double> floor_mean = r.mean;
    for (double& v : floor_mean) v = std::max(v, 1e-300);
    if (deltas.size() >= 2) r.slope = slope_estimate(r.delta, floor_mean);
    else r.slope.assign(deltas.size(), 0.0);
    return r;
}

inline void write_bench_csv(std::ostream& out, const GateBenchResult& r) {
    out.precision(10);
    out << "delta,mean_infidelity,stderr,slope\n";
    for (std::size_t i = 0; i < r.delta.size(); ++i)
        out << r.delta[i] << ',' << r.mean[i] << ',' << r.stderr_[i] << ',' << r.slope[i] << '\n';
}

} // namespace ddgate
