#pragma once

// Time-dependent Schroedinger dynamics of the coupled register:
//   H(t) = 1/2 sum_(ij) J_ij sz_i sz_j + 1/2 sum_i,mu V_i,mu(t) s^mu_i
//          + 1/2 sum_i (Delta_i + B_i(t)) sz_i.
// The Hamiltonian is never formed densely during integration; it is applied
// through bit operations on the computational basis.

#include "ddgate/lattice.hpp"
#include "ddgate/linalg.hpp"
#include "ddgate/noise.hpp"
#include "ddgate/rk4.hpp"
#include "ddgate/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ddgate {

struct EvolutionProblem {
    const QubitGraph* graph = nullptr;
    const Schedule* schedule = nullptr;
    ShiftAssignment shifts;
    const NoiseTrajectory* noise = nullptr;  // optional
    double noise_offset = 0.0;               // schedule time 0 maps to noise time noise_offset
    double dt = 1.0 / 256;
    bool hard = false;                       // instantaneous pulses at their centres

    EvolutionProblem() = default;
    EvolutionProblem(const QubitGraph& g, const Schedule& s)
        : graph(&g), schedule(&s), shifts(zero_shifts(g.size())) {}
    // the problem only points at its inputs
    EvolutionProblem(const QubitGraph&, Schedule&&) = delete;
    EvolutionProblem(QubitGraph&&, const Schedule&) = delete;

    int n() const { return graph->size(); }
};

struct PropagationStats {
    int reunitarizations = 0;
    double max_drift = 0.0;
    long steps = 0;
};

namespace detail {

inline void check_problem(const EvolutionProblem& p) {
    if (!p.graph || !p.schedule) throw std::invalid_argument("evolution problem needs a graph and a schedule");
    if (p.schedule->n_qubits != p.graph->size()) throw std::invalid_argument("schedule and graph disagree on size");
    if (int(p.shifts.delta.size()) != p.graph->size()) throw std::invalid_argument("one shift per qubit");
    const double per = 1.0 / p.dt;
    if (!(p.dt > 0.0) || std::abs(per - std::round(per)) > 1e-9)
        throw std::invalid_argument("dt must divide tau_p");
    if (p.noise && p.noise->qubits() != p.graph->size())
        throw std::invalid_argument("noise trajectory has the wrong qubit count");
}

/// Static diagonal of H: Ising and shift terms.
inline std::vector<double> static_diagonal(const EvolutionProblem& p) {
    const int n = p.n(), d = dimension(n);
    std::vector<double> diag(d, 0.0);
    for (int idx = 0; idx < d; ++idx) {
        double v = 0.0;
        for (const auto& e : p.graph->edges()) v += 0.5 * e.J * z_sign(n, e.i, idx) * z_sign(n, e.j, idx);
        for (int q = 1; q <= n; ++q) v += 0.5 * p.shifts(q) * z_sign(n, q, idx);
        diag[idx] = v;
    }
    return diag;
}

/// out += coeff * sigma^axis_q * y, rowwise.
inline void add_pauli(Matrix& out, const Matrix& y, int n, int q, Axis axis, double coeff) {
    const int d = dimension(n);
    const int mask = qubit_mask(n, q);
    for (int col = 0; col < y.cols(); ++col) {
        for (int idx = 0; idx < d; ++idx) {
            const bool one = idx & mask;
            switch (axis) {
            case Axis::x: out(idx, col) += coeff * y(idx ^ mask, col); break;
            case Axis::y: out(idx, col) += (one ? I : -I) * coeff * y(idx ^ mask, col); break;
            case Axis::z: out(idx, col) += (one ? -coeff : coeff) * y(idx, col); break;
            }
        }
    }
}

inline void apply_single_qubit(Matrix& y, int n, int q, const Mat2& op) {
    const int d = dimension(n);
    const int mask = qubit_mask(n, q);
    for (int col = 0; col < y.cols(); ++col)
        for (int idx = 0; idx < d; ++idx) {
            if (idx & mask) continue;
            const cplx a = y(idx, col), b = y(idx | mask, col);
            y(idx, col) = op(0, 0) * a + op(0, 1) * b;
            y(idx | mask, col) = op(1, 0) * a + op(1, 1) * b;
        }
}

class HamiltonianAction {
public:
    explicit HamiltonianAction(const EvolutionProblem& p) : p_(p), n_(p.n()), diag_(static_diagonal(p)) {
        zs_.resize(std::size_t(n_) * dimension(n_));
        for (int q = 1; q <= n_; ++q)
            for (int idx = 0; idx < dimension(n_); ++idx) zs_[(q - 1) * dimension(n_) + idx] = z_sign(n_, q, idx);
    }

    void set_active(std::vector<const PulseEvent*> active) { active_ = std::move(active); }

    /// Diagonal of H at time t (static part plus noise).
    void diagonal(double t, std::vector<double>& out) {
        out = diag_;
        if (!p_.noise) return;
        const int d = dimension(n_);
        for (int q = 1; q <= n_; ++q) {
            const double b = 0.5 * p_.noise->evaluate(q, t + p_.noise_offset);
            if (b == 0.0) continue;
            for (int idx = 0; idx < d; ++idx) out[idx] += b * zs_[(q - 1) * d + idx];
        }
    }

    /// dy = -i H(t) y.
    void operator()(double t, const Matrix& y, Matrix& dy) {
        diagonal(t, work_);
        dy.resize(y.rows(), y.cols());
        for (int col = 0; col < y.cols(); ++col)
            for (int idx = 0; idx < y.rows(); ++idx) dy(idx, col) = work_[idx] * y(idx, col);
        for (const PulseEvent* e : active_) {
            const double v = e->amplitude_at(t);
            if (v != 0.0) add_pauli(dy, y, n_, e->qubit, e->axis(), 0.5 * v);
        }
        dy *= -I;
    }

private:
    const EvolutionProblem& p_;
    int n_;
    std::vector<double> diag_;
    std::vector<int> zs_;
    std::vector<double> work_;
    std::vector<const PulseEvent*> active_;
};

inline double drift(const Matrix& y) {
    if (y.cols() == 1) return std::abs(y.norm() - 1.0);
    return unitarity_defect(y);
}

inline void restore(Matrix& y) {
    if (y.cols() == 1) y /= y.norm();
    else y = polar_unitary(y);
}

/// Integrates y' = -i H y over the whole schedule.
inline Matrix integrate(const EvolutionProblem& p, Matrix y, PropagationStats* stats) {
    check_problem(p);
    PropagationStats local;
    PropagationStats& st = stats ? *stats : local;
    const Schedule& s = *p.schedule;
    const int n = p.n();

    std::vector<const PulseEvent*> events;
    for (const auto& e : s.events) events.push_back(&e);

    const bool hard = p.hard || std::any_of(events.begin(), events.end(), [](const PulseEvent* e) {
        return e->shape.kind == PulseKind::hard;
    });
    if (hard) {
        std::sort(events.begin(), events.end(), [](auto a, auto b) { return a->centre() < b->centre(); });
        const std::vector<double> diag = static_diagonal(p);
        const int d = dimension(n);
        std::vector<std::vector<int>> zs(n + 1, std::vector<int>(d));
        for (int q = 1; q <= n; ++q)
            for (int idx = 0; idx < d; ++idx) zs[q][idx] = z_sign(n, q, idx);
        auto free = [&](double t0, double t1) {
            if (t1 <= t0) return;
            std::vector<double> phase(d);
            for (int idx = 0; idx < d; ++idx) phase[idx] = diag[idx] * (t1 - t0);
            if (p.noise)
                for (int q = 1; q <= n; ++q) {
                    const double w = 0.5 * (p.noise->integral(q, t1 + p.noise_offset) -
                                            p.noise->integral(q, t0 + p.noise_offset));
                    for (int idx = 0; idx < d; ++idx) phase[idx] += w * zs[q][idx];
                }
            for (int idx = 0; idx < d; ++idx) y.row(idx) *= std::exp(-I * phase[idx]);
        };
        double t = 0.0;
        for (const PulseEvent* e : events) {
            free(t, e->centre());
            t = e->centre();
            apply_single_qubit(y, n, e->qubit, rotation(e->axis(), e->shape.angle));
        }
        free(t, s.duration);
        return y;
    }

    std::sort(events.begin(), events.end(), [](auto a, auto b) { return a->start < b->start; });
    const long per = std::lround(1.0 / p.dt);
    const long steps = std::lround(s.duration / p.dt);
    if (std::abs(steps * p.dt - s.duration) > 1e-9) throw std::invalid_argument("dt must divide the schedule duration");

    HamiltonianAction h(p);
    Rk4Stepper<Matrix> rk;
    std::size_t next = 0;
    std::vector<const PulseEvent*> active;
    for (long k = 0; k < steps; ++k) {
        const double t0 = k * p.dt, t1 = t0 + p.dt;
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](const PulseEvent* e) { return e->end() <= t0 + 1e-12; }),
                     active.end());
        while (next < events.size() && events[next]->start < t1 - 1e-12) {
            if (events[next]->end() > t0 + 1e-12) active.push_back(events[next]);
            ++next;
        }
        h.set_active(active);
        rk.step(y, t0, p.dt, h);
        ++st.steps;
        if ((k + 1) % per == 0 || k + 1 == steps) {
            const double dr = drift(y);
            st.max_drift = std::max(st.max_drift, dr);
            if (dr > 1e-10) {
                restore(y);
                ++st.reunitarizations;
            }
        }
    }
    return y;
}

} // namespace detail

/// Dense H(t) (for inspection and tests).
inline Matrix assemble_hamiltonian(const EvolutionProblem& p, double t) {
    detail::check_problem(p);
    if (t < 0.0 || t > p.schedule->duration + 1e-12) throw std::out_of_range("time outside the schedule");
    const int n = p.n(), d = dimension(n);
    detail::HamiltonianAction h(p);
    std::vector<double> diag;
    h.diagonal(t, diag);
    Matrix out = Matrix::Zero(d, d);
    for (int idx = 0; idx < d; ++idx) out(idx, idx) = diag[idx];
    const Matrix eye = Matrix::Identity(d, d);
    for (const auto& e : p.schedule->events) {
        const double v = e.amplitude_at(t);
        if (v != 0.0 && e.shape.kind != PulseKind::hard) detail::add_pauli(out, eye, n, e.qubit, e.axis(), 0.5 * v);
    }
    return out;
}

inline Matrix propagate(const EvolutionProblem& p, PropagationStats* stats = nullptr) {
    const int d = dimension(p.graph ? p.n() : 0);
    return detail::integrate(p, Matrix::Identity(d, d), stats);
}

inline Vector propagate_state(const EvolutionProblem& p, const Vector& psi0, PropagationStats* stats = nullptr) {
    if (std::abs(psi0.norm() - 1.0) > 1e-8) throw std::invalid_argument("initial state must be normalized");
    if (psi0.size() != dimension(p.graph ? p.n() : 0)) throw std::invalid_argument("state has the wrong dimension");
    Matrix y = psi0;
    return detail::integrate(p, y, stats).col(0);
}

} // namespace ddgate
