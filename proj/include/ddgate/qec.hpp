#pragma once

// The [[4,2,2]] code on a five-site chain, its encoding and shuttling-ancilla
// syndrome circuits, and the repeated-measurement (Zeno) experiment.
//
// Chain layout after encoding (positions 1..5): s2 s4 s1 a s3.
// Before encoding the logical inputs sit on positions 2 and 3, everything
// else in |0>.

#include "ddgate/dynamics.hpp"
#include "ddgate/metrics.hpp"
#include "ddgate/parallel.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddgate {

class DegenerateProjection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int chain_qubits = 5;
inline constexpr int ancilla_site = 4;
/// Chain position of data qubit s_k (index k-1).
inline constexpr std::array<int, 4> data_site{3, 1, 5, 2};

struct Code422 {
    /// Normalized codeword |x1 x2> on four qubits s1..s4.
    static Vector codeword(int x1, int x2) {
        Vector v = Vector::Zero(16);
        const int p = x1 ^ x2;
        const int a = (0 << 3) | (x1 << 2) | (x2 << 1) | p;
        v(a) = 1.0 / std::sqrt(2.0);
        v(a ^ 0xF) = 1.0 / std::sqrt(2.0);
        return v;
    }

    static Matrix gx() {
        Matrix m = embed(pauli(Axis::x), 4, 1);
        for (int q = 2; q <= 4; ++q) m = embed(pauli(Axis::x), 4, q) * m;
        return m;
    }

    static Matrix gz() {
        Matrix m = embed(pauli(Axis::z), 4, 1);
        for (int q = 2; q <= 4; ++q) m = embed(pauli(Axis::z), 4, q) * m;
        return m;
    }

    /// Encoded logical state sum_{x1 x2} c[2 x1 + x2] |x1 x2>_L on s1..s4.
    static Vector encode(const std::array<cplx, 4>& c) {
        Vector v = Vector::Zero(16);
        for (int k = 0; k < 4; ++k) v += c[k] * codeword(k >> 1, k & 1);
        return v;
    }
};

/// Places a four-qubit data state (s1..s4) and the ancilla |0> onto the chain.
inline Vector embed_code_state(const Vector& data) {
    Vector out = Vector::Zero(dimension(chain_qubits));
    for (int s = 0; s < 16; ++s) {
        int idx = 0;
        for (int k = 0; k < 4; ++k)
            if (s & (1 << (3 - k))) idx |= qubit_mask(chain_qubits, data_site[k]);
        out(idx) = data(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ideal gate action on state vectors

inline void apply_ideal(Vector& psi, int n, const Gate& g) {
    Matrix y = psi;
    auto cnot_on = [&](int c, int d) {
        const int mc = qubit_mask(n, c), md = qubit_mask(n, d);
        for (int idx = 0; idx < y.rows(); ++idx)
            if ((idx & mc) && !(idx & md)) y.row(idx).swap(y.row(idx | md));
    };
    switch (g.kind) {
    case GateKind::cnot: cnot_on(g.qubits[0], g.qubits[1]); break;
    case GateKind::swap:
        cnot_on(g.qubits[0], g.qubits[1]);
        cnot_on(g.qubits[1], g.qubits[0]);
        cnot_on(g.qubits[0], g.qubits[1]);
        break;
    case GateKind::h: {
        Mat2 h;
        h << 1, 1, 1, -1;
        detail::apply_single_qubit(y, n, g.qubits[0], h / std::sqrt(2.0));
        break;
    }
    case GateKind::x: detail::apply_single_qubit(y, n, g.qubits[0], rotation(Axis::x, pi / 2)); break;
    case GateKind::y: detail::apply_single_qubit(y, n, g.qubits[0], rotation(Axis::y, pi / 2)); break;
    case GateKind::xbar: detail::apply_single_qubit(y, n, g.qubits[0], rotation(Axis::x, -pi / 2)); break;
    case GateKind::ybar: detail::apply_single_qubit(y, n, g.qubits[0], rotation(Axis::y, -pi / 2)); break;
    case GateKind::zz: {
        for (int idx = 0; idx < y.rows(); ++idx)
            y.row(idx) *= std::exp(-I * g.alpha * double(z_sign(n, g.qubits[0], idx) * z_sign(n, g.qubits[1], idx)));
        break;
    }
    case GateKind::measure: break;
    }
    psi = y.col(0);
}

inline void apply_ideal(Vector& psi, int n, const Circuit& c) {
    for (const auto& layer : c.layers)
        for (const auto& g : layer) apply_ideal(psi, n, g);
}

inline Circuit reversed(const Circuit& c) {
    Circuit r;
    for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
        for (const auto& g : *it)
            if (g.kind == GateKind::x || g.kind == GateKind::y || g.kind == GateKind::xbar ||
                g.kind == GateKind::ybar || g.kind == GateKind::zz)
                throw std::invalid_argument("reversal is defined for self-inverse gates only");
        r.layers.push_back(*it);
    }
    return r;
}

/// Projects the ancilla onto |0>. Returns the success probability.
inline double project_ancilla(Vector& psi, int n, int ancilla) {
    const int mask = qubit_mask(n, ancilla);
    double p = 0.0;
    for (int idx = 0; idx < psi.size(); ++idx) {
        if (idx & mask) psi(idx) = 0.0;
        else p += std::norm(psi(idx));
    }
    if (p < 1e-15) throw DegenerateProjection("ancilla projection has vanishing probability");
    psi /= std::sqrt(p);
    return p;
}

// ---------------------------------------------------------------------------
// Circuits

/// Four exchanges, five CNOTs and one Hadamard; nearest-neighbour only.
inline Circuit encode_circuit() {
    Circuit c;
    for (const Gate& g : {cnot(3, 4), swap_gate(3, 4), cnot(2, 3), hadamard(1), cnot(1, 2), swap_gate(1, 2),
                          cnot(2, 3), swap_gate(2, 3), cnot(3, 4), swap_gate(4, 5)})
        c.add_layer({g});
    return c;
}

/// Chain position of the ancilla while it is shuttled.
struct SyndromeCircuits {
    Circuit gz;  // ends with the ancilla at position 2, ready to be measured
    Circuit gx;  // ends with the original layout restored
};

/// G_z: the ancilla collects s3, is shuttled up through s1 and s4 (each
/// step a parity collection fused with an exchange) and collects s2.
/// G_x: Hadamard-conjugated mirror image, shuttling back down.
inline SyndromeCircuits measurement_circuits() {
    SyndromeCircuits s;
    for (const Gate& g : {cnot(5, 4), cnot(4, 3), cnot(3, 4), cnot(3, 2), cnot(2, 3), cnot(1, 2), measure(2)})
        s.gz.add_layer({g});
    for (const Gate& g : {hadamard(2), cnot(2, 1), cnot(3, 2), cnot(2, 3), cnot(4, 3), cnot(3, 4), cnot(4, 5),
                          hadamard(4), measure(4)})
        s.gx.add_layer({g});
    return s;
}

inline Circuit measurement_circuit() {
    const auto s = measurement_circuits();
    Circuit c = s.gz;
    for (const auto& l : s.gx.layers) c.layers.push_back(l);
    return c;
}

// ---------------------------------------------------------------------------
// Zeno experiment

enum class ZenoMode { NP, NM, WM };

inline std::string mode_name(ZenoMode m) {
    switch (m) {
    case ZenoMode::NP: return "NP";
    case ZenoMode::NM: return "NM";
    case ZenoMode::WM: return "WM";
    }
    return "?";
}

inline ZenoMode parse_mode(const std::string& s) {
    if (s == "NP") return ZenoMode::NP;
    if (s == "NM") return ZenoMode::NM;
    if (s == "WM") return ZenoMode::WM;
    throw std::invalid_argument("unknown mode '" + s + "' (NP, NM, WM)");
}

struct ZenoConfig {
    ZenoMode mode = ZenoMode::WM;
    int cycles = 4;
    int m = 5;
    double J = pi / 80;
    NoiseParams noise{1e-3, 128.0, 0.0, 1};
    int realizations = 20;
    PulseSet pulses{PulseKind::shaped, 2};
    double dt = 1.0 / 256;
    bool pulse_encoding = false;
    int workers = 1;
    /// Logical input amplitudes (normalized internally).
    std::array<cplx, 4> logical{cplx(0.6, 0.0), cplx(0.2, 0.4), cplx(-0.3, 0.3), cplx(0.0, -0.5)};
};

struct Checkpoint {
    double time;        // after the end of encoding
    std::string label;  // "Gz", "Gx" or "decode"
};

struct ZenoRecord {
    ZenoMode mode;
    double tau_c;
    double sigma;
    std::vector<Checkpoint> checkpoints;
    std::vector<std::vector<double>> fidelity;  // [realization][checkpoint]
    std::vector<std::vector<double>> sp;        // cumulative success probability
    std::vector<double> mean_infidelity, stderr_infidelity, mean_sp;

    void summarize() {
        const std::size_t nc = checkpoints.size(), nr = fidelity.size();
        mean_infidelity.assign(nc, 0.0);
        stderr_infidelity.assign(nc, 0.0);
        mean_sp.assign(nc, 0.0);
        for (std::size_t c = 0; c < nc; ++c) {
            double s = 0, s2 = 0, p = 0;
            for (std::size_t r = 0; r < nr; ++r) {
                const double v = 1.0 - fidelity[r][c];
                s += v;
                s2 += v * v;
                p += sp[r][c];
            }
            const double mean = s / double(nr);
            mean_infidelity[c] = mean;
            mean_sp[c] = p / double(nr);
            if (nr > 1)
                stderr_infidelity[c] = std::sqrt(std::max(0.0, (s2 - nr * mean * mean) / double(nr - 1)) / double(nr));
        }
    }
};

class ZenoExperiment {
public:
    explicit ZenoExperiment(ZenoConfig cfg)
        : cfg_(std::move(cfg)), graph_(build_chain(chain_qubits, cfg_.J)),
          compiler_(graph_, cfg_.pulses, cfg_.m) {
        if (cfg_.realizations < 1) throw std::invalid_argument("need at least one realization");
        if (cfg_.cycles < 1) throw std::invalid_argument("need at least one cycle");
        const auto circuits = measurement_circuits();
        gz_ = circuits.gz;
        gx_ = circuits.gx;
        enc_ = encode_circuit();
        sched_gz_ = compiler_.circuit(gz_);
        sched_gx_ = compiler_.circuit(gx_);
        if (cfg_.pulse_encoding) {
            sched_enc_ = compiler_.circuit(enc_);
            sched_dec_ = compiler_.circuit(reversed(enc_));
        }
        double norm = 0;
        for (auto c : cfg_.logical) norm += std::norm(c);
        for (auto& c : cfg_.logical) c /= std::sqrt(norm);
    }

    const ZenoConfig& config() const { return cfg_; }
    const Schedule& gz_schedule() const { return sched_gz_; }
    const Schedule& gx_schedule() const { return sched_gx_; }
    double cycle_duration() const { return sched_gz_.duration + sched_gx_.duration; }

    std::vector<Checkpoint> checkpoints() const {
        std::vector<Checkpoint> c;
        double t = 0.0;
        for (int k = 0; k < cfg_.cycles; ++k) {
            t += sched_gz_.duration;
            c.push_back({t, "Gz"});
            t += sched_gx_.duration;
            c.push_back({t, "Gx"});
        }
        c.push_back({t + (cfg_.pulse_encoding ? sched_dec_.duration : 0.0), "decode"});
        return c;
    }

    /// Chain state right after (ideal) encoding.
    Vector encoded_state() const { return embed_code_state(Code422::encode(cfg_.logical)); }

    /// Chain state before encoding: logical inputs on positions 2 and 3.
    Vector input_state() const {
        Vector v = Vector::Zero(dimension(chain_qubits));
        for (int k = 0; k < 4; ++k) {
            int idx = 0;
            if (k & 2) idx |= qubit_mask(chain_qubits, 2);
            if (k & 1) idx |= qubit_mask(chain_qubits, 3);
            v(idx) = cfg_.logical[k];
        }
        return v;
    }

    ZenoRecord run() const {
        ZenoRecord rec;
        rec.mode = cfg_.mode;
        rec.tau_c = cfg_.noise.tau_c;
        rec.sigma = cfg_.noise.sigma;
        rec.checkpoints = checkpoints();
        rec.fidelity.assign(cfg_.realizations, {});
        rec.sp.assign(cfg_.realizations, {});
        parallel_for(std::size_t(cfg_.realizations), cfg_.workers, [&](std::size_t r) {
            auto [f, p] = realization(r);
            rec.fidelity[r] = std::move(f);
            rec.sp[r] = std::move(p);
        });
        rec.summarize();
        return rec;
    }

    /// Fidelities and cumulative success probabilities at every checkpoint.
    std::pair<std::vector<double>, std::vector<double>> realization(std::size_t r) const {
        NoiseParams np = cfg_.noise;
        np.seed = derived_seed(cfg_.noise.seed, r, 0);
        const double enc_time = cfg_.pulse_encoding ? sched_enc_.duration : 0.0;
        const double dec_time = cfg_.pulse_encoding ? sched_dec_.duration : 0.0;
        const double total = enc_time + cfg_.cycles * cycle_duration() + dec_time;
        const NoiseTrajectory noise = generate_noise(chain_qubits, total, np);

        std::vector<double> fid, sp;
        double cum = 1.0;
        bool failed = false;
        Vector psi, ideal;
        double t = 0.0;

        auto evolve = [&](const Schedule& s) {
            EvolutionProblem p(graph_, s);
            p.noise = &noise;
            p.noise_offset = t;
            p.dt = cfg_.dt;
            psi = propagate_state(p, psi);
            t += s.duration;
        };
        auto free_evolve = [&](double duration, bool with_noise) -> void {
            Schedule s;
            s.n_qubits = chain_qubits;
            s.duration = duration;
            EvolutionProblem p(graph_, s);
            p.hard = true;
            if (with_noise) {
                p.noise = &noise;
                p.noise_offset = t;
                psi = propagate_state(p, psi);
                t += duration;
            } else {
                ideal = propagate_state(p, ideal);
            }
        };
        auto record = [&] {
            fid.push_back(failed ? 0.0 : std::min(1.0, state_fidelity(psi, ideal)));
            sp.push_back(failed ? 0.0 : cum);
        };

        if (cfg_.pulse_encoding && cfg_.mode != ZenoMode::NP) {
            psi = input_state();
            evolve(sched_enc_);
        } else {
            psi = encoded_state();
            t = enc_time;
        }
        ideal = encoded_state();

        for (int k = 0; k < cfg_.cycles; ++k) {
            for (int half = 0; half < 2; ++half) {
                const Schedule& s = half == 0 ? sched_gz_ : sched_gx_;
                const int anc = half == 0 ? 2 : ancilla_site;
                if (cfg_.mode == ZenoMode::NP) {
                    free_evolve(s.duration, true);
                    free_evolve(s.duration, false);
                } else {
                    if (!failed) evolve(s);
                    else t += s.duration;
                    apply_ideal(ideal, chain_qubits, half == 0 ? gz_ : gx_);
                    if (cfg_.mode == ZenoMode::WM && !failed) {
                        try {
                            cum *= project_ancilla(psi, chain_qubits, anc);
                        } catch (const DegenerateProjection&) {
                            failed = true;
                            cum = 0.0;
                        }
                    }
                }
                record();
            }
        }

        const Circuit dec = reversed(enc_);
        if (cfg_.pulse_encoding && cfg_.mode != ZenoMode::NP && !failed) {
            evolve(sched_dec_);
        } else if (cfg_.mode == ZenoMode::NP && cfg_.pulse_encoding) {
            free_evolve(dec_time, true);
            free_evolve(dec_time, false);
            apply_ideal(psi, chain_qubits, dec);
        } else if (!failed) {
            apply_ideal(psi, chain_qubits, dec);
        }
        apply_ideal(ideal, chain_qubits, dec);
        record();
        return {fid, sp};
    }

private:
    ZenoConfig cfg_;
    QubitGraph graph_;
    Compiler compiler_;
    Circuit gz_, gx_, enc_;
    Schedule sched_gz_, sched_gx_, sched_enc_, sched_dec_;
};

inline ZenoRecord run_zeno(const ZenoConfig& cfg) { return ZenoExperiment(cfg).run(); }

inline void write_zeno_rows(std::ostream& out, const ZenoRecord& r, bool header) {
    out.precision(10);
    if (header) out << "mode,tau_c,sigma,realization,time,checkpoint,fidelity,sp\n";
    for (std::size_t k = 0; k < r.fidelity.size(); ++k)
        for (std::size_t c = 0; c < r.checkpoints.size(); ++c)
            out << mode_name(r.mode) << ',' << r.tau_c << ',' << r.sigma << ',' << k << ','
                << r.checkpoints[c].time << ',' << r.checkpoints[c].label << ',' << r.fidelity[k][c] << ','
                << r.sp[k][c] << '\n';
}

inline void write_zeno_summary(std::ostream& out, const ZenoRecord& r, bool header) {
    out.precision(10);
    if (header) out << "mode,tau_c,sigma,time,checkpoint,mean_infidelity,stderr,sp\n";
    for (std::size_t c = 0; c < r.checkpoints.size(); ++c)
        out << mode_name(r.mode) << ',' << r.tau_c << ',' << r.sigma << ',' << r.checkpoints[c].time << ','
            << r.checkpoints[c].label << ',' << r.mean_infidelity[c] << ',' << r.stderr_infidelity[c] << ','
            << r.mean_sp[c] << '\n';
}

} // namespace ddgate
