#pragma once

// Pulse schedules and the circuit-to-schedule compiler.
//
// Everything is organised in blocks of 16 tau_p. A block belongs to one of
// two families:
//   decoupling - idle qubits run V_A / V_B by sublattice; a coupled pair
//                being entangled runs V_C / V_D;
//   rotation   - idle qubits run V_1 / V_2; a qubit receiving a single-qubit
//                gate runs its own pattern plus the corrected-gate pulses.
// Every pattern starts and ends with frame sign +1, so blocks of either
// family concatenate freely.

#include "ddgate/dcg.hpp"
#include "ddgate/lattice.hpp"
#include "ddgate/patterns.hpp"
#include "ddgate/pulse_library.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace ddgate {

inline constexpr double block_length = 16.0;

struct PulseEvent {
    int qubit = 1;
    PulseShape shape;  // unit-duration profile; stretch widens it
    double start = 0.0;
    int stretch = 1;

    double length() const { return stretch * shape.duration; }
    double end() const { return start + length(); }
    double centre() const { return start + 0.5 * length(); }
    Axis axis() const { return shape.axis; }

    /// Control amplitude at absolute time t; zero outside the pulse.
    double amplitude_at(double t) const {
        if (t < start || t > end()) return 0.0;
        const double u = std::clamp((t - start) / stretch, 0.0, shape.duration);
        return amplitude(shape, u) / stretch;
    }
};

enum class BlockFamily { decoupling, rotation };

struct BlockInfo {
    double start = 0.0;
    BlockFamily family = BlockFamily::decoupling;
    std::string label;                      // logical operations served by the block
    std::vector<TogglingPattern> patterns;  // per qubit, index q-1
};

struct Marker {
    double time;
    int qubit;
};

struct Schedule {
    int n_qubits = 0;
    double duration = 0.0;
    std::vector<PulseEvent> events;
    std::vector<BlockInfo> blocks;
    std::vector<Marker> measurements;

    std::size_t block_count() const { return blocks.size(); }

    void append(const Schedule& other) {
        if (n_qubits == 0) n_qubits = other.n_qubits;
        if (other.n_qubits != n_qubits) throw std::invalid_argument("schedules differ in qubit count");
        for (auto e : other.events) {
            e.start += duration;
            events.push_back(e);
        }
        for (auto b : other.blocks) {
            b.start += duration;
            blocks.push_back(b);
        }
        for (auto m : other.measurements) measurements.push_back({m.time + duration, m.qubit});
        duration += other.duration;
    }

    /// Events lie inside [0, duration] and never overlap on one qubit.
    void validate() const {
        std::vector<std::vector<const PulseEvent*>> per(n_qubits + 1);
        for (const auto& e : events) {
            if (e.qubit < 1 || e.qubit > n_qubits) throw SchedulingError("event on unknown qubit");
            if (e.start < -1e-12 || e.end() > duration + 1e-12) throw SchedulingError("event outside the schedule");
            per[e.qubit].push_back(&e);
        }
        for (auto& v : per) {
            std::sort(v.begin(), v.end(), [](auto a, auto b) { return a->start < b->start; });
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i]->start < v[i - 1]->end() - 1e-12)
                    throw SchedulingError("overlapping pulses on qubit " + std::to_string(v[i]->qubit) +
                                          " at t=" + std::to_string(v[i]->start));
        }
    }

    /// Blocks in which some qubit's pattern is unbalanced. Empty when every
    /// qubit stays decoupled throughout.
    std::vector<std::string> audit() const {
        std::vector<std::string> problems;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (int(blocks[b].patterns.size()) != n_qubits)
                problems.push_back("block " + std::to_string(b) + ": missing patterns");
            for (std::size_t q = 0; q < blocks[b].patterns.size(); ++q)
                if (blocks[b].patterns[q].sum() != 0)
                    problems.push_back("block " + std::to_string(b) + ": qubit " + std::to_string(q + 1) +
                                       " pattern " + blocks[b].patterns[q].str() + " unbalanced");
        }
        return problems;
    }
};

// ---------------------------------------------------------------------------
// Pulse selection

/// Supplies the concrete pulse for a rotation. Shaped profiles come from a
/// library when it has them and are optimized (once per process) otherwise.
class PulseSet {
public:
    explicit PulseSet(PulseKind kind = PulseKind::hard, int order = 2, std::optional<PulseLibrary> lib = {})
        : kind_(kind), order_(order), lib_(std::move(lib)) {
        if (kind == PulseKind::shaped && order != 1 && order != 2)
            throw std::invalid_argument("shaped pulses have order 1 or 2");
    }

    PulseKind kind() const { return kind_; }
    int order() const { return order_; }

    std::string describe() const {
        return kind_ == PulseKind::shaped ? "shaped-o" + std::to_string(order_) : kind_name(kind_);
    }

    PulseShape get(Axis axis, double angle) const {
        if (kind_ == PulseKind::hard) return make_hard(angle, axis);
        if (kind_ == PulseKind::gaussian) return make_gaussian(angle, axis);
        const double mag = std::abs(angle);
        if (std::abs(mag - pi) > 1e-12 && std::abs(mag - pi / 2) > 1e-12)
            throw SchedulingError("shaped pulses exist only for rotations by pi and pi/2");
        PulseShape base = base_shape(axis, mag).with_axis(axis);
        return angle < 0 ? base.reversed() : base;
    }

private:
    PulseShape base_shape(Axis axis, double mag) const {
        if (lib_) {
            for (Axis a : {axis, Axis::x}) {
                const auto key = shape_key(mag, a, PulseKind::shaped, order_);
                if (lib_->contains(key)) return lib_->at(key).shape;
            }
        }
        static std::mutex mu;
        static std::map<std::tuple<int, double>, PulseShape> cache;
        std::lock_guard<std::mutex> lock(mu);
        const auto key = std::make_tuple(order_, mag);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, optimize_shape(mag, Axis::x, order_, default_harmonics(order_))).first;
        return it->second;
    }

    PulseKind kind_;
    int order_;
    std::optional<PulseLibrary> lib_;
};

// ---------------------------------------------------------------------------
// Circuits

enum class GateKind { cnot, h, zz, x, y, xbar, ybar, swap, measure };

struct Gate {
    GateKind kind;
    std::vector<int> qubits;
    double alpha = 0.0;  // zz only
};

struct Circuit {
    std::vector<std::vector<Gate>> layers;

    /// One layer per line; gates separated by whitespace or ';'.
    static Circuit parse(std::istream& in) {
        Circuit c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::replace(line.begin(), line.end(), ';', ' ');
            std::istringstream ls(line);
            std::vector<Gate> layer;
            std::string name;
            auto fail = [&](const std::string& what) {
                throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + what);
            };
            while (ls >> name) {
                static const std::map<std::string, std::pair<GateKind, int>> arity{
                    {"CNOT", {GateKind::cnot, 2}}, {"H", {GateKind::h, 1}},       {"ZZ", {GateKind::zz, 2}},
                    {"X", {GateKind::x, 1}},       {"Y", {GateKind::y, 1}},       {"XBAR", {GateKind::xbar, 1}},
                    {"YBAR", {GateKind::ybar, 1}}, {"SWAP", {GateKind::swap, 2}}, {"MEASURE", {GateKind::measure, 1}}};
                auto it = arity.find(name);
                if (it == arity.end()) fail("unknown gate '" + name + "'");
                Gate g{it->second.first, {}, 0.0};
                for (int k = 0; k < it->second.second; ++k) {
                    int q;
                    if (!(ls >> q)) fail(name + " needs " + std::to_string(it->second.second) + " qubit(s)");
                    g.qubits.push_back(q);
                }
                if (g.kind == GateKind::zz && !(ls >> g.alpha)) fail("ZZ needs an angle");
                layer.push_back(g);
            }
            if (!layer.empty()) c.layers.push_back(layer);
        }
        return c;
    }

    static Circuit parse(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    std::string format() const {
        static const char* names[] = {"CNOT", "H", "ZZ", "X", "Y", "XBAR", "YBAR", "SWAP", "MEASURE"};
        std::ostringstream out;
        out.precision(17);
        for (const auto& layer : layers) {
            for (std::size_t i = 0; i < layer.size(); ++i) {
                if (i) out << "; ";
                out << names[int(layer[i].kind)];
                for (int q : layer[i].qubits) out << ' ' << q;
                if (layer[i].kind == GateKind::zz) out << ' ' << layer[i].alpha;
            }
            out << '\n';
        }
        return out.str();
    }

    void add_layer(std::vector<Gate> layer) { layers.push_back(std::move(layer)); }
};

inline Gate cnot(int c, int d) { return {GateKind::cnot, {c, d}}; }
inline Gate hadamard(int q) { return {GateKind::h, {q}}; }
inline Gate swap_gate(int a, int b) { return {GateKind::swap, {a, b}}; }
inline Gate measure(int q) { return {GateKind::measure, {q}}; }

// ---------------------------------------------------------------------------
// Compiler

struct Rotation {
    int qubit;
    Axis axis;
    double angle;
};

/// Content of one block contributed by one gate.
struct Slice {
    BlockFamily family;
    std::optional<std::pair<int, int>> zz;
    std::optional<Rotation> rotation;
    std::string label;
};

class Compiler {
public:
    Compiler(QubitGraph graph, PulseSet pulses, int m = 5)
        : g_(std::move(graph)), pulses_(std::move(pulses)), m_(m) {
        require_bipartite(g_);
        if (m < 0) throw std::invalid_argument("m must be nonnegative");
    }

    const QubitGraph& graph() const { return g_; }
    const PulseSet& pulses() const { return pulses_; }
    int m() const { return m_; }

    Schedule idle(int blocks) const {
        if (blocks < 1) throw std::invalid_argument("need at least one block");
        Schedule s = empty();
        for (int b = 0; b < blocks; ++b) s.append(build_block(BlockFamily::decoupling, {}, {}, "idle"));
        return s;
    }

    Schedule zz(int c, int d, int m) const {
        check_edge(c, d);
        if (m < 0) throw std::invalid_argument("m must be nonnegative");
        return from_slices(zz_slices(c, d, m));
    }

    Schedule single_qubit(int q, Axis axis, double angle) const {
        g_.check(q);
        return from_slices({rotation_slice(q, axis, angle)});
    }

    Schedule cnot(int c, int d) const { return cnot(c, d, m_); }

    Schedule cnot(int c, int d, int m) const {
        check_edge(c, d);
        return from_slices(cnot_slices(c, d, m));
    }

    Schedule hadamard(int q) const {
        g_.check(q);
        return from_slices(hadamard_slices(q));
    }

    /// Lowers a layered circuit. Gates within a layer share blocks: each new
    /// block takes the family of the pending slice of the gate with the most
    /// remaining work, and every gate whose pending slice has that family
    /// advances.
    Schedule circuit(const Circuit& c) const {
        Schedule s = empty();
        for (std::size_t li = 0; li < c.layers.size(); ++li) {
            const auto& layer = c.layers[li];
            std::vector<TargetGroup> groups;
            std::vector<std::vector<Slice>> work;
            std::vector<int> measured;
            for (const auto& gate : layer) {
                if (gate.kind == GateKind::measure) {
                    g_.check(gate.qubits[0]);
                    measured.push_back(gate.qubits[0]);
                    groups.push_back({gate.qubits});
                    continue;
                }
                groups.push_back({gate.qubits});
                work.push_back(gate_slices(gate));
            }
            std::vector<Edge> bad;
            try {
                bad = validate_parallel_set(g_, groups);
            } catch (const std::invalid_argument& e) {
                throw SchedulingError("layer " + std::to_string(li + 1) + ": " + e.what());
            }
            if (!bad.empty())
                throw SchedulingError("layer " + std::to_string(li + 1) + ": gates coupled by edge (" +
                                      std::to_string(bad[0].i) + "," + std::to_string(bad[0].j) + ")");
            for (int q : measured) s.measurements.push_back({s.duration, q});

            std::vector<std::size_t> next(work.size(), 0);
            while (true) {
                std::optional<std::size_t> lead;
                for (std::size_t k = 0; k < work.size(); ++k) {
                    const std::size_t left = work[k].size() - next[k];
                    if (left > 0 && (!lead || left > work[*lead].size() - next[*lead])) lead = k;
                }
                if (!lead) break;
                const BlockFamily fam = work[*lead][next[*lead]].family;
                std::vector<std::pair<int, int>> pairs;
                std::vector<Rotation> rots;
                std::string label;
                for (std::size_t k = 0; k < work.size(); ++k) {
                    if (next[k] == work[k].size() || work[k][next[k]].family != fam) continue;
                    const Slice& sl = work[k][next[k]++];
                    if (sl.zz) pairs.push_back(*sl.zz);
                    if (sl.rotation) rots.push_back(*sl.rotation);
                    label += (label.empty() ? "" : " | ") + sl.label;
                }
                s.append(build_block(fam, pairs, rots, label));
            }
        }
        return s;
    }

    std::vector<Slice> gate_slices(const Gate& gate) const {
        const auto& q = gate.qubits;
        switch (gate.kind) {
        case GateKind::cnot: check_edge(q[0], q[1]); return cnot_slices(q[0], q[1], m_);
        case GateKind::h: g_.check(q[0]); return hadamard_slices(q[0]);
        case GateKind::zz: {
            check_edge(q[0], q[1]);
            const double J = g_.coupling(q[0], q[1]);
            const double reps = gate.alpha / (4.0 * J);
            const double m = std::round(reps);
            if (!(J != 0.0) || std::abs(reps - m) > 1e-9 || m < 0)
                throw SchedulingError("ZZ angle " + std::to_string(gate.alpha) +
                                      " is not a nonnegative multiple of 4J");
            return zz_slices(q[0], q[1], int(m));
        }
        case GateKind::x: g_.check(q[0]); return {rotation_slice(q[0], Axis::x, pi / 2)};
        case GateKind::y: g_.check(q[0]); return {rotation_slice(q[0], Axis::y, pi / 2)};
        case GateKind::xbar: g_.check(q[0]); return {rotation_slice(q[0], Axis::x, -pi / 2)};
        case GateKind::ybar: g_.check(q[0]); return {rotation_slice(q[0], Axis::y, -pi / 2)};
        case GateKind::swap: {
            check_edge(q[0], q[1]);
            auto s = cnot_slices(q[0], q[1], m_);
            auto t = cnot_slices(q[1], q[0], m_);
            s.insert(s.end(), t.begin(), t.end());
            t = cnot_slices(q[0], q[1], m_);
            s.insert(s.end(), t.begin(), t.end());
            return s;
        }
        case GateKind::measure: return {};
        }
        return {};
    }

private:
    Schedule empty() const {
        Schedule s;
        s.n_qubits = g_.size();
        return s;
    }

    void check_edge(int c, int d) const {
        g_.check(c);
        g_.check(d);
        if (!g_.has_edge(c, d))
            throw std::invalid_argument("qubits " + std::to_string(c) + " and " + std::to_string(d) +
                                        " are not coupled");
    }

    std::vector<Slice> zz_slices(int c, int d, int m) const {
        std::vector<Slice> out;
        for (int k = 0; k < m; ++k)
            out.push_back({BlockFamily::decoupling, std::make_pair(c, d), std::nullopt,
                           "ZZ(" + std::to_string(c) + "," + std::to_string(d) + ")"});
        return out;
    }

    static std::string rot_label(const Rotation& r) {
        std::ostringstream o;
        o << "R" << axis_name(r.axis) << "(" << r.angle / pi << "pi)@" << r.qubit;
        return o.str();
    }

    Slice rotation_slice(int q, Axis axis, double angle) const {
        Rotation r{q, axis, angle};
        return {BlockFamily::rotation, std::nullopt, r, rot_label(r)};
    }

    std::vector<Slice> cnot_slices(int c, int d, int m) const {
        std::vector<Slice> s;
        s.push_back(rotation_slice(d, Axis::y, pi / 2));
        for (auto& z : zz_slices(c, d, m)) s.push_back(z);
        s.push_back(rotation_slice(d, Axis::y, -pi / 2));
        s.push_back(rotation_slice(d, Axis::x, pi / 2));
        s.push_back(rotation_slice(c, Axis::z, pi / 2));
        return s;
    }

    std::vector<Slice> hadamard_slices(int q) const {
        return {rotation_slice(q, Axis::x, -pi), rotation_slice(q, Axis::y, -pi / 2)};
    }

    Schedule from_slices(const std::vector<Slice>& slices) const {
        Schedule s = empty();
        for (const auto& sl : slices) {
            std::vector<std::pair<int, int>> pairs;
            std::vector<Rotation> rots;
            if (sl.zz) pairs.push_back(*sl.zz);
            if (sl.rotation) rots.push_back(*sl.rotation);
            s.append(build_block(sl.family, pairs, rots, sl.label));
        }
        return s;
    }

    Schedule build_block(BlockFamily fam, const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<Rotation>& rots, const std::string& label) const {
        const int n = g_.size();
        Schedule s = empty();
        s.duration = block_length;
        BlockInfo info{0.0, fam, label, {}};
        const auto& dd = canonical_patterns();
        const auto& rp = canonical_rotation_patterns();
        for (int q = 1; q <= n; ++q) {
            const bool a = g_.label(q) == Sublattice::A;
            if (fam == BlockFamily::decoupling) info.patterns.push_back(a ? dd.A : dd.B);
            else info.patterns.push_back(a ? rp.V1 : rp.V2);
        }
        for (auto [c, d] : pairs) {
            const int qa = g_.label(c) == Sublattice::A ? c : d;
            const int qb = qa == c ? d : c;
            info.patterns[qa - 1] = dd.C;
            info.patterns[qb - 1] = dd.D;
        }
        const PulseShape flip = pulses_.get(Axis::x, pi);
        for (int q = 1; q <= n; ++q)
            for (double t : info.patterns[q - 1].flip_times()) s.events.push_back({q, flip, t - 0.5, 1});
        for (const auto& r : rots) {
            const bool a = g_.label(r.qubit) == Sublattice::A;
            const auto& own = info.patterns[r.qubit - 1];
            const auto& nb = a ? rp.V2 : rp.V1;
            const DcgLayout layout = dcg_layout(own, nb, r.axis, r.angle);
            for (const auto& p : layout.pulses)
                s.events.push_back({r.qubit, pulses_.get(r.axis, p.angle), p.start, p.stretch});
        }
        std::sort(s.events.begin(), s.events.end(), [](const PulseEvent& x, const PulseEvent& y) {
            return std::tie(x.start, x.qubit) < std::tie(y.start, y.qubit);
        });
        s.blocks.push_back(info);
        s.validate();
        return s;
    }

    QubitGraph g_;
    PulseSet pulses_;
    int m_;
};

} // namespace ddgate
