#pragma once

// Bipartite Ising coupling graphs and static chemical shifts.
//
// Graph file format (one record per line, '#' starts a comment):
//   qubit <index> <A|B>
//   edge <i> <j> <J>
// Every qubit 1..n must be declared; every edge must join A to B.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddgate {

enum class Sublattice { A, B };

struct Edge {
    int i = 0;
    int j = 0;
    double J = 0.0;
};

class QubitGraph {
public:
    QubitGraph() = default;

    QubitGraph(int n, std::vector<Sublattice> labels) : n_(n), labels_(std::move(labels)) {
        if (n < 1) throw std::invalid_argument("graph needs at least one qubit");
        if (int(labels_.size()) != n) throw std::invalid_argument("one sublattice label per qubit");
    }

    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    Sublattice label(int q) const { check(q); return labels_[q - 1]; }

    void add_edge(int i, int j, double J) {
        check(i);
        check(j);
        if (i == j) throw std::invalid_argument("self-loop on qubit " + std::to_string(i));
        if (has_edge(i, j)) throw std::invalid_argument("duplicate edge");
        edges_.push_back({std::min(i, j), std::max(i, j), J});
    }

    bool has_edge(int i, int j) const { return find_edge(i, j) != nullptr; }

    double coupling(int i, int j) const {
        const Edge* e = find_edge(i, j);
        return e ? e->J : 0.0;
    }

    std::vector<int> neighbors(int q) const {
        std::vector<int> out;
        for (const auto& e : edges_) {
            if (e.i == q) out.push_back(e.j);
            if (e.j == q) out.push_back(e.i);
        }
        return out;
    }

    /// Edges joining equal labels; empty iff the labelling is a proper 2-colouring.
    std::vector<Edge> label_conflicts() const {
        std::vector<Edge> bad;
        for (const auto& e : edges_)
            if (labels_[e.i - 1] == labels_[e.j - 1]) bad.push_back(e);
        return bad;
    }

    bool is_bipartite() const { return label_conflicts().empty(); }

    void check(int q) const {
        if (q < 1 || q > n_) throw std::invalid_argument("unknown qubit " + std::to_string(q));
    }

private:
    const Edge* find_edge(int i, int j) const {
        for (const auto& e : edges_)
            if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return &e;
        return nullptr;
    }

    int n_ = 0;
    std::vector<Sublattice> labels_;
    std::vector<Edge> edges_;
};

inline QubitGraph build_chain(int n, double J) {
    if (n < 1) throw std::invalid_argument("chain needs at least one qubit");
    std::vector<Sublattice> labels(n);
    for (int q = 1; q <= n; ++q) labels[q - 1] = (q % 2) ? Sublattice::A : Sublattice::B;
    QubitGraph g(n, labels);
    for (int q = 1; q < n; ++q) g.add_edge(q, q + 1, J);
    return g;
}

/// Fails unless every edge joins A to B (odd cycles can never pass).
inline void require_bipartite(const QubitGraph& g) {
    const auto bad = g.label_conflicts();
    if (!bad.empty())
        throw std::invalid_argument("edge (" + std::to_string(bad[0].i) + "," +
                                    std::to_string(bad[0].j) + ") joins equal sublattices");
}

inline QubitGraph parse_graph(std::istream& in) {
    std::vector<std::pair<int, Sublattice>> qubits;
    std::vector<Edge> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "qubit") {
            int q;
            std::string lab;
            if (!(ls >> q >> lab) || (lab != "A" && lab != "B"))
                throw std::invalid_argument("graph line " + std::to_string(lineno) + ": expected 'qubit <i> <A|B>'");
            qubits.emplace_back(q, lab == "A" ? Sublattice::A : Sublattice::B);
        } else if (kw == "edge") {
            Edge e;
            if (!(ls >> e.i >> e.j >> e.J))
                throw std::invalid_argument("graph line " + std::to_string(lineno) + ": expected 'edge <i> <j> <J>'");
            edges.push_back(e);
        } else {
            throw std::invalid_argument("graph line " + std::to_string(lineno) + ": unknown record '" + kw + "'");
        }
    }
    const int n = int(qubits.size());
    std::vector<Sublattice> labels(n);
    std::vector<bool> seen(n, false);
    for (auto [q, lab] : qubits) {
        if (q < 1 || q > n || seen[q - 1]) throw std::invalid_argument("qubits must be numbered 1..n once each");
        seen[q - 1] = true;
        labels[q - 1] = lab;
    }
    QubitGraph g(n, labels);
    for (const auto& e : edges) g.add_edge(e.i, e.j, e.J);
    require_bipartite(g);
    return g;
}

/// "chain:<n>" or a path to a graph file. The chain shorthand uses coupling J.
inline QubitGraph load_graph(const std::string& source, double J) {
    if (source.rfind("chain:", 0) == 0) {
        const std::string num = source.substr(6);
        std::size_t used = 0;
        int n = 0;
        try { n = std::stoi(num, &used); } catch (const std::exception&) { used = 0; }
        if (used == 0 || used != num.size()) throw std::invalid_argument("bad chain size in '" + source + "'");
        return build_chain(n, J);
    }
    std::ifstream in(source);
    if (!in) throw std::invalid_argument("cannot open graph file " + source);
    return parse_graph(in);
}

/// A set of simultaneously executed gates: single qubits and coupled pairs.
struct TargetGroup {
    std::vector<int> qubits;
};

/// Edges of g that connect two different target groups. Pairs must be edges.
inline std::vector<Edge> validate_parallel_set(const QubitGraph& g, const std::vector<TargetGroup>& groups) {
    std::vector<int> owner(g.size() + 1, -1);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& qs = groups[k].qubits;
        if (qs.empty() || qs.size() > 2) throw std::invalid_argument("target groups hold one or two qubits");
        for (int q : qs) {
            g.check(q);
            if (owner[q] != -1) throw std::invalid_argument("qubit " + std::to_string(q) + " targeted twice");
            owner[q] = int(k);
        }
        if (qs.size() == 2 && !g.has_edge(qs[0], qs[1]))
            throw std::invalid_argument("pair (" + std::to_string(qs[0]) + "," + std::to_string(qs[1]) +
                                        ") is not an edge");
    }
    std::vector<Edge> violations;
    for (const auto& e : g.edges())
        if (owner[e.i] != -1 && owner[e.j] != -1 && owner[e.i] != owner[e.j]) violations.push_back(e);
    return violations;
}

struct ShiftAssignment {
    std::vector<double> delta;  // per qubit, index q-1
    double rms = 0.0;
    std::uint64_t seed = 0;

    double operator()(int q) const { return delta.at(q - 1); }
};

inline ShiftAssignment zero_shifts(int n) { return {std::vector<double>(n, 0.0), 0.0, 0}; }

/// i.i.d. zero-mean Gaussian shifts with standard deviation delta_rms.
inline ShiftAssignment draw_shifts(const QubitGraph& g, double delta_rms, std::uint64_t seed) {
    if (!(delta_rms >= 0.0)) throw std::invalid_argument("delta_rms must be nonnegative");
    ShiftAssignment s{std::vector<double>(g.size(), 0.0), delta_rms, seed};
    if (delta_rms == 0.0) return s;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, delta_rms);
    for (double& d : s.delta) d = normal(rng);
    return s;
}

} // namespace ddgate
