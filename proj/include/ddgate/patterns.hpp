#pragma once

// Toggling patterns: per-qubit +-1 signs over the 2 tau_p slots of one
// decoupling block.
//
// Slot k (0-based) covers [2k-1, 2k+1] in block time; slot 0 wraps around
// ([period-1, period) and [0, 1)). A sign change between slot k and slot k+1
// (cyclically) is produced by a pi_x pulse centred at t = 2k+1, so every pulse
// of a block lies inside the block.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddgate {

inline constexpr double slot_length = 2.0;

struct TogglingPattern {
    std::vector<int> f;  // one +-1 entry per slot

    int slots() const { return int(f.size()); }
    double period() const { return slot_length * slots(); }

    int sum() const {
        int s = 0;
        for (int v : f) s += v;
        return s;
    }

    /// Boundaries k where f[k] != f[k+1 mod slots].
    std::vector<int> flip_boundaries() const {
        std::vector<int> out;
        for (int k = 0; k < slots(); ++k)
            if (f[k] != f[(k + 1) % slots()]) out.push_back(k);
        return out;
    }

    /// Pulse centres within [0, period).
    std::vector<double> flip_times() const {
        std::vector<double> out;
        for (int k : flip_boundaries()) out.push_back(slot_length * k + 1.0);
        return out;
    }

    int flip_count() const { return int(flip_boundaries().size()); }

    /// Sign in force at block time t (pulses treated as instantaneous at their centres).
    int sign_at(double t) const {
        const double p = period();
        double u = std::fmod(t + 1.0, p);
        if (u < 0) u += p;
        const int k = std::min(int(u / slot_length), slots() - 1);
        return f[k];
    }

    std::string str() const {
        std::string s;
        for (int v : f) s += v > 0 ? '+' : '-';
        return s;
    }

    static TogglingPattern parse(const std::string& s) {
        TogglingPattern p;
        for (char c : s) {
            if (c == '+') p.f.push_back(1);
            else if (c == '-') p.f.push_back(-1);
            else if (c != ' ' && c != ',')
                throw std::invalid_argument("pattern characters must be '+' or '-'");
        }
        if (p.f.empty()) throw std::invalid_argument("empty pattern");
        return p;
    }

    bool operator==(const TogglingPattern&) const = default;
};

inline int overlap(const TogglingPattern& a, const TogglingPattern& b) {
    if (a.slots() != b.slots()) throw std::invalid_argument("patterns differ in slot count");
    int s = 0;
    for (int k = 0; k < a.slots(); ++k) s += a.f[k] * b.f[k];
    return s;
}

inline bool flips_disjoint(const TogglingPattern& a, const TogglingPattern& b) {
    const auto fa = a.flip_boundaries(), fb = b.flip_boundaries();
    for (int k : fa)
        if (std::find(fb.begin(), fb.end(), k) != fb.end()) return false;
    return true;
}

struct PatternQuadruple {
    TogglingPattern A, B, C, D;
};

struct ConstraintCheck {
    std::string name;
    bool ok;
    std::string detail;
};

/// Every constraint the decoupling construction relies on, evaluated by
/// direct slot arithmetic.
inline std::vector<ConstraintCheck> check_quadruple(const PatternQuadruple& q) {
    std::vector<ConstraintCheck> out;
    const int n = q.A.slots();
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    const TogglingPattern* all[] = {&q.A, &q.B, &q.C, &q.D};
    const char names[] = {'A', 'B', 'C', 'D'};
    bool sizes = true;
    for (auto* p : all) sizes = sizes && p->slots() == n;
    if (!sizes) {
        add("slot count", false, "patterns differ in slot count");
        return out;
    }
    {
        std::ostringstream d;
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            d << "sum " << names[i] << "=" << all[i]->sum() << (i < 3 ? ", " : "");
            ok = ok && all[i]->sum() == 0;
        }
        add("(i) balanced", ok, d.str());
    }
    add("(ii) A.B = 0", overlap(q.A, q.B) == 0, "A.B=" + std::to_string(overlap(q.A, q.B)));
    add("(iii) C.D = slots/2", overlap(q.C, q.D) == n / 2 && n % 2 == 0,
        "C.D=" + std::to_string(overlap(q.C, q.D)));
    add("(iv) C.B = 0, D.A = 0", overlap(q.C, q.B) == 0 && overlap(q.D, q.A) == 0,
        "C.B=" + std::to_string(overlap(q.C, q.B)) + ", D.A=" + std::to_string(overlap(q.D, q.A)));
    {
        std::ostringstream d;
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            d << "flips " << names[i] << "=" << all[i]->flip_count() << (i < 3 ? ", " : "");
            ok = ok && all[i]->flip_count() % 2 == 0;
        }
        add("(v) even flips", ok, d.str());
    }
    bool start = true;
    for (auto* p : all) start = start && p->f[0] == 1;
    add("start sign +1", start, "");
    add("disjoint flips on coupled pairs",
        flips_disjoint(q.A, q.B) && flips_disjoint(q.C, q.B) && flips_disjoint(q.D, q.A) &&
            flips_disjoint(q.C, q.D),
        "pairs AB, CB, DA, CD");
    return out;
}

inline bool satisfies_all(const PatternQuadruple& q) {
    for (const auto& c : check_quadruple(q))
        if (!c.ok) return false;
    return true;
}

namespace detail {

/// All balanced patterns with a leading +1, in lexicographic order (+ before -).
inline std::vector<TogglingPattern> balanced_patterns(int slots) {
    std::vector<TogglingPattern> out;
    for (unsigned bits = 0; bits < (1u << slots); ++bits) {
        TogglingPattern p;
        p.f.resize(slots);
        for (int k = 0; k < slots; ++k) p.f[k] = (bits >> (slots - 1 - k)) & 1u ? -1 : 1;
        if (p.f[0] == 1 && p.sum() == 0) out.push_back(p);
    }
    return out;
}

} // namespace detail

/// Exhaustive search; returns the lexicographically smallest (A, B, C, D)
/// satisfying check_quadruple, or nothing if none exists at this slot count.
inline std::optional<PatternQuadruple> pattern_search(int slots = 8) {
    if (slots < 2 || slots > 16) throw std::invalid_argument("slot count must be in [2, 16]");
    const auto pats = detail::balanced_patterns(slots);
    for (const auto& A : pats)
        for (const auto& B : pats) {
            if (overlap(A, B) != 0 || !flips_disjoint(A, B)) continue;
            for (const auto& C : pats) {
                if (overlap(C, B) != 0 || !flips_disjoint(C, B)) continue;
                for (const auto& D : pats) {
                    PatternQuadruple q{A, B, C, D};
                    if (satisfies_all(q)) return q;
                }
            }
        }
    return std::nullopt;
}

/// All quadruples satisfying the constraints (used for reporting).
inline std::size_t count_quadruples(int slots = 8) {
    const auto pats = detail::balanced_patterns(slots);
    std::size_t n = 0;
    for (const auto& A : pats)
        for (const auto& B : pats)
            for (const auto& C : pats)
                for (const auto& D : pats)
                    if (satisfies_all({A, B, C, D})) ++n;
    return n;
}

struct RotationPatterns {
    TogglingPattern V1;  // sublattice A
    TogglingPattern V2;  // sublattice B
};

/// Idle patterns used during single-qubit gate blocks: the balanced,
/// mutually decoupling pair with the fewest flips (ties broken
/// lexicographically), which leaves the longest flip-free windows.
inline RotationPatterns rotation_patterns(int slots = 8) {
    const auto pats = detail::balanced_patterns(slots);
    std::optional<RotationPatterns> best;
    int best_flips = 1 << 20;
    for (const auto& a : pats)
        for (const auto& b : pats) {
            if (overlap(a, b) != 0 || !flips_disjoint(a, b)) continue;
            const int fl = a.flip_count() + b.flip_count();
            if (fl < best_flips) {
                best_flips = fl;
                best = RotationPatterns{a, b};
            }
        }
    if (!best) throw std::logic_error("no decoupling pattern pair");
    return *best;
}

/// Canonical patterns at 8 slots, computed once.
inline const PatternQuadruple& canonical_patterns() {
    static const PatternQuadruple q = *pattern_search(8);
    return q;
}

inline const RotationPatterns& canonical_rotation_patterns() {
    static const RotationPatterns r = rotation_patterns(8);
    return r;
}

} // namespace ddgate
