#pragma once

// Dynamically corrected single-qubit gates inside one decoupling block.
//
// A gate R on qubit q is built from three pulse-antipulse pairs and one
// stretched pulse (twice the duration, half the amplitude) placed in the
// flip-free windows of the block. The layout is chosen so that, for hard
// pulses, the toggling-frame shift term and the Ising terms to the
// neighbours average to zero at first and second order. Self-refocusing
// shaped pulses inherit these cancellations up to their own order.

#include "ddgate/linalg.hpp"
#include "ddgate/patterns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ddgate {

class SchedulingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HardPulse {
    double time;  // centre
    Axis axis;
    double angle;
};

inline Eigen::Matrix3d so3_rotation(Axis a, double angle) {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    n(int(a)) = 1.0;
    return Eigen::AngleAxisd(angle, n).toRotationMatrix();
}

/// Toggling-frame averages of a single qubit's sigma^z under hard pulses.
/// Segment k has duration d_k, frame direction n_k and neighbour sign f_k.
struct SkeletonTerms {
    Eigen::Vector3d shift_first;   // sum d n
    Eigen::Vector3d ising_first;   // sum d f n
    Eigen::Vector3d shift_second;  // sum_{i>k} d_i d_k n_i x n_k
    Eigen::Vector3d cross_second;  // same with (f_i + f_k)
    Eigen::Vector3d ising_second;  // same with f_i f_k

    double worst() const {
        return std::max({shift_first.norm(), ising_first.norm(), shift_second.norm(),
                         cross_second.norm(), ising_second.norm()});
    }
};

inline SkeletonTerms analyze_skeleton(std::vector<HardPulse> pulses, const TogglingPattern& neighbour) {
    std::sort(pulses.begin(), pulses.end(), [](const HardPulse& a, const HardPulse& b) { return a.time < b.time; });
    const double period = neighbour.period();
    const auto nb_flips = neighbour.flip_times();

    std::vector<double> cuts{0.0, period};
    for (const auto& p : pulses) cuts.push_back(p.time);
    for (double t : nb_flips) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());

    struct Segment { double d; Eigen::Vector3d n; double f; };
    std::vector<Segment> segs;
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    std::size_t next = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        while (next < pulses.size() && pulses[next].time <= cuts[i] + 1e-12) {
            frame = so3_rotation(pulses[next].axis, pulses[next].angle) * frame;
            ++next;
        }
        const double d = cuts[i + 1] - cuts[i];
        if (d <= 1e-12) continue;
        segs.push_back({d, frame.transpose() * Eigen::Vector3d::UnitZ(),
                        double(neighbour.sign_at(0.5 * (cuts[i] + cuts[i + 1])))});
    }

    SkeletonTerms t{};
    t.shift_first.setZero();
    t.ising_first.setZero();
    t.shift_second.setZero();
    t.cross_second.setZero();
    t.ising_second.setZero();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        t.shift_first += segs[i].d * segs[i].n;
        t.ising_first += segs[i].d * segs[i].f * segs[i].n;
        for (std::size_t k = 0; k < i; ++k) {
            const Eigen::Vector3d c = segs[i].d * segs[k].d * segs[i].n.cross(segs[k].n);
            t.shift_second += c;
            t.cross_second += (segs[i].f + segs[k].f) * c;
            t.ising_second += segs[i].f * segs[k].f * c;
        }
    }
    return t;
}

/// A gate pulse inside a block, before a concrete shape is attached.
struct GatePulse {
    double start;
    int stretch;   // 1 or 2
    double angle;  // signed rotation angle
};

struct DcgLayout {
    Axis axis = Axis::x;
    double angle = 0.0;
    std::vector<GatePulse> pulses;  // empty for a zero rotation
    int stretched_window = -1;
    std::array<double, 2> window_bounds{};  // of the stretched window, for reports
};

/// Flip-free intervals of length >= 2 that avoid every pulse of the own and
/// neighbour patterns; the four longest, in time order.
inline std::vector<std::pair<double, double>> free_windows(const TogglingPattern& own, const TogglingPattern& neighbour) {
    std::vector<std::pair<double, double>> busy;
    for (double t : own.flip_times()) busy.push_back({t - 0.5, t + 0.5});
    for (double t : neighbour.flip_times()) busy.push_back({t - 0.5, t + 0.5});
    std::sort(busy.begin(), busy.end());
    std::vector<std::pair<double, double>> free;
    double cursor = 0.0;
    for (auto [a, b] : busy) {
        if (a > cursor) free.push_back({cursor, a});
        cursor = std::max(cursor, b);
    }
    if (own.period() > cursor) free.push_back({cursor, own.period()});
    std::vector<std::pair<double, double>> usable;
    for (auto w : free)
        if (w.second - w.first >= 2.0 - 1e-12) usable.push_back(w);
    std::stable_sort(usable.begin(), usable.end(), [](auto x, auto y) {
        return (x.second - x.first) > (y.second - y.first);
    });
    if (usable.size() > 4) usable.resize(4);
    std::sort(usable.begin(), usable.end());
    return usable;
}

inline Mat2 skeleton_product(std::vector<HardPulse> pulses) {
    std::sort(pulses.begin(), pulses.end(), [](const HardPulse& a, const HardPulse& b) { return a.time < b.time; });
    Mat2 u = Mat2::Identity();
    for (const auto& p : pulses) u = rotation(p.axis, p.angle) * u;
    return u;
}

namespace detail {

inline std::vector<HardPulse> own_flips(const TogglingPattern& own) {
    std::vector<HardPulse> out;
    for (double t : own.flip_times()) out.push_back({t, Axis::x, pi});
    return out;
}

inline DcgLayout search_layout(const TogglingPattern& own, const TogglingPattern& neighbour, Axis axis,
                               double angle, double grid) {
    DcgLayout layout;
    layout.axis = axis;
    layout.angle = angle;
    if (angle == 0.0) return layout;

    const auto windows = free_windows(own, neighbour);
    if (windows.size() < 4)
        throw SchedulingError("fewer than four flip-free windows for a corrected gate");

    std::array<std::vector<double>, 4> starts;
    for (int w = 0; w < 4; ++w)
        for (double s = windows[w].first; s + 2.0 <= windows[w].second + 1e-12; s += grid)
            starts[w].push_back(s);

    const auto flips = own_flips(own);
    const Mat2 target = rotation(axis, angle);
    const Mat2 idle = skeleton_product(flips);

    for (int sw = 0; sw < 4; ++sw)
        for (int ob = 0; ob < 8; ++ob) {
            const std::array<int, 3> orders{(ob & 4) ? -1 : 1, (ob & 2) ? -1 : 1, (ob & 1) ? -1 : 1};
            std::array<std::size_t, 4> idx{};
            while (true) {
                for (int sign : {1, -1}) {
                    std::vector<GatePulse> gp;
                    int oi = 0;
                    for (int w = 0; w < 4; ++w) {
                        const double s = starts[w][idx[w]];
                        if (w == sw) {
                            gp.push_back({s, 2, sign * angle});
                        } else {
                            const int o = orders[oi++];
                            gp.push_back({s, 1, o * angle});
                            gp.push_back({s + 1.0, 1, -o * angle});
                        }
                    }
                    std::vector<HardPulse> hp = flips;
                    for (const auto& p : gp) hp.push_back({p.start + 0.5 * p.stretch, axis, p.angle});
                    if (phase_adjusted_distance(skeleton_product(hp), target * idle) > 1e-12) continue;
                    if (analyze_skeleton(hp, neighbour).worst() > 1e-9) continue;
                    layout.pulses = gp;
                    layout.stretched_window = sw;
                    layout.window_bounds = {windows[sw].first, windows[sw].second};
                    return layout;
                }
                int w = 3;
                while (w >= 0 && ++idx[w] == starts[w].size()) idx[w--] = 0;
                if (w < 0) break;
            }
        }
    throw SchedulingError("no corrected-gate layout cancels the skeleton terms for this rotation");
}

} // namespace detail

/// Deterministic, cached layout search over a 0.5 tau_p grid, refined to 0.25
/// if the coarse grid has no solution.
inline DcgLayout dcg_layout(const TogglingPattern& own, const TogglingPattern& neighbour, Axis axis, double angle) {
    static std::mutex mu;
    static std::map<std::tuple<std::string, std::string, int, double>, DcgLayout> cache;
    const auto key = std::make_tuple(own.str(), neighbour.str(), int(axis), angle);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    DcgLayout layout;
    try {
        layout = detail::search_layout(own, neighbour, axis, angle, 0.5);
    } catch (const SchedulingError&) {
        layout = detail::search_layout(own, neighbour, axis, angle, 0.25);
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, layout);
    return layout;
}

} // namespace ddgate
