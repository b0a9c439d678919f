#include "ddgate/pulse_library.hpp"
#include "ddgate/pulse_shapes.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace ddgate;

namespace {

const PulseShape& optimized(double angle, Axis axis, int order) {
    static std::map<std::tuple<double, int, int>, PulseShape> cache;
    const auto key = std::make_tuple(angle, int(axis), order);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, optimize_shape(angle, axis, order, default_harmonics(order))).first;
    return it->second;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

} // namespace

TEST(PulseShape, ShapedEndpointsVanish) {
    const PulseShape s = make_shaped(pi, Axis::x, {-2.0 * pi, pi});
    EXPECT_NEAR(amplitude(s, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(amplitude(s, 1.0), 0.0, 1e-12);
    EXPECT_THROW(make_shaped(pi, Axis::x, {1.0}), std::invalid_argument);
    EXPECT_THROW(make_shaped(pi, Axis::x, {}), std::invalid_argument);
}

TEST(PulseShape, AmplitudeOutsideSupportThrows) {
    const PulseShape s = make_gaussian(pi, Axis::x);
    EXPECT_THROW(amplitude(s, -0.1), std::out_of_range);
    EXPECT_THROW(amplitude(s, 1.1), std::out_of_range);
    EXPECT_THROW(amplitude(make_hard(pi, Axis::x), 0.5), std::invalid_argument);
}

TEST(PulseShape, AccumulatedAngleMatchesQuadrature) {
    const PulseShape shaped = make_shaped(pi / 2, Axis::y, {-2.0, 1.0, 1.0 - pi / 2});
    const PulseShape gauss = make_gaussian(pi, Axis::x);
    for (const auto* s : {&shaped, &gauss}) {
        for (double t : {0.13, 0.5, 0.77, 1.0}) {
            const double q = simpson([&](double u) { return amplitude(*s, u); }, 0.0, t);
            EXPECT_NEAR(accumulated_angle(*s, t), q, 1e-10);
        }
        EXPECT_NEAR(accumulated_angle(*s, 1.0), s->angle, 1e-12);
    }
}

TEST(PulseShape, GaussianEndsAtZeroAndAreaIsAngle) {
    const PulseShape g = make_gaussian(pi / 2, Axis::y);
    EXPECT_NEAR(amplitude(g, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(simpson([&](double u) { return amplitude(g, u); }, 0.0, 1.0), pi / 2, 1e-10);
}

TEST(PulseShape, UnshiftedPropagatorIsTheRotation) {
    const PulseShape s = make_shaped(pi, Axis::y, {-2.5 * pi, 1.5 * pi});
    const Mat2 u = single_qubit_propagator(s, 0.0);
    EXPECT_LT(phase_adjusted_distance(u, rotation(Axis::y, pi)), 1e-10);
    EXPECT_LT(phase_adjusted_distance(u, oracle::pulse_propagator(s, 0.0)), 1e-10);
}

TEST(PulseShape, ReversedPulseUndoesTheRotation) {
    const PulseShape s = make_shaped(pi / 2, Axis::x, {-1.0, 1.0 - pi / 2});
    const Mat2 u = single_qubit_propagator(s, 0.0) * single_qubit_propagator(s.reversed(), 0.0);
    EXPECT_LT(phase_adjusted_distance(u, Mat2::Identity()), 1e-10);
}

TEST(PulseShape, HardPulseHasNoDefect) {
    const OrderDefect d = order_defect(make_hard(pi, Axis::x));
    EXPECT_EQ(d.first, 0.0);
    EXPECT_EQ(d.second, 0.0);
}

TEST(PulseShape, GaussianIsNotSelfRefocusing) {
    const auto d = oracle::defect(make_gaussian(pi, Axis::x));
    EXPECT_GT(d.first, 0.1);
    // traceless derivative: Frobenius norm is sqrt(2) times the operator norm
    EXPECT_NEAR(order_defect(make_gaussian(pi, Axis::x)).first, d.first / std::sqrt(2.0), 1e-6);
}

TEST(Optimizer, RejectsTooFewHarmonics) {
    EXPECT_THROW(optimize_shape(pi, Axis::x, 2, 1), std::invalid_argument);
    EXPECT_THROW(optimize_shape(pi, Axis::x, 3, 4), std::invalid_argument);
}

TEST(Optimizer, SecondOrderShapesRefocusUnderIndependentCheck) {
    const std::pair<double, Axis> targets[] = {{pi, Axis::x}, {pi / 2, Axis::x}, {pi / 2, Axis::y}};
    for (auto [angle, axis] : targets) {
        const PulseShape& s = optimized(angle, axis, 2);
        EXPECT_EQ(s.axis, axis);
        EXPECT_NEAR(accumulated_angle(s, 1.0), angle, 1e-12);
        EXPECT_NEAR(amplitude(s, 0.0), 0.0, 1e-9);
        const auto d = oracle::defect(s);
        EXPECT_LT(d.first, 1e-8) << angle;
        EXPECT_LT(d.second, 1e-8) << angle;
    }
}

TEST(Optimizer, FirstOrderShapeLeavesSecondOrderDefect) {
    const PulseShape& s = optimized(pi, Axis::x, 1);
    const auto d = oracle::defect(s);
    EXPECT_LT(d.first, 1e-8);
    EXPECT_GT(d.second, 1e-4);
}

TEST(Optimizer, IsDeterministic) {
    const PulseShape a = optimize_shape(pi / 2, Axis::y, 1, 2);
    const PulseShape b = optimize_shape(pi / 2, Axis::y, 1, 2);
    EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(PulseLibrary, RoundTripsThroughJson) {
    PulseLibrary lib;
    const PulseShape s = make_shaped(pi, Axis::x, {-2.0 * pi, pi});
    lib.put(shape_key(pi, Axis::x, PulseKind::shaped, 2), s, 2);
    lib.put(shape_key(pi / 2, Axis::y, PulseKind::gaussian, 0), make_gaussian(pi / 2, Axis::y), 0);
    const auto path = std::filesystem::temp_directory_path() / "ddgate_library_roundtrip.json";
    lib.save(path.string());
    const PulseLibrary back = PulseLibrary::load(path.string());
    std::filesystem::remove(path);
    const auto& e = back.at("pi_x_o2");
    EXPECT_EQ(e.order, 2);
    EXPECT_EQ(e.shape.coefficients, s.coefficients);
    EXPECT_EQ(back.at("pi2_y_gaussian").shape.kind, PulseKind::gaussian);
    EXPECT_THROW(back.at("missing"), std::out_of_range);
}

TEST(PulseLibrary, KeysEncodeAngleAxisAndKind) {
    EXPECT_EQ(shape_key(pi / 2, Axis::y, PulseKind::shaped, 2), "pi2_y_o2");
    EXPECT_EQ(shape_key(pi, Axis::x, PulseKind::hard, 0), "pi_x_hard");
}
