#include "ddgate/metrics.hpp"
#include "ddgate/noise.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ddgate;

TEST(Spline, InterpolatesKnotsAndIntegratesCubics) {
    std::vector<double> y;
    for (int k = 0; k <= 40; ++k) y.push_back(std::sin(0.3 * k));
    const UniformSpline s(0.5, y);
    for (int k = 0; k <= 40; ++k) EXPECT_NEAR(s(0.5 * k), y[k], 1e-14);
    // integral against Simpson on the spline itself
    for (double t : {0.0, 0.7, 5.25, 19.9, 20.0}) {
        const int n = 4000;
        const double h = t / n;
        double q = 0;
        if (t > 0) {
            q = s(0) + s(t);
            for (int i = 1; i < n; ++i) q += (i % 2 ? 4 : 2) * s(i * h);
            q *= h / 3;
        }
        EXPECT_NEAR(s.integral(t), q, 1e-10) << t;
    }
}

TEST(Noise, ZeroAmplitudeGivesSilence) {
    const auto n = generate_noise(3, 50.0, {0.0, 128.0, 0.0, 1});
    for (double t : {0.0, 13.0, 50.0}) {
        EXPECT_EQ(n.evaluate(2, t), 0.0);
        EXPECT_EQ(n.integral(3, t), 0.0);
    }
}

TEST(Noise, DeterministicPerSeedAndIndependentPerQubit) {
    const NoiseParams p{1e-3, 32.0, 0.0, 11};
    const auto a = generate_noise(2, 300.0, p), b = generate_noise(2, 300.0, p);
    NoiseParams p2 = p;
    p2.seed = 12;
    const auto c = generate_noise(2, 300.0, p2);
    EXPECT_EQ(a.evaluate(1, 123.4), b.evaluate(1, 123.4));
    EXPECT_NE(a.evaluate(1, 123.4), c.evaluate(1, 123.4));
    EXPECT_NE(a.evaluate(1, 123.4), a.evaluate(2, 123.4));
}

TEST(Noise, RejectsCoarseGrids) {
    EXPECT_THROW(generate_noise(1, 10.0, {1e-3, 16.0, 4.0, 1}), std::invalid_argument);
    EXPECT_NO_THROW(generate_noise(1, 10.0, {1e-3, 16.0, 2.0, 1}));
    EXPECT_THROW(generate_noise(1, 10.0, {1e-3, 16.0, 1.0, 1}).evaluate(1, 11.0), std::out_of_range);
}

TEST(Noise, CsvListsKnots) {
    const auto n = generate_noise(1, 16.0, {1e-3, 16.0, 0.0, 1});
    std::ostringstream out;
    n.write_csv(out);
    const std::string s = out.str();
    EXPECT_EQ(s.rfind("qubit,t,B\n", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 17);
}

TEST(Noise, StationaryVarianceMatchesSigma) {
    const NoiseParams base{2e-3, 16.0, 0.0, 0};
    double s2 = 0;
    int count = 0;
    for (int r = 0; r < 400; ++r) {
        NoiseParams p = base;
        p.seed = 1000 + r;
        const auto n = generate_noise(1, 64.0, p);
        for (double t : {3.0, 31.0, 60.5}) {
            s2 += n.evaluate(1, t) * n.evaluate(1, t);
            ++count;
        }
    }
    EXPECT_NEAR(std::sqrt(s2 / count), 2e-3, 0.1 * 2e-3);
}

TEST(Metrics, GateInfidelityEdgeCases) {
    const Matrix id = Matrix::Identity(4, 4);
    EXPECT_NEAR(gate_infidelity(std::exp(I * 0.3) * id, id, 2), 0.0, 1e-15);
    const Matrix x = embed(pauli(Axis::x), 2, 1);
    EXPECT_NEAR(gate_infidelity(x, id, 2), 1.0, 1e-15);
    EXPECT_THROW(gate_infidelity(id, Matrix::Identity(2, 2), 2), std::invalid_argument);
}

TEST(Metrics, SlopeOfAnExactPowerLaw) {
    const auto xs = log_grid(1e-3, 1.0, 13);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.7 * std::pow(x, 5.3));
    for (double s : slope_estimate(xs, ys)) EXPECT_NEAR(s, 5.3, 1e-6);
    EXPECT_NEAR(fit_slope(xs, ys), 5.3, 1e-9);
    EXPECT_THROW(slope_estimate({1.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(fit_slope({1.0, 2.0}, {1.0, -1.0}), std::invalid_argument);
}

TEST(Metrics, LogGridEndpoints) {
    const auto g = log_grid(1e-3, 1.0, 19);
    EXPECT_NEAR(g.front(), 1e-3, 1e-18);
    EXPECT_NEAR(g.back(), 1.0, 1e-15);
    EXPECT_NEAR(g[6] / g[5], g[1] / g[0], 1e-12);
    EXPECT_THROW(log_grid(0.0, 1.0, 5), std::invalid_argument);
}

TEST(Metrics, BenchIsDeterministicAcrossWorkerCounts) {
    const Compiler c(build_chain(3, pi / 80), PulseSet(PulseKind::shaped, 1), 1);
    GateSpec g;
    g.q1 = 2;
    g.axis = Axis::x;
    BenchOptions o;
    o.draws = 3;
    o.dt = 1.0 / 64;
    const auto grid = log_grid(0.05, 0.5, 3);
    const auto a = run_gate_bench(c, g, grid, o);
    o.workers = 3;
    const auto b = run_gate_bench(c, g, grid, o);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_LT(a.mean[0], a.mean[2]);
    std::ostringstream out;
    write_bench_csv(out, a);
    EXPECT_EQ(out.str().rfind("delta,mean_infidelity,stderr,slope\n", 0), 0u);
}

TEST(Metrics, HardPulseBenchIsShiftImmune) {
    const Compiler c(build_chain(4, pi / 80), PulseSet(PulseKind::hard), 5);
    GateSpec g;
    g.kind = GateSpec::Kind::cnot;
    g.q1 = 2;
    g.q2 = 3;
    BenchOptions o;
    o.draws = 2;
    const auto r = run_gate_bench(c, g, {0.01, 1.0}, o);
    for (double m : r.mean) EXPECT_LT(m, 1e-12);
}
