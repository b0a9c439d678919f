#include "ddgate/qec.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ddgate;

namespace {

// Codewords written out bit by bit: |x1 x2> -> (|0 x1 x2 p> + |1 ~x1 ~x2 ~p>)/sqrt2.
Vector explicit_codeword(const std::string& a, const std::string& b) {
    Vector v = Vector::Zero(16);
    v(std::stoi(a, nullptr, 2)) = 1 / std::sqrt(2.0);
    v(std::stoi(b, nullptr, 2)) = 1 / std::sqrt(2.0);
    return v;
}

Matrix four_qubit_pauli(int q, Axis a) { return embed(pauli(a), 4, q); }

} // namespace

TEST(Code422, CodewordsAreTheStatedStates) {
    EXPECT_LT((Code422::codeword(0, 0) - explicit_codeword("0000", "1111")).norm(), 1e-15);
    EXPECT_LT((Code422::codeword(0, 1) - explicit_codeword("0011", "1100")).norm(), 1e-15);
    EXPECT_LT((Code422::codeword(1, 0) - explicit_codeword("0101", "1010")).norm(), 1e-15);
    EXPECT_LT((Code422::codeword(1, 1) - explicit_codeword("0110", "1001")).norm(), 1e-15);
}

TEST(Code422, CodewordsAreStabilized) {
    for (int k = 0; k < 4; ++k) {
        const Vector c = Code422::codeword(k >> 1, k & 1);
        EXPECT_LT((Code422::gx() * c - c).norm(), 1e-12);
        EXPECT_LT((Code422::gz() * c - c).norm(), 1e-12);
    }
}

TEST(Code422, EverySingleQubitPauliFlipsAGenerator) {
    const Matrix gx = Code422::gx(), gz = Code422::gz();
    for (int q = 1; q <= 4; ++q)
        for (Axis a : {Axis::x, Axis::y, Axis::z}) {
            const Matrix p = four_qubit_pauli(q, a);
            const bool anti_x = (gx * p + p * gx).norm() < 1e-12;
            const bool anti_z = (gz * p + p * gz).norm() < 1e-12;
            EXPECT_TRUE(anti_x || anti_z) << q << axis_name(a);
        }
}

TEST(Code422, TwoQubitZActsWithinTheCode) {
    const Matrix zz = four_qubit_pauli(1, Axis::z) * four_qubit_pauli(2, Axis::z);
    Matrix proj = Matrix::Zero(16, 16);
    for (int k = 0; k < 4; ++k) {
        const Vector c = Code422::codeword(k >> 1, k & 1);
        proj += c * c.adjoint();
    }
    for (int k = 0; k < 4; ++k) {
        const Vector v = zz * Code422::codeword(k >> 1, k & 1);
        EXPECT_LT((proj * v - v).norm(), 1e-12);
    }
}

TEST(Circuits, EncodingUsesFourExchangesFiveCnotsAndOneHadamard) {
    int swaps = 0, cnots = 0, hs = 0;
    for (const auto& l : encode_circuit().layers)
        for (const auto& g : l) {
            swaps += g.kind == GateKind::swap;
            cnots += g.kind == GateKind::cnot;
            hs += g.kind == GateKind::h;
        }
    EXPECT_EQ(swaps, 4);
    EXPECT_EQ(cnots, 5);
    EXPECT_EQ(hs, 1);
}

TEST(Circuits, EncodingMapsInputsToCodewords) {
    for (int k = 0; k < 4; ++k) {
        Vector in = Vector::Zero(32);
        in((k >> 1 ? qubit_mask(5, 2) : 0) | (k & 1 ? qubit_mask(5, 3) : 0)) = 1.0;
        apply_ideal(in, 5, encode_circuit());
        const Vector want = embed_code_state(Code422::codeword(k >> 1, k & 1));
        EXPECT_LT((in - want).norm(), 1e-12) << k;
    }
}

TEST(Circuits, EncodingFollowedByItsReverseIsIdentity) {
    const Circuit enc = encode_circuit(), dec = reversed(enc);
    for (int idx = 0; idx < 32; ++idx) {
        Vector v = Vector::Zero(32);
        v(idx) = 1.0;
        apply_ideal(v, 5, enc);
        apply_ideal(v, 5, dec);
        EXPECT_NEAR(std::abs(v(idx)), 1.0, 1e-10);
    }
}

TEST(Circuits, SyndromeCyclePreservesCodeStates) {
    const auto s = measurement_circuits();
    const Vector c = embed_code_state(Code422::encode({cplx(0.5), cplx(0, 0.5), cplx(-0.5), cplx(0.5)}));
    Vector v = c;
    apply_ideal(v, chain_qubits, s.gz);
    Vector probe = v;
    EXPECT_NEAR(project_ancilla(probe, chain_qubits, 2), 1.0, 1e-12);
    apply_ideal(v, chain_qubits, s.gx);
    EXPECT_NEAR(std::abs(c.dot(v)), 1.0, 1e-12);
}

TEST(Circuits, SyndromeDetectsSingleQubitErrors) {
    const auto s = measurement_circuits();
    for (int k = 0; k < 4; ++k)
        for (Axis a : {Axis::x, Axis::z}) {
            Vector v = embed_code_state(Code422::codeword(1, 0));
            Matrix y = v;
            detail::apply_single_qubit(y, chain_qubits, data_site[k], pauli(a));
            v = y.col(0);
            apply_ideal(v, chain_qubits, s.gz);
            Vector gz = v;
            const double pz = a == Axis::x ? 0.0 : 1.0;  // X errors flip G_z
            if (pz == 0.0) EXPECT_THROW(project_ancilla(gz, chain_qubits, 2), DegenerateProjection);
            else EXPECT_NEAR(project_ancilla(gz, chain_qubits, 2), 1.0, 1e-12);
            if (a == Axis::z) {
                apply_ideal(v, chain_qubits, s.gx);
                EXPECT_THROW(project_ancilla(v, chain_qubits, ancilla_site), DegenerateProjection);
            }
        }
}

TEST(Circuits, SyndromeCycleUsesTwelveCnotsAndTwoHadamards) {
    int cnots = 0, hs = 0;
    for (const auto& l : measurement_circuit().layers)
        for (const auto& g : l) {
            cnots += g.kind == GateKind::cnot;
            hs += g.kind == GateKind::h;
        }
    EXPECT_EQ(cnots, 12);
    EXPECT_EQ(hs, 2);
}

TEST(Projection, HalfWeightAncilla) {
    Vector v = Vector::Zero(4);
    v(0) = v(1) = 1 / std::sqrt(2.0);  // qubit 2 in |+>
    EXPECT_NEAR(project_ancilla(v, 2, 2), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(v(0)), 1.0, 1e-15);
    EXPECT_EQ(v(1), cplx(0.0));
}

TEST(Projection, AncillaInOneIsDegenerate) {
    Vector v = Vector::Zero(4);
    v(1) = 1.0;
    EXPECT_THROW(project_ancilla(v, 2, 2), DegenerateProjection);
}

TEST(Zeno, NoiselessHardPulsesKeepPerfectFidelity) {
    ZenoConfig cfg;
    cfg.pulses = PulseSet(PulseKind::hard);
    cfg.noise.sigma = 0.0;
    cfg.realizations = 2;
    cfg.cycles = 2;
    for (ZenoMode m : {ZenoMode::WM, ZenoMode::NM, ZenoMode::NP}) {
        cfg.mode = m;
        const ZenoRecord r = run_zeno(cfg);
        ASSERT_EQ(r.checkpoints.size(), 5u);
        for (std::size_t c = 0; c < r.checkpoints.size(); ++c) {
            EXPECT_NEAR(r.mean_infidelity[c], 0.0, 1e-8);
            EXPECT_NEAR(r.mean_sp[c], 1.0, 1e-8);
        }
    }
}

TEST(Zeno, CheckpointsFollowTheMeasurements) {
    ZenoConfig cfg;
    cfg.pulses = PulseSet(PulseKind::hard);
    cfg.cycles = 2;
    const ZenoExperiment ex(cfg);
    EXPECT_DOUBLE_EQ(ex.cycle_duration(), 1792.0);
    const auto cp = ex.checkpoints();
    EXPECT_EQ(cp.front().label, "Gz");
    EXPECT_EQ(cp.back().label, "decode");
    EXPECT_DOUBLE_EQ(cp[3].time, 3584.0);
    ASSERT_EQ(ex.gz_schedule().measurements.size(), 1u);
    EXPECT_EQ(ex.gz_schedule().measurements[0].qubit, 2);
}

TEST(Zeno, SuccessProbabilityNeverIncreasesAndRunsAreReproducible) {
    ZenoConfig cfg;
    cfg.pulses = PulseSet(PulseKind::hard);
    cfg.noise = NoiseParams{3e-3, 64.0, 0.0, 5};
    cfg.realizations = 4;
    cfg.cycles = 3;
    const ZenoRecord a = run_zeno(cfg);
    cfg.workers = 3;
    const ZenoRecord b = run_zeno(cfg);
    EXPECT_EQ(a.fidelity, b.fidelity);
    for (const auto& sp : a.sp)
        for (std::size_t c = 1; c < sp.size(); ++c) EXPECT_LE(sp[c], sp[c - 1] + 1e-15);
    EXPECT_LT(a.mean_sp.back(), 1.0);
    std::ostringstream rows, sum;
    write_zeno_rows(rows, a, true);
    write_zeno_summary(sum, a, true);
    EXPECT_EQ(rows.str().rfind("mode,tau_c,sigma,realization,time,checkpoint,fidelity,sp\n", 0), 0u);
    EXPECT_EQ(sum.str().rfind("mode,tau_c,sigma,time,checkpoint,mean_infidelity,stderr,sp\n", 0), 0u);
}

TEST(Zeno, PulseLevelEncodingReproducesTheCode) {
    ZenoConfig cfg;
    cfg.pulses = PulseSet(PulseKind::hard);
    cfg.noise.sigma = 0.0;
    cfg.pulse_encoding = true;
    cfg.realizations = 1;
    cfg.cycles = 1;
    const ZenoRecord r = run_zeno(cfg);
    for (double v : r.mean_infidelity) EXPECT_NEAR(v, 0.0, 1e-8);
}

TEST(Zeno, UnknownModeIsRejected) {
    EXPECT_THROW(parse_mode("XX"), std::invalid_argument);
    EXPECT_EQ(parse_mode("NM"), ZenoMode::NM);
}
