// Copyright 2026 The opvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "opvec/oracle.hpp"
#include "opvec/simulator.hpp"
#include "opvec/vectorize.hpp"

namespace opvec {
namespace {

const cplx kI(0, 1);
const double kR = 1.0 / std::sqrt(2.0);

void expect_amps(const VectorizedState &s, const std::vector<cplx> &want, double tol = 1e-15) {
    ASSERT_EQ(s.amps.size(), want.size());
    for (std::size_t i = 0; i < want.size(); i++) {
        EXPECT_NEAR(std::abs(s.amps[i] - want[i]), 0, tol) << "index " << i;
    }
}

PauliSum random_operator(std::size_t n, RngStream &rng) {
    PauliSum o(n);
    for (uint64_t idx = 0; idx < (uint64_t{1} << (2 * n)); idx++) {
        o.add(cplx(rng.uniform() - 0.5, rng.uniform() - 0.5), pauli_from_index(idx, n).first);
    }
    return o;
}

TEST(Vectorize, SingleQubitPauliBasisImages) {
    auto p = BasisTag::pauli();
    expect_amps(vectorize(PauliSum::from_string("I"), p), {1, 0, 0, 0});
    expect_amps(vectorize(PauliSum::from_string("X"), p), {0, 1, 0, 0});
    expect_amps(vectorize(PauliSum::from_string("Z"), p), {0, 0, 1, 0});
    expect_amps(vectorize(PauliSum::from_string("Y"), p), {0, 0, 0, -kI});
}

TEST(Vectorize, SingleQubitComputationalBasisImages) {
    auto c = BasisTag::computational();
    expect_amps(vectorize(PauliSum::from_string("I"), c), {kR, 0, 0, kR});
    expect_amps(vectorize(PauliSum::from_string("X"), c), {0, kR, kR, 0});
    expect_amps(vectorize(PauliSum::from_string("Z"), c), {kR, 0, 0, -kR});
    expect_amps(vectorize(PauliSum::from_string("Y"), c), {0, -kI * kR, kI * kR, 0});
}

TEST(Vectorize, DenseAndPauliSumPathsAgree) {
    RngStream rng(21);
    for (std::size_t n = 1; n <= 3; n++) {
        PauliSum o = random_operator(n, rng);
        for (auto b : {BasisTag::pauli(), BasisTag::computational()}) {
            VectorizedState a = vectorize(o, b);
            VectorizedState d = vectorize(to_dense(o), b);
            expect_amps(a, d.amps, 1e-12);
        }
    }
}

TEST(Vectorize, RoundTripRandomOperators) {
    RngStream rng(22);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t n = 1 + rng.below(3);
        DenseOperator o = to_dense(random_operator(n, rng));
        o /= std::sqrt((o.adjoint() * o).trace().real());
        for (auto b : {BasisTag::pauli(), BasisTag::computational()}) {
            DenseOperator back = devectorize(vectorize(o, b));
            EXPECT_LT((back - o).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Vectorize, IsometryOfHilbertSchmidtInner) {
    RngStream rng(23);
    for (int trial = 0; trial < 20; trial++) {
        DenseOperator a = to_dense(random_operator(2, rng)), b = to_dense(random_operator(2, rng));
        cplx want = (a.adjoint() * b).trace() /
                    std::sqrt((a.adjoint() * a).trace().real() * (b.adjoint() * b).trace().real());
        for (auto basis : {BasisTag::pauli(), BasisTag::computational()}) {
            EXPECT_NEAR(std::abs(hs_inner(vectorize(a, basis), vectorize(b, basis)) - want), 0, 1e-12);
        }
    }
}

TEST(Vectorize, BellTransformSwitchesBases) {
    RngStream rng(24);
    for (std::size_t n = 1; n <= 3; n++) {
        PauliSum o = random_operator(n, rng);
        VectorizedState c = vectorize(o, BasisTag::computational());
        VectorizedState p = vectorize(o, BasisTag::pauli());
        expect_amps(bell_transform(c, BellDirection::CtoP), p.amps, 1e-12);
        expect_amps(bell_transform(p, BellDirection::PtoC), c.amps, 1e-12);
        EXPECT_THROW(bell_transform(p, BellDirection::CtoP), BasisMismatch);
    }
}

TEST(Vectorize, RicochetIdentity) {
    RngStream rng(25);
    const std::size_t n = 2;
    DenseOperator o = to_dense(random_operator(n, rng));
    Circuit a = Circuit::parse("h 0\ncx 0 1\nrz 1 0.3\n", n);
    Circuit b = Circuit::parse("ry 0 0.7\ncz 0 1\nt 1\n", n);
    Circuit both = Circuit::parallel(a.remapped(2 * n, side_qubits(n, false)), b.remapped(2 * n, side_qubits(n, true)));
    QState s = QState::from_vectorized(vectorize(o, BasisTag::computational()));
    apply_circuit_inplace(s, both);
    DenseOperator ua = oracle::circuit_unitary(a), ub = oracle::circuit_unitary(b);
    DenseOperator want = ua * o * ub.transpose();
    VectorizedState w = vectorize(want, BasisTag::computational());
    expect_amps(s.to_vectorized(n, BasisTag::computational()), w.amps, 1e-12);
}

TEST(Vectorize, PauliIndexCodecRoundTrip) {
    for (std::size_t n = 1; n <= 3; n++) {
        for (uint64_t idx = 0; idx < (uint64_t{1} << (2 * n)); idx++) {
            auto [p, phase] = pauli_from_index(idx, n);
            PauliIndex pi = pauli_index_codec(p);
            EXPECT_EQ(pi.index, idx);
            EXPECT_EQ(pi.phase.k, phase.k);
            EXPECT_EQ(phase.k, (4 - p.num_y() % 4) % 4);
        }
    }
}

TEST(Vectorize, ZeroOperatorRejected) {
    EXPECT_THROW(vectorize(PauliSum(2), BasisTag::pauli()), ZeroOperator);
}

TEST(Vectorize, StateSnapshotRoundTrip) {
    RngStream rng(26);
    VectorizedState s = vectorize(random_operator(2, rng), BasisTag::pauli());
    std::stringstream buf;
    write_state(buf, s);
    EXPECT_EQ(buf.str().size(), 12 + 8 * s.amps.size());
    VectorizedState back = read_state(buf);
    EXPECT_EQ(back.n, s.n);
    EXPECT_EQ(back.basis, s.basis);
    expect_amps(back, s.amps, 1e-6);
}

TEST(Vectorize, QuditRoundTrip) {
    RngStream rng(27);
    DenseOperator o(3, 3);
    for (long r = 0; r < 3; r++) {
        for (long c = 0; c < 3; c++) {
            o(r, c) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
        }
    }
    o /= std::sqrt((o.adjoint() * o).trace().real());
    for (auto b : {BasisTag::pauli(3), BasisTag::computational(3)}) {
        EXPECT_LT((devectorize(vectorize(o, b)) - o).cwiseAbs().maxCoeff(), 1e-12);
    }
    VectorizedState c = vectorize(o, BasisTag::computational(3));
    VectorizedState p = vectorize(o, BasisTag::pauli(3));
    expect_amps(qudit_bell_transform(c, BellDirection::CtoP), p.amps, 1e-12);
}

}  // namespace
}  // namespace opvec
