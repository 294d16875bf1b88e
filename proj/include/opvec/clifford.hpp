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

#ifndef OPVEC_CLIFFORD_HPP
#define OPVEC_CLIFFORD_HPP

#include <vector>

#include "opvec/circuit.hpp"
#include "opvec/pauli.hpp"

namespace opvec {

/// A Hermitian Pauli string with a sign.
struct SignedPauli {
    PauliString p;
    bool negative = false;

    int sign() const {
        return negative ? -1 : 1;
    }
    bool operator==(const SignedPauli &other) const = default;
};

/// P_L (x) Q_R* on the interleaved doubled register: site i of P on qubit 2i,
/// site i of Q on qubit 2i + 1. Q* = Qᵀ carries the sign (-1)^{#Y(Q)}.
inline SignedPauli interleave_conj(const PauliString &p, const PauliString &q) {
    check_same_size(p, q);
    SignedPauli r{PauliString(2 * p.n()), q.transpose_sign() < 0};
    for (std::size_t i = 0; i < p.n(); i++) {
        r.p.set_z(2 * i, p.z(i));
        r.p.set_x(2 * i, p.x(i));
        r.p.set_z(2 * i + 1, q.z(i));
        r.p.set_x(2 * i + 1, q.x(i));
    }
    return r;
}

namespace clifford {

inline void h(SignedPauli &s, std::size_t q) {
    bool x = s.p.x(q), z = s.p.z(q);
    s.negative ^= x && z;
    s.p.set_x(q, z);
    s.p.set_z(q, x);
}

inline void s_gate(SignedPauli &s, std::size_t q) {
    bool x = s.p.x(q), z = s.p.z(q);
    s.negative ^= x && z;
    s.p.set_z(q, z ^ x);
}

inline void sdg(SignedPauli &s, std::size_t q) {
    bool x = s.p.x(q), z = s.p.z(q) ^ x;
    s.p.set_z(q, z);
    s.negative ^= x && z;
}

inline void cx(SignedPauli &s, std::size_t c, std::size_t t) {
    bool xc = s.p.x(c), zc = s.p.z(c), xt = s.p.x(t), zt = s.p.z(t);
    s.negative ^= xc && zt && (xt == zc);
    s.p.set_x(t, xt ^ xc);
    s.p.set_z(c, zc ^ zt);
}

inline void cz(SignedPauli &s, std::size_t a, std::size_t b) {
    h(s, b);
    cx(s, a, b);
    h(s, b);
}

/// Replaces s by G s G^dag for a Clifford gate G.
inline void conjugate(SignedPauli &s, const Gate &g) {
    const auto &t = g.targets;
    switch (g.kind) {
        case GateKind::X:
            s.negative ^= s.p.z(t[0]);
            break;
        case GateKind::Y:
            s.negative ^= s.p.z(t[0]) != s.p.x(t[0]);
            break;
        case GateKind::Z:
            s.negative ^= s.p.x(t[0]);
            break;
        case GateKind::H:
            h(s, t[0]);
            break;
        case GateKind::S:
            s_gate(s, t[0]);
            break;
        case GateKind::Sdg:
            sdg(s, t[0]);
            break;
        case GateKind::SX:
            // SX = H S H up to a global phase.
            h(s, t[0]);
            s_gate(s, t[0]);
            h(s, t[0]);
            break;
        case GateKind::SXdg:
            h(s, t[0]);
            sdg(s, t[0]);
            h(s, t[0]);
            break;
        case GateKind::CX:
            cx(s, t[0], t[1]);
            break;
        case GateKind::CY:
            sdg(s, t[1]);
            cx(s, t[0], t[1]);
            s_gate(s, t[1]);
            break;
        case GateKind::CZ:
            cz(s, t[0], t[1]);
            break;
        case GateKind::SWAP: {
            bool x0 = s.p.x(t[0]), z0 = s.p.z(t[0]);
            s.p.set_x(t[0], s.p.x(t[1]));
            s.p.set_z(t[0], s.p.z(t[1]));
            s.p.set_x(t[1], x0);
            s.p.set_z(t[1], z0);
            break;
        }
        default:
            throw InvalidArgument("gate " + g.name() + " is not a supported Clifford gate");
    }
}

inline void conjugate(SignedPauli &s, const Circuit &c) {
    for (const auto &l : c.layers()) {
        for (const auto &g : l) {
            conjugate(s, g);
        }
    }
}

}  // namespace clifford

/// A Clifford circuit C and the Z-type images C P_i C^dag of the input set.
struct Diagonalization {
    Circuit circuit;
    std::vector<SignedPauli> diagonal;
};

/// Maps a mutually commuting set to Z-type strings by symplectic elimination
/// over GF(2). Operators are processed in order; each one that still has X
/// support is reduced to +-Z on its lowest-index X qubit.
inline Diagonalization diagonalize_commuting(const std::vector<SignedPauli> &ops, std::size_t k) {
    for (std::size_t i = 0; i < ops.size(); i++) {
        if (ops[i].p.n() != k) {
            throw SizeMismatch("diagonalize_commuting: operator size differs from register");
        }
        for (std::size_t j = i + 1; j < ops.size(); j++) {
            if (!commutes(ops[i].p, ops[j].p)) {
                throw NotCommuting("operators " + std::to_string(i) + " and " + std::to_string(j) +
                                   " do not commute");
            }
        }
    }
    Diagonalization out{Circuit(k), ops};
    auto &cur = out.diagonal;
    auto emit = [&](const Gate &g) {
        out.circuit.append(g);
        for (auto &s : cur) {
            clifford::conjugate(s, g);
        }
    };
    for (std::size_t r = 0; r < cur.size(); r++) {
        std::size_t pivot = k;
        for (std::size_t q = 0; q < k; q++) {
            if (cur[r].p.x(q)) {
                pivot = q;
                break;
            }
        }
        if (pivot == k) {
            continue;
        }
        for (std::size_t q = pivot + 1; q < k; q++) {
            if (cur[r].p.x(q)) {
                emit(Gate::named(GateKind::CX, {pivot, q}));
            }
        }
        for (std::size_t q = 0; q < k; q++) {
            if (q != pivot && cur[r].p.z(q)) {
                emit(Gate::named(GateKind::CZ, {pivot, q}));
            }
        }
        if (cur[r].p.z(pivot)) {
            emit(Gate::named(GateKind::Sdg, {pivot}));
        }
        emit(Gate::named(GateKind::H, {pivot}));
    }
    return out;
}

}  // namespace opvec

#endif
