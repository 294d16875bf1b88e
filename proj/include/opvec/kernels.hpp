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

#ifndef OPVEC_KERNELS_HPP
#define OPVEC_KERNELS_HPP

#include <array>
#include <bit>
#include <cmath>
#include <vector>

#include "opvec/common.hpp"
#include "opvec/pauli.hpp"

/// Statevector kernels. Qubit q of a k-qubit register is index bit (k - 1 - q),
/// so qubit 0 is the most significant.
namespace opvec::kernels {

using Amps = std::vector<cplx>;

inline uint64_t qubit_bit(std::size_t k, std::size_t q) {
    return uint64_t{1} << (k - 1 - q);
}

inline void check_qubit(std::size_t k, std::size_t q) {
    if (q >= k) {
        throw InvalidArgument("qubit " + std::to_string(q) + " out of range for " + std::to_string(k) + " qubits");
    }
}

/// m is row-major 2x2.
inline void apply_1q(Amps &a, std::size_t k, std::size_t q, const std::array<cplx, 4> &m) {
    check_qubit(k, q);
    const uint64_t bit = qubit_bit(k, q);
    const uint64_t dim = uint64_t{1} << k;
    for (uint64_t b = 0; b < dim; b++) {
        if (b & bit) {
            continue;
        }
        cplx a0 = a[b], a1 = a[b | bit];
        a[b] = m[0] * a0 + m[1] * a1;
        a[b | bit] = m[2] * a0 + m[3] * a1;
    }
}

/// m is row-major 4x4 over |b_q0 b_q1>, q0 being the high bit.
inline void apply_2q(Amps &a, std::size_t k, std::size_t q0, std::size_t q1, const std::array<cplx, 16> &m) {
    check_qubit(k, q0);
    check_qubit(k, q1);
    if (q0 == q1) {
        throw InvalidArgument("two-qubit gate on a repeated qubit");
    }
    const uint64_t b0 = qubit_bit(k, q0), b1 = qubit_bit(k, q1);
    const uint64_t dim = uint64_t{1} << k;
    for (uint64_t b = 0; b < dim; b++) {
        if (b & (b0 | b1)) {
            continue;
        }
        const uint64_t idx[4] = {b, b | b1, b | b0, b | b0 | b1};
        cplx in[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
        for (int r = 0; r < 4; r++) {
            a[idx[r]] = m[r * 4 + 0] * in[0] + m[r * 4 + 1] * in[1] + m[r * 4 + 2] * in[2] + m[r * 4 + 3] * in[3];
        }
    }
}

/// Dense 2^m x 2^m matrix on the listed targets; targets[0] is the high bit.
inline void apply_dense(Amps &a, std::size_t k, const std::vector<std::size_t> &targets, const DenseOperator &m) {
    const std::size_t mt = targets.size();
    const uint64_t sub = uint64_t{1} << mt;
    if (static_cast<uint64_t>(m.rows()) != sub || static_cast<uint64_t>(m.cols()) != sub) {
        throw SizeMismatch("dense gate dimension does not match its target count");
    }
    uint64_t mask = 0;
    std::vector<uint64_t> bits(mt);
    for (std::size_t i = 0; i < mt; i++) {
        check_qubit(k, targets[i]);
        bits[i] = qubit_bit(k, targets[i]);
        if (mask & bits[i]) {
            throw InvalidArgument("dense gate on a repeated qubit");
        }
        mask |= bits[i];
    }
    std::vector<uint64_t> offs(sub);
    for (uint64_t s = 0; s < sub; s++) {
        uint64_t o = 0;
        for (std::size_t i = 0; i < mt; i++) {
            if ((s >> (mt - 1 - i)) & 1) {
                o |= bits[i];
            }
        }
        offs[s] = o;
    }
    const uint64_t dim = uint64_t{1} << k;
    std::vector<cplx> in(sub);
    for (uint64_t b = 0; b < dim; b++) {
        if (b & mask) {
            continue;
        }
        for (uint64_t s = 0; s < sub; s++) {
            in[s] = a[b | offs[s]];
        }
        for (uint64_t r = 0; r < sub; r++) {
            cplx acc = 0;
            for (uint64_t c = 0; c < sub; c++) {
                acc += m(static_cast<long>(r), static_cast<long>(c)) * in[c];
            }
            a[b | offs[r]] = acc;
        }
    }
}

/// A Pauli string laid onto register bits: P|b> = i^ny (-1)^{|z & b|} |b ^ x>.
struct PauliMask {
    uint64_t x = 0;
    uint64_t z = 0;
    std::size_t ny = 0;
    /// Extra global sign (+1 or -1).
    int sign = 1;

    cplx phase(uint64_t b) const {
        cplx base = Phase(static_cast<int>(ny)).value() * static_cast<double>(sign);
        return (std::popcount(z & b) & 1) ? -base : base;
    }
};

/// Lays p onto the given register qubits (site i of p goes to qubits[i]).
inline PauliMask make_mask(std::size_t k, const PauliString &p, const std::vector<std::size_t> &qubits) {
    if (qubits.size() != p.n()) {
        throw SizeMismatch("pauli mask: qubit list length differs from string length");
    }
    PauliMask m;
    for (std::size_t i = 0; i < p.n(); i++) {
        check_qubit(k, qubits[i]);
        uint64_t bit = qubit_bit(k, qubits[i]);
        if (p.x(i)) {
            m.x |= bit;
        }
        if (p.z(i)) {
            m.z |= bit;
        }
    }
    m.ny = p.num_y();
    return m;
}

/// Pauli string acting on qubits 0..n-1 of an n-qubit register.
inline PauliMask make_mask(const PauliString &p) {
    std::vector<std::size_t> qs(p.n());
    for (std::size_t i = 0; i < p.n(); i++) {
        qs[i] = i;
    }
    return make_mask(p.n(), p, qs);
}

/// out += c * P a.
inline void accumulate_pauli(Amps &out, const Amps &a, const PauliMask &p, cplx c) {
    const uint64_t dim = a.size();
    for (uint64_t b = 0; b < dim; b++) {
        out[b ^ p.x] += c * p.phase(b) * a[b];
    }
}

inline void apply_pauli(Amps &a, const PauliMask &p) {
    const uint64_t dim = a.size();
    if (p.x == 0) {
        for (uint64_t b = 0; b < dim; b++) {
            a[b] *= p.phase(b);
        }
        return;
    }
    for (uint64_t b = 0; b < dim; b++) {
        uint64_t c = b ^ p.x;
        if (c < b) {
            continue;
        }
        cplx ab = a[b], ac = a[c];
        a[c] = p.phase(b) * ab;
        a[b] = p.phase(c) * ac;
    }
}

/// exp(i theta P) = cos(theta) + i sin(theta) P, for any support size.
inline void apply_pauli_rotation(Amps &a, const PauliMask &p, double theta) {
    const cplx c = std::cos(theta);
    const cplx is = cplx(0, std::sin(theta));
    const uint64_t dim = a.size();
    if (p.x == 0) {
        for (uint64_t b = 0; b < dim; b++) {
            a[b] *= c + is * p.phase(b);
        }
        return;
    }
    for (uint64_t b = 0; b < dim; b++) {
        uint64_t d = b ^ p.x;
        if (d < b) {
            continue;
        }
        cplx ab = a[b], ad = a[d];
        a[b] = c * ab + is * p.phase(d) * ad;
        a[d] = c * ad + is * p.phase(b) * ab;
    }
}

inline double norm2(const Amps &a) {
    double s = 0;
    for (const auto &v : a) {
        s += std::norm(v);
    }
    return s;
}

inline cplx inner(const Amps &a, const Amps &b) {
    if (a.size() != b.size()) {
        throw SizeMismatch("inner product of registers of different size");
    }
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

}  // namespace opvec::kernels

#endif
