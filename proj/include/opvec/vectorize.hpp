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

#ifndef OPVEC_VECTORIZE_HPP
#define OPVEC_VECTORIZE_HPP

#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <vector>

#include "opvec/common.hpp"
#include "opvec/kernels.hpp"
#include "opvec/pauli.hpp"

namespace opvec {

enum class BasisKind : uint32_t {
    Computational = 0,
    Pauli = 1,
    /// Produced by local_basis_change; not convertible by the Bell transforms.
    Custom = 2,
};

/// Operator basis used for vectorization. Pauli with d > 2 is the qudit
/// generalized Pauli basis Z^a X^b.
struct BasisTag {
    BasisKind kind = BasisKind::Computational;
    int d = 2;

    static BasisTag computational(int d = 2) {
        return {BasisKind::Computational, d};
    }
    static BasisTag pauli(int d = 2) {
        return {BasisKind::Pauli, d};
    }

    bool operator==(const BasisTag &other) const = default;

    std::string name() const {
        std::string s = kind == BasisKind::Computational ? "C" : kind == BasisKind::Pauli ? "P" : "custom";
        if (d != 2) {
            s += std::to_string(d);
        }
        return s;
    }
};

inline bool is_prime(int d) {
    if (d < 2) {
        return false;
    }
    for (int f = 2; f * f <= d; f++) {
        if (d % f == 0) {
            return false;
        }
    }
    return true;
}

inline uint64_t ipow(uint64_t base, std::size_t e) {
    uint64_t r = 1;
    for (std::size_t i = 0; i < e; i++) {
        r *= base;
    }
    return r;
}

/// Amplitudes of ||O>> over n sites. The 2n local factors are interleaved as
/// (L_0, R_0, L_1, R_1, ...) with L_0 the most significant digit.
struct VectorizedState {
    std::size_t n = 0;
    BasisTag basis;
    std::vector<cplx> amps;

    int d() const {
        return basis.d;
    }
    std::size_t num_qubits() const {
        return 2 * n;
    }
    double norm() const {
        return std::sqrt(kernels::norm2(amps));
    }
    void normalize() {
        double nn = norm();
        if (nn == 0) {
            throw ZeroOperator("cannot normalize a zero vector");
        }
        for (auto &a : amps) {
            a /= nn;
        }
    }
};

struct PauliIndex {
    uint64_t index = 0;
    /// ||P>>_P = phase |index>.
    Phase phase;
};

/// Maps a qubit Pauli string to its Pauli-basis index: site i contributes bits
/// (a_z, a_x) at qubits (2i, 2i + 1). The phase is the product of (-i)^{a_z a_x}.
inline PauliIndex pauli_index_codec(const PauliString &p) {
    const std::size_t n = p.n();
    if (2 * n > 63) {
        throw CapExceeded("pauli index needs more than 63 bits");
    }
    PauliIndex r;
    for (std::size_t i = 0; i < n; i++) {
        if (p.z(i)) {
            r.index |= uint64_t{1} << (2 * n - 1 - 2 * i);
        }
        if (p.x(i)) {
            r.index |= uint64_t{1} << (2 * n - 2 - 2 * i);
        }
    }
    r.phase = Phase(-static_cast<int>(p.num_y()));
    return r;
}

/// Inverse of pauli_index_codec.
inline std::pair<PauliString, Phase> pauli_from_index(uint64_t index, std::size_t n) {
    PauliString p(n);
    for (std::size_t i = 0; i < n; i++) {
        p.set_z(i, (index >> (2 * n - 1 - 2 * i)) & 1);
        p.set_x(i, (index >> (2 * n - 2 - 2 * i)) & 1);
    }
    return {p, Phase(-static_cast<int>(p.num_y()))};
}

namespace detail {

inline void check_basis(const BasisTag &b) {
    if (b.kind == BasisKind::Custom) {
        throw BasisMismatch("custom bases cannot be used for vectorization");
    }
    if (!is_prime(b.d)) {
        throw InvalidArgument("local dimension " + std::to_string(b.d) + " is not prime");
    }
}

/// Digits of x in base d, most significant first, `len` digits.
inline void to_digits(uint64_t x, int d, std::size_t len, std::vector<int> &out) {
    out.assign(len, 0);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = static_cast<int>(x % static_cast<uint64_t>(d));
        x /= static_cast<uint64_t>(d);
    }
}

inline uint64_t from_digits(const std::vector<int> &digits, int d) {
    uint64_t x = 0;
    for (int v : digits) {
        x = x * static_cast<uint64_t>(d) + static_cast<uint64_t>(v);
    }
    return x;
}

inline std::size_t infer_sites(long dim, int d) {
    std::size_t n = 0;
    long v = 1;
    while (v < dim) {
        v *= d;
        n++;
    }
    if (v != dim) {
        throw SizeMismatch("operator dimension " + std::to_string(dim) + " is not a power of " + std::to_string(d));
    }
    return n;
}

inline cplx omega_pow(int d, long e) {
    long r = ((e % d) + d) % d;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace detail

inline VectorizedState bell_transform(const VectorizedState &s, bool to_pauli);

/// ||O>> for a qubit Pauli sum, in the Pauli or computational basis.
inline VectorizedState vectorize(const PauliSum &o, const BasisTag &basis) {
    detail::check_basis(basis);
    if (basis.d != 2) {
        throw InvalidArgument("Pauli sums are qubit operators; use a DenseOperator for qudits");
    }
    if (o.norm2() == 0) {
        throw ZeroOperator("vectorize: zero operator");
    }
    if (2 * o.n() > 40) {
        throw CapExceeded("vectorize: doubled space too large");
    }
    VectorizedState s;
    s.n = o.n();
    s.basis = BasisTag::pauli();
    s.amps.assign(std::size_t{1} << (2 * o.n()), cplx(0));
    for (const auto &t : o.terms()) {
        PauliIndex pi = pauli_index_codec(t.str);
        s.amps[pi.index] += t.coef * pi.phase.value();
    }
    s.normalize();
    if (basis.kind == BasisKind::Computational) {
        return bell_transform(s, false);
    }
    return s;
}

/// ||O>> for a dense operator on n sites of dimension basis.d.
inline VectorizedState vectorize(const DenseOperator &o, const BasisTag &basis) {
    detail::check_basis(basis);
    if (o.rows() != o.cols()) {
        throw SizeMismatch("vectorize: operator is not square");
    }
    const int d = basis.d;
    const std::size_t n = detail::infer_sites(o.rows(), d);
    const uint64_t dn = ipow(d, n);
    VectorizedState s;
    s.n = n;
    s.basis = basis;
    s.amps.assign(dn * dn, cplx(0));
    std::vector<int> digits(2 * n);
    if (basis.kind == BasisKind::Computational) {
        std::vector<int> ri, ci;
        for (uint64_t r = 0; r < dn; r++) {
            detail::to_digits(r, d, n, ri);
            for (uint64_t c = 0; c < dn; c++) {
                detail::to_digits(c, d, n, ci);
                for (std::size_t i = 0; i < n; i++) {
                    digits[2 * i] = ri[i];
                    digits[2 * i + 1] = ci[i];
                }
                s.amps[detail::from_digits(digits, d)] = o(static_cast<long>(r), static_cast<long>(c));
            }
        }
    } else {
        // Coefficient of Z^a X^b is tr((Z^a X^b)^dag O)/d^n = sum_j w^{-a.(j+b)} O[j+b, j] / d^n,
        // stored at digits (a, -b).
        std::vector<int> av, bv, jv, mv(n);
        for (uint64_t a = 0; a < dn; a++) {
            detail::to_digits(a, d, n, av);
            for (uint64_t b = 0; b < dn; b++) {
                detail::to_digits(b, d, n, bv);
                cplx acc = 0;
                for (uint64_t j = 0; j < dn; j++) {
                    detail::to_digits(j, d, n, jv);
                    long dot = 0;
                    for (std::size_t i = 0; i < n; i++) {
                        mv[i] = (jv[i] + bv[i]) % d;
                        dot += static_cast<long>(av[i]) * mv[i];
                    }
                    acc += detail::omega_pow(d, -dot) *
                           o(static_cast<long>(detail::from_digits(mv, d)), static_cast<long>(j));
                }
                for (std::size_t i = 0; i < n; i++) {
                    digits[2 * i] = av[i];
                    digits[2 * i + 1] = (d - bv[i]) % d;
                }
                s.amps[detail::from_digits(digits, d)] = acc / static_cast<double>(dn);
            }
        }
    }
    s.normalize();
    return s;
}

/// Unit HS-norm operator (tr(O^dag O) = 1) whose basis coefficients are the amplitudes.
inline DenseOperator devectorize(const VectorizedState &s) {
    detail::check_basis(s.basis);
    require_cap(s.n, "devectorize");
    const int d = s.d();
    const std::size_t n = s.n;
    const uint64_t dn = ipow(d, n);
    if (s.amps.size() != dn * dn) {
        throw SizeMismatch("devectorize: amplitude count does not match n and d");
    }
    DenseOperator o = DenseOperator::Zero(static_cast<long>(dn), static_cast<long>(dn));
    std::vector<int> digits(2 * n), ri, ci;
    if (s.basis.kind == BasisKind::Computational) {
        for (uint64_t r = 0; r < dn; r++) {
            detail::to_digits(r, d, n, ri);
            for (uint64_t c = 0; c < dn; c++) {
                detail::to_digits(c, d, n, ci);
                for (std::size_t i = 0; i < n; i++) {
                    digits[2 * i] = ri[i];
                    digits[2 * i + 1] = ci[i];
                }
                o(static_cast<long>(r), static_cast<long>(c)) = s.amps[detail::from_digits(digits, d)];
            }
        }
        return o;
    }
    // O[m, j] = sum_a amp(a, -(m - j)) w^{a.m} / sqrt(d^n).
    const double scale = 1.0 / std::sqrt(static_cast<double>(dn));
    std::vector<int> av;
    for (uint64_t m = 0; m < dn; m++) {
        detail::to_digits(m, d, n, ri);
        for (uint64_t j = 0; j < dn; j++) {
            detail::to_digits(j, d, n, ci);
            cplx acc = 0;
            for (uint64_t a = 0; a < dn; a++) {
                detail::to_digits(a, d, n, av);
                long dot = 0;
                for (std::size_t i = 0; i < n; i++) {
                    digits[2 * i] = av[i];
                    digits[2 * i + 1] = ((ci[i] - ri[i]) % d + d) % d;
                    dot += static_cast<long>(av[i]) * ri[i];
                }
                cplx amp = s.amps[detail::from_digits(digits, d)];
                if (amp != cplx(0)) {
                    acc += amp * detail::omega_pow(d, dot);
                }
            }
            o(static_cast<long>(m), static_cast<long>(j)) = acc * scale;
        }
    }
    return o;
}

/// <<O1|O2>>, the Euclidean inner product of the amplitude vectors.
inline cplx hs_inner(const VectorizedState &a, const VectorizedState &b) {
    if (a.n != b.n || !(a.basis == b.basis)) {
        throw BasisMismatch("hs_inner: states differ in n or basis (" + a.basis.name() + " vs " + b.basis.name() +
                            ")");
    }
    return kernels::inner(a.amps, b.amps);
}

namespace detail {

inline const std::array<cplx, 4> &hadamard() {
    static const double r = 1.0 / std::sqrt(2.0);
    static const std::array<cplx, 4> h = {r, r, r, -r};
    return h;
}

inline const std::array<cplx, 16> &cnot() {
    static const std::array<cplx, 16> m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    return m;
}

}  // namespace detail

/// Bell transform between the Pauli and computational operator bases.
/// C to P applies CNOT(L -> R) then H(L) on every site; P to C is the inverse.
inline VectorizedState bell_transform(const VectorizedState &s, bool to_pauli) {
    if (s.d() != 2) {
        throw InvalidArgument("bell_transform is for qubits; use qudit_bell_transform");
    }
    const BasisKind src = to_pauli ? BasisKind::Computational : BasisKind::Pauli;
    if (s.basis.kind != src) {
        throw BasisMismatch("bell_transform: state is in basis " + s.basis.name() + ", expected " +
                            BasisTag{src, 2}.name());
    }
    VectorizedState r = s;
    const std::size_t k = 2 * s.n;
    for (std::size_t i = 0; i < s.n; i++) {
        if (to_pauli) {
            kernels::apply_2q(r.amps, k, 2 * i, 2 * i + 1, detail::cnot());
            kernels::apply_1q(r.amps, k, 2 * i, detail::hadamard());
        } else {
            kernels::apply_1q(r.amps, k, 2 * i, detail::hadamard());
            kernels::apply_2q(r.amps, k, 2 * i, 2 * i + 1, detail::cnot());
        }
    }
    r.basis.kind = to_pauli ? BasisKind::Pauli : BasisKind::Computational;
    return r;
}

enum class BellDirection { CtoP, PtoC };

inline VectorizedState bell_transform(const VectorizedState &s, BellDirection dir) {
    return bell_transform(s, dir == BellDirection::CtoP);
}

/// Qudit Bell transform. P to C applies H_d on L then SUM (L -> R) on each site;
/// C to P applies the inverse. For d = 2 this is bell_transform.
inline VectorizedState qudit_bell_transform(const VectorizedState &s, BellDirection dir) {
    const int d = s.d();
    if (!is_prime(d)) {
        throw InvalidArgument("qudit_bell_transform: d=" + std::to_string(d) + " is not prime");
    }
    const bool to_pauli = dir == BellDirection::CtoP;
    const BasisKind src = to_pauli ? BasisKind::Computational : BasisKind::Pauli;
    if (s.basis.kind != src) {
        throw BasisMismatch("qudit_bell_transform: wrong source basis " + s.basis.name());
    }
    const std::size_t len = 2 * s.n;
    const uint64_t total = s.amps.size();
    if (total != ipow(d, len)) {
        throw SizeMismatch("qudit_bell_transform: amplitude count does not match n and d");
    }
    const double rd = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<cplx> cur = s.amps, next(total);
    std::vector<int> dig;
    for (std::size_t i = 0; i < s.n; i++) {
        const uint64_t stride_l = ipow(d, len - 1 - 2 * i);
        auto apply_sum = [&](int sgn) {
            for (uint64_t x = 0; x < total; x++) {
                detail::to_digits(x, d, len, dig);
                dig[2 * i + 1] = ((dig[2 * i + 1] + sgn * dig[2 * i]) % d + d) % d;
                next[detail::from_digits(dig, d)] = cur[x];
            }
            std::swap(cur, next);
        };
        auto apply_h = [&](int sgn) {
            for (uint64_t x = 0; x < total; x++) {
                detail::to_digits(x, d, len, dig);
                const int m = dig[2 * i];
                const uint64_t base = x - static_cast<uint64_t>(m) * stride_l;
                cplx acc = 0;
                for (int c = 0; c < d; c++) {
                    acc += detail::omega_pow(d, static_cast<long>(sgn) * m * c) * cur[base + c * stride_l];
                }
                next[x] = acc * rd;
            }
            std::swap(cur, next);
        };
        if (to_pauli) {
            apply_sum(-1);
            apply_h(-1);
        } else {
            apply_h(+1);
            apply_sum(+1);
        }
    }
    VectorizedState r = s;
    r.amps = std::move(cur);
    r.basis.kind = to_pauli ? BasisKind::Pauli : BasisKind::Computational;
    return r;
}

/// A user-supplied unitary acting on a block of local factors (qubits of the
/// doubled register).
struct LocalBlock {
    std::vector<std::size_t> qubits;
    DenseOperator unitary;
};

/// Applies per-partition unitaries to a qubit state, producing a state in a
/// custom k-producible basis.
inline VectorizedState local_basis_change(const VectorizedState &s, const std::vector<LocalBlock> &blocks) {
    if (s.d() != 2) {
        throw InvalidArgument("local_basis_change supports qubits only");
    }
    VectorizedState r = s;
    std::vector<bool> used(2 * s.n, false);
    for (const auto &b : blocks) {
        for (auto q : b.qubits) {
            if (q >= used.size() || used[q]) {
                throw InvalidArgument("local_basis_change: blocks must be disjoint and in range");
            }
            used[q] = true;
        }
        const long dim = b.unitary.rows();
        if ((DenseOperator(b.unitary.adjoint() * b.unitary) - DenseOperator::Identity(dim, dim)).norm() > 1e-10) {
            throw NotUnitary("local_basis_change: block is not unitary");
        }
        kernels::apply_dense(r.amps, 2 * s.n, b.qubits, b.unitary);
    }
    r.basis.kind = BasisKind::Custom;
    return r;
}

/// Binary snapshot: uint32 n, uint32 d, uint32 basis kind, then little-endian
/// float32 (re, im) pairs.
inline void write_state(std::ostream &out, const VectorizedState &s) {
    auto put32 = [&](uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
        out.write(reinterpret_cast<const char *>(b), 4);
    };
    put32(static_cast<uint32_t>(s.n));
    put32(static_cast<uint32_t>(s.d()));
    put32(static_cast<uint32_t>(s.basis.kind));
    for (const auto &a : s.amps) {
        for (float f : {static_cast<float>(a.real()), static_cast<float>(a.imag())}) {
            uint32_t bits;
            std::memcpy(&bits, &f, 4);
            put32(bits);
        }
    }
}

inline VectorizedState read_state(std::istream &in) {
    auto get32 = [&]() {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char *>(b), 4)) {
            throw ParseError("state snapshot truncated");
        }
        return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    };
    VectorizedState s;
    s.n = get32();
    s.basis.d = static_cast<int>(get32());
    uint32_t kind = get32();
    if (kind > 2 || s.basis.d < 2 || s.n > 20) {
        throw ParseError("state snapshot header is invalid");
    }
    s.basis.kind = static_cast<BasisKind>(kind);
    const uint64_t count = ipow(s.basis.d, 2 * s.n);
    s.amps.resize(count);
    for (uint64_t i = 0; i < count; i++) {
        float re, im;
        uint32_t a = get32(), b = get32();
        std::memcpy(&re, &a, 4);
        std::memcpy(&im, &b, 4);
        s.amps[i] = cplx(re, im);
    }
    return s;
}

}  // namespace opvec

#endif
