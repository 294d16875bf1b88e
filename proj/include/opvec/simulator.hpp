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

#ifndef OPVEC_SIMULATOR_HPP
#define OPVEC_SIMULATOR_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <vector>

#include "opvec/circuit.hpp"
#include "opvec/kernels.hpp"
#include "opvec/pauli.hpp"
#include "opvec/rng.hpp"
#include "opvec/vectorize.hpp"

namespace opvec {

/// Largest register the statevector engine accepts.
constexpr std::size_t kMaxQubits = 24;

class QState {
   public:
    QState() = default;
    explicit QState(std::size_t k) : k_(check_k(k)), amps_(std::size_t{1} << k, cplx(0)) {
        amps_[0] = 1;
    }
    QState(std::size_t k, std::vector<cplx> amps) : k_(check_k(k)), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << k)) {
            throw SizeMismatch("QState: amplitude count is not 2^k");
        }
    }

    static QState basis_state(std::size_t k, uint64_t index) {
        QState s(k);
        s.amps_[0] = 0;
        s.amps_.at(index) = 1;
        return s;
    }

    static QState from_vectorized(const VectorizedState &v) {
        if (v.d() != 2) {
            throw InvalidArgument("QState holds qubit registers only");
        }
        return QState(2 * v.n, v.amps);
    }

    VectorizedState to_vectorized(std::size_t n, const BasisTag &basis) const {
        if (2 * n != k_) {
            throw SizeMismatch("to_vectorized: register is not 2n qubits");
        }
        return VectorizedState{n, basis, amps_};
    }

    std::size_t num_qubits() const {
        return k_;
    }
    const std::vector<cplx> &amps() const {
        return amps_;
    }
    std::vector<cplx> &amps() {
        return amps_;
    }
    double norm() const {
        return std::sqrt(kernels::norm2(amps_));
    }

   private:
    static std::size_t check_k(std::size_t k) {
        if (k > kMaxQubits) {
            throw CapExceeded("statevector of " + std::to_string(k) + " qubits exceeds the engine cap of " +
                              std::to_string(kMaxQubits));
        }
        return k;
    }

    std::size_t k_ = 0;
    std::vector<cplx> amps_;
};

namespace detail {

inline std::array<cplx, 4> to_array2(const DenseOperator &m) {
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

inline std::array<cplx, 16> to_array4(const DenseOperator &m) {
    std::array<cplx, 16> a;
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            a[static_cast<std::size_t>(r * 4 + c)] = m(r, c);
        }
    }
    return a;
}

}  // namespace detail

inline void apply_gate(QState &s, const Gate &g) {
    const std::size_t k = s.num_qubits();
    if (g.kind == GateKind::PauliRot) {
        kernels::apply_pauli_rotation(s.amps(), kernels::make_mask(k, g.pauli, g.targets), g.angle);
        return;
    }
    if (g.targets.size() == 1) {
        kernels::apply_1q(s.amps(), k, g.targets[0], detail::to_array2(g.to_matrix()));
    } else if (g.targets.size() == 2) {
        kernels::apply_2q(s.amps(), k, g.targets[0], g.targets[1], detail::to_array4(g.to_matrix()));
    } else {
        kernels::apply_dense(s.amps(), k, g.targets, g.to_matrix());
    }
}

inline void apply_circuit_inplace(QState &s, const Circuit &c) {
    if (c.num_qubits() != s.num_qubits()) {
        throw SizeMismatch("circuit on " + std::to_string(c.num_qubits()) + " qubits applied to a " +
                           std::to_string(s.num_qubits()) + "-qubit state");
    }
    for (const auto &layer : c.layers()) {
        for (const auto &g : layer) {
            apply_gate(s, g);
        }
    }
}

inline QState apply_circuit(QState s, const Circuit &c) {
    apply_circuit_inplace(s, c);
    return s;
}

/// Draws computational-basis outcomes from |amplitude|^2.
class BornSampler {
   public:
    explicit BornSampler(const std::vector<cplx> &amps) : cdf_(amps.size()) {
        double acc = 0;
        for (std::size_t i = 0; i < amps.size(); i++) {
            acc += std::norm(amps[i]);
            cdf_[i] = acc;
        }
        if (!(acc > 0)) {
            throw ZeroOperator("cannot sample from a zero vector");
        }
    }
    explicit BornSampler(const QState &s) : BornSampler(s.amps()) {
    }

    uint64_t sample(RngStream &rng) const {
        const double u = rng.uniform() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        if (i == cdf_.size()) {
            // u rounded up to the total; take the last outcome with weight.
            i = cdf_.size() - 1;
            while (i > 0 && cdf_[i] == cdf_[i - 1]) {
                i--;
            }
        }
        return i;
    }

    double probability(uint64_t i) const {
        return (i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1]) / cdf_.back();
    }

   private:
    std::vector<double> cdf_;
};

inline std::map<uint64_t, uint64_t> born_sample(const QState &s, uint64_t shots, RngStream &rng) {
    if (shots == 0) {
        throw InvalidArgument("born_sample: shots must be at least 1");
    }
    BornSampler sampler(s);
    std::map<uint64_t, uint64_t> counts;
    for (uint64_t i = 0; i < shots; i++) {
        counts[sampler.sample(rng)]++;
    }
    return counts;
}

/// Register order of the L (even) or R (odd) qubits of n sites.
inline std::vector<std::size_t> side_qubits(std::size_t n, bool right) {
    std::vector<std::size_t> q(n);
    for (std::size_t i = 0; i < n; i++) {
        q[i] = 2 * i + (right ? 1 : 0);
    }
    return q;
}

inline void require_hermitian(const PauliSum &h) {
    if (!h.is_hermitian()) {
        throw NotHermitian("Hamiltonian has complex coefficients");
    }
}

/// First-order Trotter circuit for e^{-iHt} on n qubits, terms in file order.
inline Circuit trotter_circuit(const PauliSum &h, double t, std::size_t steps) {
    require_hermitian(h);
    if (steps == 0) {
        throw InvalidArgument("steps must be at least 1");
    }
    Circuit c(h.n());
    if (t == 0) {
        return c;
    }
    const double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; s++) {
        for (const auto &term : h.terms()) {
            if (term.str.is_identity()) {
                continue;
            }
            std::vector<std::size_t> support;
            PauliString local(term.str.weight());
            for (std::size_t q = 0; q < h.n(); q++) {
                if (term.str.z(q) || term.str.x(q)) {
                    local.set(support.size(), term.str.at(q));
                    support.push_back(q);
                }
            }
            c.append(Gate::pauli_rotation(local, support, -term.coef.real() * dt));
        }
    }
    return c;
}

/// Trotterized e^{iHt} (x) e^{-iHᵀt} on the interleaved 2n-qubit register. Each
/// factor is exp(i c dt P) on the L qubits paired with exp(-i c dt Pᵀ) on the R
/// qubits, in the same layer.
inline Circuit super_propagator_circuit(const PauliSum &h, double t, std::size_t steps) {
    require_hermitian(h);
    if (steps == 0) {
        throw InvalidArgument("steps must be at least 1");
    }
    const std::size_t n = h.n();
    Circuit c(2 * n);
    if (t == 0) {
        return c;
    }
    const double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; s++) {
        for (const auto &term : h.terms()) {
            if (term.str.is_identity()) {
                continue;
            }
            std::vector<std::size_t> left, right;
            PauliString local(term.str.weight());
            for (std::size_t q = 0; q < n; q++) {
                if (term.str.z(q) || term.str.x(q)) {
                    local.set(left.size(), term.str.at(q));
                    left.push_back(2 * q);
                    right.push_back(2 * q + 1);
                }
            }
            const double theta = term.coef.real() * dt;
            c.append(Gate::pauli_rotation(local, left, theta));
            c.append(Gate::pauli_rotation(local, right, -theta * local.transpose_sign()));
        }
    }
    return c;
}

/// U^dag (x) Uᵀ on the doubled register: maps ||O>>_C to ||U^dag O U>>_C.
inline Circuit heisenberg_circuit(const Circuit &u) {
    const std::size_t n = u.num_qubits();
    return Circuit::parallel(u.inverse().remapped(2 * n, side_qubits(n, false)),
                             u.transpose().remapped(2 * n, side_qubits(n, true)));
}

/// U (x) U* on the doubled register: maps ||O>>_C to ||U O U^dag>>_C.
inline Circuit schrodinger_circuit(const Circuit &u) {
    const std::size_t n = u.num_qubits();
    return Circuit::parallel(u.remapped(2 * n, side_qubits(n, false)),
                             u.conjugate().remapped(2 * n, side_qubits(n, true)));
}

/// Loads ||O>> by direct amplitude initialization.
inline QState prepare_vectorized(const PauliSum &o, const BasisTag &basis) {
    return QState::from_vectorized(vectorize(o, basis));
}

/// n Bell pairs, ||I>>_C.
inline QState bell_pairs(std::size_t n) {
    return QState::from_vectorized(vectorize(PauliSum(1.0, PauliString(n)), BasisTag::computational()));
}

/// ||U>>_C = (U (x) I)||I>>_C.
inline QState prepare_choi(const Circuit &u) {
    const std::size_t n = u.num_qubits();
    QState s = bell_pairs(n);
    apply_circuit_inplace(s, u.remapped(2 * n, side_qubits(n, false)));
    return s;
}

/// Support sites of O and O restricted to them.
inline std::pair<std::vector<std::size_t>, DenseOperator> restrict_to_support(const PauliSum &o) {
    std::vector<std::size_t> sites;
    for (std::size_t q = 0; q < o.n(); q++) {
        for (const auto &t : o.terms()) {
            if (t.str.z(q) || t.str.x(q)) {
                sites.push_back(q);
                break;
            }
        }
    }
    PauliSum local(sites.size());
    for (const auto &t : o.terms()) {
        PauliString p(sites.size());
        for (std::size_t i = 0; i < sites.size(); i++) {
            p.set(i, t.str.at(sites[i]));
        }
        local.add(t.coef, p);
    }
    if (local.empty()) {
        throw ZeroOperator("operator is zero");
    }
    return {sites, to_dense(local)};
}

/// O acting on the L qubits of its support, as a dense gate. Requires O unitary.
inline Gate operator_gate(const PauliSum &o, std::optional<std::size_t> control = std::nullopt) {
    auto [sites, m] = restrict_to_support(o);
    const long dim = m.rows();
    if ((DenseOperator(m.adjoint() * m) - DenseOperator::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
        throw NotUnitary("operator is not unitary");
    }
    std::vector<std::size_t> targets;
    DenseOperator g = m;
    if (control) {
        targets.push_back(*control);
        g = DenseOperator::Identity(2 * dim, 2 * dim);
        g.block(dim, dim, dim, dim) = m;
    }
    for (auto s : sites) {
        targets.push_back(2 * s);
    }
    return Gate::unitary(g, targets);
}

/// ||U^dag O U>>_C prepared by acting only on H_L: U, then O, then U^dag on ||I>>_C.
/// Avoids Uᵀ; requires O unitary.
inline QState prepare_heisenberg_transpose_free(const PauliSum &o, const Circuit &u) {
    const std::size_t n = u.num_qubits();
    if (o.n() != n) {
        throw SizeMismatch("operator and circuit differ in qubit count");
    }
    const auto left = side_qubits(n, false);
    QState s = bell_pairs(n);
    apply_circuit_inplace(s, u.remapped(2 * n, left));
    apply_gate(s, operator_gate(o));
    apply_circuit_inplace(s, u.inverse().remapped(2 * n, left));
    return s;
}

/// (||O' U' O(t) U'^dag>>_C |1> + ||I>>_C |0>)/sqrt 2 with the ancilla as the
/// last qubit (index 2n). O(t) = U^dag O U.
inline QState interferometric_state(const PauliSum &o, const PauliSum &o2, const Circuit &u, const Circuit &u2) {
    const std::size_t n = u.num_qubits();
    if (o.n() != n || o2.n() != n || u2.num_qubits() != n) {
        throw SizeMismatch("interferometric_state: operands differ in qubit count");
    }
    const std::size_t anc = 2 * n;
    std::vector<cplx> amps(std::size_t{1} << (2 * n + 1), cplx(0));
    QState bell = bell_pairs(n);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < bell.amps().size(); i++) {
        amps[2 * i] = bell.amps()[i] * r;
        amps[2 * i + 1] = bell.amps()[i] * r;
    }
    QState s(2 * n + 1, std::move(amps));
    std::vector<std::size_t> map(2 * n);
    for (std::size_t q = 0; q < 2 * n; q++) {
        map[q] = q;
    }
    apply_gate(s, operator_gate(o, anc));
    apply_circuit_inplace(s, heisenberg_circuit(u).remapped(2 * n + 1, map));
    apply_circuit_inplace(s, schrodinger_circuit(u2).remapped(2 * n + 1, map));
    apply_gate(s, operator_gate(o2, anc));
    return s;
}

struct ProjectionResult {
    /// Projected, unnormalized state on 2n qubits.
    QState state;
    double probability = 0;
};

/// Applies U_SE^dag (x) U_SE'ᵀ to s (x) ||I_E>>_C and projects the environment
/// onto |0...0> on both copies. The dilation acts on sites[0..] followed by n_e
/// fresh environment qubits.
inline ProjectionResult channel_dual_project(const Circuit &dilation, std::size_t n_e, const VectorizedState &s,
                                             const std::vector<std::size_t> &sites) {
    if (s.basis.kind != BasisKind::Computational || s.d() != 2) {
        throw BasisMismatch("channel_dual: state must be a qubit state in the computational basis");
    }
    if (dilation.num_qubits() != sites.size() + n_e) {
        throw SizeMismatch("channel_dual: dilation acts on " + std::to_string(dilation.num_qubits()) +
                           " qubits, expected |S| + n_E = " + std::to_string(sites.size() + n_e));
    }
    const std::size_t n = s.n;
    for (auto q : sites) {
        if (q >= n) {
            throw InvalidArgument("channel_dual: site out of range");
        }
    }
    const std::size_t total = n + n_e;
    // Extended register: the n system sites followed by n_e environment sites,
    // each environment site holding a Bell pair between E (L) and E' (R).
    std::vector<cplx> ext(std::size_t{1} << (2 * total), cplx(0));
    const double bell = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << n_e));
    for (std::size_t i = 0; i < s.amps.size(); i++) {
        if (s.amps[i] == cplx(0)) {
            continue;
        }
        for (uint64_t e = 0; e < (uint64_t{1} << n_e); e++) {
            uint64_t env = 0;
            for (std::size_t j = 0; j < n_e; j++) {
                if ((e >> (n_e - 1 - j)) & 1) {
                    env |= uint64_t{3} << (2 * (n_e - 1 - j));
                }
            }
            ext[(i << (2 * n_e)) | env] = s.amps[i] * bell;
        }
    }
    QState big(2 * total, std::move(ext));
    std::vector<std::size_t> dil_sites = sites;
    for (std::size_t j = 0; j < n_e; j++) {
        dil_sites.push_back(n + j);
    }
    std::vector<std::size_t> lmap, rmap;
    for (auto q : dil_sites) {
        lmap.push_back(2 * q);
        rmap.push_back(2 * q + 1);
    }
    Circuit dual = Circuit::parallel(dilation.inverse().remapped(2 * total, lmap),
                                     dilation.transpose().remapped(2 * total, rmap));
    apply_circuit_inplace(big, dual);
    std::vector<cplx> out(s.amps.size(), cplx(0));
    double prob = 0;
    for (std::size_t i = 0; i < out.size(); i++) {
        out[i] = big.amps()[i << (2 * n_e)];
        prob += std::norm(out[i]);
    }
    return {QState(2 * n, std::move(out)), prob};
}

struct PostselectResult {
    VectorizedState state;
    double success_prob = 0;
};

/// Heisenberg-picture channel dual by postselection. Throws ZeroProbability
/// when the projection removes all amplitude.
inline PostselectResult channel_dual_postselect(const Circuit &dilation, std::size_t n_e, const VectorizedState &s,
                                                const std::vector<std::size_t> &sites) {
    ProjectionResult pr = channel_dual_project(dilation, n_e, s, sites);
    if (pr.probability < 1e-14) {
        throw ZeroProbability("channel_dual: projection has zero success probability", pr.probability);
    }
    VectorizedState v = pr.state.to_vectorized(s.n, BasisTag::computational());
    v.normalize();
    return {v, pr.probability};
}

enum class Side { Left, Right };

/// e^{-beta H / 2} (x) I (Left) or I (x) e^{-beta Hᵀ / 2} (Right), renormalized.
inline VectorizedState imaginary_time_apply(const VectorizedState &s, const PauliSum &h, double beta, Side side) {
    if (s.basis.kind != BasisKind::Computational || s.d() != 2) {
        throw BasisMismatch("imaginary_time_apply: state must be in the computational basis");
    }
    if (beta < 0) {
        throw InvalidArgument("imaginary_time_apply: beta must be non-negative");
    }
    require_cap(s.n, "imaginary_time_apply");
    require_hermitian(h);
    if (h.n() != s.n) {
        throw SizeMismatch("imaginary_time_apply: Hamiltonian and state differ in n");
    }
    DenseOperator hd = to_dense(h);
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(hd);
    Eigen::VectorXd w = (-beta / 2.0 * es.eigenvalues().array()).exp();
    DenseOperator g = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    if (side == Side::Right) {
        g.transposeInPlace();
    }
    VectorizedState r = s;
    kernels::apply_dense(r.amps, 2 * s.n, side_qubits(s.n, side == Side::Right), g);
    r.normalize();
    return r;
}

/// A factor of an operator word: a Hermitian Pauli string, optionally in the
/// Heisenberg picture U^dag P U.
struct WordFactor {
    PauliString p;
    bool evolved = false;
};

/// ||W>>_C for W = F_1 F_2 ... F_m, built as (W (x) I)||I>>_C by acting on H_L only.
inline VectorizedState word_state(const std::vector<WordFactor> &word, const Circuit &u) {
    const std::size_t n = u.num_qubits();
    const auto left = side_qubits(n, false);
    const Circuit fwd = u.remapped(2 * n, left), back = u.inverse().remapped(2 * n, left);
    QState s = bell_pairs(n);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (it->p.n() != n) {
            throw SizeMismatch("word_state: factor size differs from circuit");
        }
        if (it->evolved) {
            apply_circuit_inplace(s, fwd);
        }
        kernels::apply_pauli(s.amps(), kernels::make_mask(2 * n, it->p, left));
        if (it->evolved) {
            apply_circuit_inplace(s, back);
        }
    }
    return s.to_vectorized(n, BasisTag::computational());
}

/// <W_b^dag|_R |W_a>_L = tr(rho^{1/2} W_a rho^{1/2} W_b)/Z for unitary words, with
/// rho = e^{-beta H}.
inline cplx thermal_overlap(const std::vector<WordFactor> &wa, const std::vector<WordFactor> &wb, const Circuit &u,
                            const PauliSum &h, double beta) {
    std::vector<WordFactor> wb_dag(wb.rbegin(), wb.rend());
    VectorizedState a = imaginary_time_apply(word_state(wa, u), h, beta, Side::Left);
    VectorizedState b = imaginary_time_apply(word_state(wb_dag, u), h, beta, Side::Right);
    return kernels::inner(b.amps, a.amps);
}

/// tr(rho^{a1} O(t) rho^{a2} A rho^{a3} O(t) rho^{a4} B)/Z through the
/// imaginary-time map, where O(t) = U^dag O U and the two exponents named by
/// `pattern` are 1/2. O, A and B are Pauli strings.
inline cplx regulated_otoc(const PauliString &o, const PauliString &a, const PauliString &b, const Circuit &u,
                           const PauliSum &h, double beta, std::pair<int, int> pattern) {
    auto [p1, p2] = pattern;
    if (p1 > p2) {
        std::swap(p1, p2);
    }
    if (p1 == p2 || p1 < 0 || p2 > 3) {
        throw InvalidArgument("regulated_otoc: pattern must name two distinct exponents in 0..3");
    }
    const std::vector<WordFactor> factors = {{o, true}, {a, false}, {o, true}, {b, false}};
    std::vector<WordFactor> wa, wb;
    for (int i = p1; i < p2; i++) {
        wa.push_back(factors[static_cast<std::size_t>(i)]);
    }
    for (int i = p2; i < p1 + 4; i++) {
        wb.push_back(factors[static_cast<std::size_t>(i % 4)]);
    }
    return thermal_overlap(wa, wb, u, h, beta);
}

/// tr(rho^{1/2} O1 rho^{1/2} O2)/Z through the imaginary-time map.
inline cplx wightman(const PauliString &o1, const PauliString &o2, const PauliSum &h, double beta) {
    return thermal_overlap({{o1, false}}, {{o2, false}}, Circuit(o1.n()), h, beta);
}

/// Moves qubit q to position perm[q].
inline QState permute_qubits(const QState &s, const std::vector<std::size_t> &perm) {
    const std::size_t k = s.num_qubits();
    if (perm.size() != k) {
        throw SizeMismatch("permute_qubits: permutation size differs from register");
    }
    std::vector<bool> seen(k, false);
    for (auto p : perm) {
        if (p >= k || seen[p]) {
            throw InvalidArgument("permute_qubits: not a permutation");
        }
        seen[p] = true;
    }
    std::vector<cplx> out(s.amps().size());
    for (uint64_t b = 0; b < out.size(); b++) {
        uint64_t nb = 0;
        for (std::size_t q = 0; q < k; q++) {
            if ((b >> (k - 1 - q)) & 1) {
                nb |= uint64_t{1} << (k - 1 - perm[q]);
            }
        }
        out[nb] = s.amps()[b];
    }
    return QState(k, std::move(out));
}

}  // namespace opvec

#endif
