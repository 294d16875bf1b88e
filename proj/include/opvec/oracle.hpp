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

#ifndef OPVEC_ORACLE_HPP
#define OPVEC_ORACLE_HPP

// Brute-force dense ground truth. Everything here is built from Kronecker
// products and Eigen decompositions; none of the statevector kernels are used.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "opvec/circuit.hpp"
#include "opvec/common.hpp"
#include "opvec/pauli.hpp"
#include "opvec/superop.hpp"

namespace opvec::oracle {

struct OracleConfig {
    int max_n = kDefaultOracleCap;
    double tolerance = 1e-10;

    void check(std::size_t n, const char *what) const {
        if (max_n > kDefaultOracleCap) {
            throw InvalidArgument("oracle max_n cannot exceed " + std::to_string(kDefaultOracleCap));
        }
        if (static_cast<long>(n) > std::min(max_n, oracle_cap())) {
            throw CapExceeded(std::string(what) + ": n=" + std::to_string(n) + " exceeds oracle cap " +
                              std::to_string(std::min(max_n, oracle_cap())));
        }
    }
};

inline std::size_t sites_of(const DenseOperator &m) {
    if (m.rows() != m.cols()) {
        throw SizeMismatch("oracle: operator is not square");
    }
    std::size_t n = 0;
    while ((1L << n) < m.rows()) {
        n++;
    }
    if ((1L << n) != m.rows()) {
        throw SizeMismatch("oracle: dimension is not a power of two");
    }
    return n;
}

inline DenseOperator kron(const DenseOperator &a, const DenseOperator &b) {
    DenseOperator r(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); i++) {
        for (long j = 0; j < a.cols(); j++) {
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return r;
}

inline DenseOperator single_pauli(char c) {
    const cplx i(0, 1);
    DenseOperator m(2, 2);
    switch (c) {
        case 'I':
            m << 1, 0, 0, 1;
            break;
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, -i, i, 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            throw ParseError(std::string("oracle: bad Pauli letter ") + c);
    }
    return m;
}

/// Site 0 is the leftmost Kronecker factor.
inline DenseOperator pauli_matrix(const PauliString &p) {
    DenseOperator m = DenseOperator::Identity(1, 1);
    for (std::size_t q = 0; q < p.n(); q++) {
        m = kron(m, single_pauli(p.at(q)));
    }
    return m;
}

inline DenseOperator dense(const PauliSum &o, const OracleConfig &cfg = {}) {
    cfg.check(o.n(), "oracle::dense");
    const long dim = 1L << o.n();
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (const auto &t : o.terms()) {
        m += t.coef * pauli_matrix(t.str);
    }
    return m;
}

/// O scaled so that tr(O^dag O) = 2^n.
inline DenseOperator normalize_hs(const DenseOperator &o) {
    const double f = o.squaredNorm();
    if (f == 0) {
        throw ZeroOperator("oracle: zero operator");
    }
    return o * std::sqrt(static_cast<double>(o.rows()) / f);
}

inline void require_unitary(const DenseOperator &u, double tol) {
    const long d = u.rows();
    if (u.cols() != d || (u.adjoint() * u - DenseOperator::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
        throw NotUnitary("oracle: matrix is not unitary");
    }
}

/// Full matrix of a gate on a k-qubit register, targets[0] being the most
/// significant gate index bit.
inline DenseOperator embed(const DenseOperator &g, const std::vector<std::size_t> &targets, std::size_t k) {
    const long dim = 1L << k;
    const long gd = 1L << targets.size();
    std::vector<uint64_t> bits;
    for (auto t : targets) {
        bits.push_back(uint64_t{1} << (k - 1 - t));
    }
    auto sub = [&](uint64_t x) {
        uint64_t s = 0;
        for (auto b : bits) {
            s = (s << 1) | ((x & b) ? 1 : 0);
        }
        return s;
    };
    auto put = [&](uint64_t x, uint64_t s) {
        for (std::size_t j = 0; j < bits.size(); j++) {
            if ((s >> (bits.size() - 1 - j)) & 1) {
                x |= bits[j];
            } else {
                x &= ~bits[j];
            }
        }
        return x;
    };
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (uint64_t c = 0; c < static_cast<uint64_t>(dim); c++) {
        const uint64_t sc = sub(c);
        for (uint64_t sr = 0; sr < static_cast<uint64_t>(gd); sr++) {
            m(static_cast<long>(put(c, sr)), static_cast<long>(c)) = g(static_cast<long>(sr), static_cast<long>(sc));
        }
    }
    return m;
}

inline DenseOperator gate_matrix(const Gate &g) {
    if (g.kind == GateKind::PauliRot) {
        const long d = 1L << g.pauli.n();
        return std::cos(g.angle) * DenseOperator::Identity(d, d) + cplx(0, std::sin(g.angle)) * pauli_matrix(g.pauli);
    }
    return g.to_matrix();
}

/// The unitary implemented by a circuit (first layer applied first).
inline DenseOperator circuit_unitary(const Circuit &c, const OracleConfig &cfg = {}) {
    const std::size_t k = c.num_qubits();
    if (k > 2 * static_cast<std::size_t>(cfg.max_n)) {
        throw CapExceeded("oracle::circuit_unitary: register too large");
    }
    const long dim = 1L << k;
    DenseOperator u = DenseOperator::Identity(dim, dim);
    for (const auto &g : c.gates()) {
        u = embed(gate_matrix(g), g.targets, k) * u;
    }
    return u;
}

/// e^{-iHt} by Hermitian eigendecomposition.
inline DenseOperator exact_propagator(const PauliSum &h, double t, const OracleConfig &cfg = {}) {
    DenseOperator hd = dense(h, cfg);
    if ((hd - hd.adjoint()).cwiseAbs().maxCoeff() > cfg.tolerance) {
        throw NotHermitian("oracle: Hamiltonian is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(hd);
    Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// First-order product formula prod_steps prod_terms e^{-i c dt P}, terms in order.
inline DenseOperator exact_trotter_unitary(const PauliSum &h, double t, std::size_t steps,
                                           const OracleConfig &cfg = {}) {
    cfg.check(h.n(), "oracle::exact_trotter_unitary");
    const long dim = 1L << h.n();
    const double dt = t / static_cast<double>(steps);
    DenseOperator step = DenseOperator::Identity(dim, dim);
    for (const auto &term : h.terms()) {
        const double a = term.coef.real() * dt;
        DenseOperator e = std::cos(a) * DenseOperator::Identity(dim, dim) - cplx(0, std::sin(a)) * pauli_matrix(term.str);
        step = e * step;
    }
    DenseOperator u = DenseOperator::Identity(dim, dim);
    for (std::size_t s = 0; s < steps; s++) {
        u = step * u;
    }
    return u;
}

/// U^dag O U.
inline DenseOperator exact_heisenberg(const DenseOperator &o, const DenseOperator &u, const OracleConfig &cfg = {}) {
    if (o.rows() != u.rows() || o.cols() != u.cols()) {
        throw SizeMismatch("exact_heisenberg: dimensions differ");
    }
    cfg.check(sites_of(o), "exact_heisenberg");
    require_unitary(u, cfg.tolerance);
    return u.adjoint() * o * u;
}

/// c_k = tr(Q_k^dag O)/2^n for Q_k = Z^a X^b, indexed with the (a, b) bits of
/// site i at positions (2i, 2i+1) counted from the most significant end.
inline std::vector<cplx> exact_pauli_amplitudes(const DenseOperator &o, const OracleConfig &cfg = {}) {
    const std::size_t n = sites_of(o);
    cfg.check(n, "exact_pauli_amplitudes");
    const uint64_t dim = uint64_t{1} << n;
    std::vector<cplx> c(dim * dim);
    for (uint64_t a = 0; a < dim; a++) {
        for (uint64_t b = 0; b < dim; b++) {
            cplx acc = 0;
            for (uint64_t j = 0; j < dim; j++) {
                const uint64_t m = j ^ b;
                double s = 1;
                for (std::size_t q = 0; q < n; q++) {
                    if ((a >> q) & (m >> q) & 1) {
                        s = -s;
                    }
                }
                acc += s * o(static_cast<long>(m), static_cast<long>(j));
            }
            uint64_t idx = 0;
            for (std::size_t i = 0; i < n; i++) {
                const std::size_t q = n - 1 - i;
                idx = (idx << 1) | ((a >> q) & 1);
                idx = (idx << 1) | ((b >> q) & 1);
            }
            c[idx] = acc / static_cast<double>(dim);
        }
    }
    return c;
}

/// Pauli distribution p_k = |c_k|^2 / sum |c|^2.
inline std::vector<double> exact_pauli_distribution(const DenseOperator &o, const OracleConfig &cfg = {}) {
    auto c = exact_pauli_amplitudes(o, cfg);
    double tot = 0;
    for (auto v : c) {
        tot += std::norm(v);
    }
    if (tot == 0) {
        throw ZeroOperator("exact_pauli_distribution: zero operator");
    }
    std::vector<double> p;
    for (auto v : c) {
        p.push_back(std::norm(v) / tot);
    }
    return p;
}

/// tr(O^dag P^dag O Q)/2^n, real part.
inline double exact_otoc(const DenseOperator &o, const DenseOperator &p, const DenseOperator &q,
                         const OracleConfig &cfg = {}) {
    cfg.check(sites_of(o), "exact_otoc");
    return (o.adjoint() * p.adjoint() * o * q).trace().real() / static_cast<double>(o.rows());
}

/// tr(P U^dag Q U)/2^n.
inline double exact_two_point(const DenseOperator &u, const DenseOperator &p, const DenseOperator &q,
                              const OracleConfig &cfg = {}) {
    cfg.check(sites_of(u), "exact_two_point");
    return (p * u.adjoint() * q * u).trace().real() / static_cast<double>(u.rows());
}

/// Real part of tr(O'(t')^dag O(t))/2^n with O(t) = U^dag O U.
inline double exact_correlator(const DenseOperator &o, const DenseOperator &o2, const DenseOperator &u,
                               const DenseOperator &u2, const OracleConfig &cfg = {}) {
    cfg.check(sites_of(o), "exact_correlator");
    DenseOperator a = u.adjoint() * o * u;
    DenseOperator b = u2.adjoint() * o2 * u2;
    return (b.adjoint() * a).trace().real() / static_cast<double>(o.rows());
}

/// tr(O^dag A^k(O)) / tr(O^dag O) with A(X) = sum f P X Q.
inline double exact_superop_expectation(const OperatorSumSuperop &a, const DenseOperator &o, int k = 1,
                                        const OracleConfig &cfg = {}) {
    cfg.check(a.n(), "exact_superop_expectation");
    DenseOperator x = o;
    for (int i = 0; i < k; i++) {
        DenseOperator y = DenseOperator::Zero(o.rows(), o.cols());
        for (const auto &t : a.terms()) {
            y += t.f * pauli_matrix(t.left) * x * pauli_matrix(t.right);
        }
        x = y;
    }
    return ((o.adjoint() * x).trace() / (o.adjoint() * o).trace()).real();
}

struct OseExact {
    double purity = 0;
    double entropy = 0;
};

/// P^(alpha) = sum p_k^alpha and M^(alpha) = ln P^(alpha)/(1 - alpha). alpha = 1
/// gives the Shannon entropy (purity reported as 1).
inline OseExact exact_ose(const DenseOperator &o, double alpha, const OracleConfig &cfg = {}) {
    if (!(alpha >= 1)) {
        throw InvalidArgument("exact_ose: alpha must be at least 1");
    }
    auto p = exact_pauli_distribution(o, cfg);
    OseExact r;
    if (alpha == 1) {
        r.purity = 1;
        for (double v : p) {
            if (v > 0) {
                r.entropy -= v * std::log(v);
            }
        }
        return r;
    }
    for (double v : p) {
        r.purity += std::pow(v, alpha);
    }
    r.entropy = std::log(r.purity) / (1 - alpha);
    return r;
}

struct LoeExact {
    double purity_trace = 0;
    double entropy = 0;
    double linear = 0;
};

/// Reduced density matrix of the row-stacked, unit-norm ||O>>_C over the
/// (L, R) qubit pairs of the sites in `partition`.
inline DenseOperator exact_reduced_state(const DenseOperator &o, const std::vector<std::size_t> &partition,
                                         const OracleConfig &cfg = {}) {
    const std::size_t n = sites_of(o);
    cfg.check(n, "exact_loe");
    std::vector<bool> in_a(n, false);
    for (auto a : partition) {
        if (a >= n || in_a[a]) {
            throw InvalidArgument("exact_loe: partition sites must be distinct and in range");
        }
        in_a[a] = true;
    }
    if (partition.empty() || partition.size() == n) {
        throw InvalidArgument("exact_loe: partition must be a nonempty proper subset");
    }
    const double nrm = std::sqrt(o.squaredNorm());
    if (nrm == 0) {
        throw ZeroOperator("exact_loe: zero operator");
    }
    const std::size_t na = partition.size();
    const long da = 1L << (2 * na), db = 1L << (2 * (n - na));
    DenseOperator psi = DenseOperator::Zero(da, db);
    const uint64_t dim = uint64_t{1} << n;
    for (uint64_t r = 0; r < dim; r++) {
        for (uint64_t c = 0; c < dim; c++) {
            uint64_t ia = 0, ib = 0;
            for (std::size_t s = 0; s < n; s++) {
                const uint64_t rb = (r >> (n - 1 - s)) & 1, cb = (c >> (n - 1 - s)) & 1;
                if (in_a[s]) {
                    ia = (ia << 2) | (rb << 1) | cb;
                } else {
                    ib = (ib << 2) | (rb << 1) | cb;
                }
            }
            psi(static_cast<long>(ia), static_cast<long>(ib)) = o(static_cast<long>(r), static_cast<long>(c)) / nrm;
        }
    }
    return psi * psi.adjoint();
}

inline LoeExact exact_loe(const DenseOperator &o, const std::vector<std::size_t> &partition, double alpha,
                          const OracleConfig &cfg = {}) {
    if (!(alpha >= 1)) {
        throw InvalidArgument("exact_loe: alpha must be at least 1");
    }
    DenseOperator rho = exact_reduced_state(o, partition, cfg);
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(rho);
    LoeExact r;
    if (alpha == 1) {
        for (long i = 0; i < es.eigenvalues().size(); i++) {
            const double v = es.eigenvalues()(i);
            if (v > 0) {
                r.entropy -= v * std::log(v);
            }
        }
        r.purity_trace = 1;
        r.linear = 0;
        return r;
    }
    for (long i = 0; i < es.eigenvalues().size(); i++) {
        r.purity_trace += std::pow(std::max(0.0, es.eigenvalues()(i)), alpha);
    }
    r.entropy = std::log(r.purity_trace) / (1 - alpha);
    r.linear = 1 - r.purity_trace;
    return r;
}

/// e^{-s H} for Hermitian H.
inline DenseOperator thermal_power(const DenseOperator &h, double s) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
    Eigen::VectorXd w = (-s * es.eigenvalues().array()).exp();
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// tr(rho^{a1} O(t) rho^{a2} A rho^{a3} O(t) rho^{a4} B)/Z with rho = e^{-beta H},
/// Z = tr rho and O(t) = e^{iHt} O e^{-iHt}. The two exponents named by
/// `pattern` (indices 0..3) are 1/2, the others 0.
inline cplx exact_regulated(const DenseOperator &o, const DenseOperator &a, const DenseOperator &b, const PauliSum &h,
                            double t, double beta, std::pair<int, int> pattern, const OracleConfig &cfg = {}) {
    auto [p1, p2] = pattern;
    if (p1 == p2 || p1 < 0 || p2 < 0 || p1 > 3 || p2 > 3) {
        throw InvalidArgument("exact_regulated: pattern must name two distinct exponents in 0..3");
    }
    if (beta < 0) {
        throw InvalidArgument("exact_regulated: beta must be non-negative");
    }
    DenseOperator hd = dense(h, cfg);
    DenseOperator u = exact_propagator(h, t, cfg);
    DenseOperator ot = u.adjoint() * o * u;
    DenseOperator half = thermal_power(hd, beta / 2);
    const cplx z = thermal_power(hd, beta).trace();
    const long dim = o.rows();
    auto r = [&](int idx) -> DenseOperator {
        return (idx == p1 || idx == p2) ? half : DenseOperator::Identity(dim, dim);
    };
    DenseOperator m = r(0) * ot * r(1) * a * r(2) * ot * r(3) * b;
    return m.trace() / z;
}

/// tr(rho_{beta/2} O1 rho_{beta/2} O2)/Z.
inline cplx exact_wightman(const DenseOperator &o1, const DenseOperator &o2, const PauliSum &h, double beta,
                           const OracleConfig &cfg = {}) {
    if (beta < 0) {
        throw InvalidArgument("exact_wightman: beta must be non-negative");
    }
    DenseOperator hd = dense(h, cfg);
    DenseOperator half = thermal_power(hd, beta / 2);
    return (half * o1 * half * o2).trace() / thermal_power(hd, beta).trace();
}

/// E^dag(O) = sum E_k^dag O E_k.
inline DenseOperator exact_channel_dual(const std::vector<DenseOperator> &kraus, const DenseOperator &o,
                                        const OracleConfig &cfg = {}) {
    if (kraus.empty()) {
        throw InvalidArgument("exact_channel_dual: empty Kraus list");
    }
    const long d = o.rows();
    cfg.check(sites_of(o), "exact_channel_dual");
    DenseOperator comp = DenseOperator::Zero(d, d);
    DenseOperator out = DenseOperator::Zero(d, d);
    for (const auto &e : kraus) {
        if (e.rows() != d || e.cols() != d) {
            throw SizeMismatch("exact_channel_dual: Kraus operator dimension differs");
        }
        comp += e.adjoint() * e;
        out += e.adjoint() * o * e;
    }
    if ((comp - DenseOperator::Identity(d, d)).cwiseAbs().maxCoeff() > cfg.tolerance) {
        throw InvalidArgument("exact_channel_dual: Kraus set is not complete");
    }
    return out;
}

/// Success probability of the postselected channel-dual preparation:
/// tr(E^dag(O)^dag E^dag(O)) / (tr(O^dag O) 2^{n_E}).
inline double exact_channel_dual_success(const std::vector<DenseOperator> &kraus, const DenseOperator &o,
                                         std::size_t n_e, const OracleConfig &cfg = {}) {
    DenseOperator e = exact_channel_dual(kraus, o, cfg);
    return e.squaredNorm() / (o.squaredNorm() * static_cast<double>(uint64_t{1} << n_e));
}

}  // namespace opvec::oracle

#endif
