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

#ifndef OPVEC_SUPEROP_HPP
#define OPVEC_SUPEROP_HPP

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "opvec/circuit.hpp"
#include "opvec/clifford.hpp"
#include "opvec/kernels.hpp"
#include "opvec/pauli.hpp"
#include "opvec/vectorize.hpp"

namespace opvec {

/// f * left (.) right, with right Hermitian so right^dag = right.
struct SuperopTerm {
    cplx f;
    PauliString left;
    PauliString right;
};

/// A(.) = sum f_kl P_k (.) P_l over Pauli strings.
class OperatorSumSuperop {
   public:
    OperatorSumSuperop() = default;
    explicit OperatorSumSuperop(std::size_t n) : n_(n) {
    }

    std::size_t n() const {
        return n_;
    }
    const std::vector<SuperopTerm> &terms() const {
        return terms_;
    }

    void add(cplx f, const PauliString &left, const PauliString &right) {
        if (left.n() != n_ || right.n() != n_) {
            throw SizeMismatch("superoperator term size differs from n=" + std::to_string(n_));
        }
        for (std::size_t i = 0; i < terms_.size(); i++) {
            if (terms_[i].left == left && terms_[i].right == right) {
                terms_[i].f += f;
                if (terms_[i].f == cplx(0)) {
                    terms_.erase(terms_.begin() + static_cast<long>(i));
                }
                return;
            }
        }
        if (f != cplx(0)) {
            terms_.push_back({f, left, right});
        }
    }

    /// A^dag = sum f* P_k (.) P_l for Hermitian Paulis, so A is self-adjoint
    /// exactly when every merged coefficient is real.
    bool self_adjoint(double tol = 1e-12) const {
        for (const auto &t : terms_) {
            if (std::abs(t.f.imag()) > tol) {
                return false;
            }
        }
        return true;
    }

    /// A(O) evaluated symbolically on a Pauli sum.
    PauliSum apply(const PauliSum &o) const {
        PauliSum r(n_);
        for (const auto &t : terms_) {
            for (const auto &ot : o.terms()) {
                auto [p1, s1] = pauli_product(t.left, ot.str);
                auto [p2, s2] = pauli_product(s1, t.right);
                r.add(t.f * ot.coef * (p1 * p2).value(), s2);
            }
        }
        return r;
    }

   private:
    std::size_t n_ = 0;
    std::vector<SuperopTerm> terms_;
};

struct DiagTerm {
    double f;
    PauliString p;
};

/// A superoperator diagonal in the Pauli basis: A(P_k) = lambda(P_k) P_k.
/// The optional sparse f lists the operator-sum form sum f_k P_k (.) P_k.
struct DiagonalSuperop {
    std::size_t n = 0;
    std::string name;
    std::function<double(const PauliString &)> lambda;
    std::optional<std::vector<DiagTerm>> f;

    double operator()(const PauliString &p) const {
        return lambda(p);
    }

    /// A^k, diagonal with entries lambda^k.
    DiagonalSuperop power(int k) const {
        if (k < 1) {
            throw InvalidArgument("superoperator power must be at least 1");
        }
        auto base = lambda;
        return {n, name + "^" + std::to_string(k), [base, k](const PauliString &p) { return std::pow(base(p), k); },
                std::nullopt};
    }

    OperatorSumSuperop to_operator_sum() const {
        if (!f) {
            throw InvalidArgument("diagonal superoperator '" + name + "' has no sparse operator-sum form");
        }
        OperatorSumSuperop a(n);
        for (const auto &t : *f) {
            a.add(t.f, t.p, t.p);
        }
        return a;
    }
};

/// lambda(P) = sum_k f_k K(P, P_k), K = +1 when commuting and -1 otherwise.
inline double lambda_from_sparse(const std::vector<DiagTerm> &f, const PauliString &p) {
    double s = 0;
    for (const auto &t : f) {
        s += commutes(p, t.p) ? t.f : -t.f;
    }
    return s;
}

inline DiagonalSuperop diagonal_from_sparse(std::size_t n, std::string name, std::vector<DiagTerm> f) {
    for (const auto &t : f) {
        if (t.p.n() != n) {
            throw SizeMismatch("diagonal term size differs from n");
        }
    }
    auto fs = f;
    return {n, std::move(name), [fs](const PauliString &p) { return lambda_from_sparse(fs, p); }, std::move(f)};
}

/// S(.) = (3n/4)(.) - (1/4) sum over weight-one P of P(.)P; lambda = weight.
inline DiagonalSuperop size_superop(std::size_t n) {
    std::vector<DiagTerm> f;
    f.push_back({0.75 * static_cast<double>(n), PauliString(n)});
    for (char c : {'X', 'Y', 'Z'}) {
        for (std::size_t q = 0; q < n; q++) {
            f.push_back({-0.25, PauliString::single(n, q, c)});
        }
    }
    return {n, "size", [](const PauliString &p) { return static_cast<double>(p.weight()); }, std::move(f)};
}

/// lambda = 1 when the rightmost non-identity site is x (1-based), else 0.
inline DiagonalSuperop rhs_boundary_superop(std::size_t n, std::size_t x) {
    if (x < 1 || x > n) {
        throw InvalidArgument("rhs_boundary position must lie in [1, n]");
    }
    return {n, "rhs_boundary@" + std::to_string(x),
            [x](const PauliString &p) {
                auto rb = geometric_features(p).right_boundary;
                return rb && *rb == x ? 1.0 : 0.0;
            },
            std::nullopt};
}

/// lambda = 1 when the weight equals k, else 0.
inline DiagonalSuperop weight_indicator_superop(std::size_t n, std::size_t k) {
    if (k > n) {
        throw InvalidArgument("weight indicator k exceeds n");
    }
    return {n, "weight_indicator@" + std::to_string(k),
            [k](const PauliString &p) { return p.weight() == k ? 1.0 : 0.0; }, std::nullopt};
}

/// The size superoperator in operator-sum form with terms ordered identity,
/// X_1..X_n, Y_1..Y_n, Z_1..Z_n, plus the grouping {I, X...}, {Y...}, {Z...}.
inline std::pair<OperatorSumSuperop, std::vector<std::vector<std::size_t>>> size_grouped(std::size_t n) {
    OperatorSumSuperop a = size_superop(n).to_operator_sum();
    std::vector<std::vector<std::size_t>> groups(3);
    groups[0].push_back(0);
    for (std::size_t g = 0; g < 3; g++) {
        for (std::size_t q = 0; q < n; q++) {
            groups[g].push_back(1 + g * n + q);
        }
    }
    return {a, groups};
}

struct TransferMatrix {
    BasisTag basis;
    DenseOperator entries;

    bool is_hermitian(double tol = 1e-12) const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
};

namespace detail {

inline void require_dense_superop(std::size_t n) {
    require_cap(n, "transfer_matrix");
    if (n > 6) {
        throw CapExceeded("dense transfer matrices are limited to n <= 6");
    }
}

inline std::vector<std::size_t> side_of(std::size_t n, bool right) {
    std::vector<std::size_t> q(n);
    for (std::size_t i = 0; i < n; i++) {
        q[i] = 2 * i + (right ? 1 : 0);
    }
    return q;
}

inline kernels::PauliMask term_mask(const SuperopTerm &t) {
    SignedPauli sp = interleave_conj(t.left, t.right);
    kernels::PauliMask m = kernels::make_mask(sp.p);
    m.sign = sp.sign();
    return m;
}

}  // namespace detail

/// R_{C,P}: the 4^n x 4^n matrix taking C-basis amplitudes to P-basis amplitudes.
inline DenseOperator bell_matrix(std::size_t n) {
    detail::require_dense_superop(n);
    const long dim = 1L << (2 * n);
    DenseOperator r(dim, dim);
    for (long j = 0; j < dim; j++) {
        VectorizedState e{n, BasisTag::computational(), std::vector<cplx>(static_cast<std::size_t>(dim), cplx(0))};
        e.amps[static_cast<std::size_t>(j)] = 1;
        VectorizedState t = bell_transform(e, BellDirection::CtoP);
        for (long i = 0; i < dim; i++) {
            r(i, j) = t.amps[static_cast<std::size_t>(i)];
        }
    }
    return r;
}

/// Transfer matrix of an operator-sum superoperator. C basis: sum f P (x) Q*.
/// P basis: [M]_ij = tr(Q_i^dag A(Q_j)) / 2^n with Q_k = Z^a X^b.
inline TransferMatrix transfer_matrix(const OperatorSumSuperop &a, const BasisTag &basis) {
    const std::size_t n = a.n();
    detail::require_dense_superop(n);
    if (basis.d != 2 || basis.kind == BasisKind::Custom) {
        throw BasisMismatch("transfer_matrix supports the qubit C and P bases");
    }
    const long dim = 1L << (2 * n);
    DenseOperator m = DenseOperator::Zero(dim, dim);
    if (basis.kind == BasisKind::Computational) {
        for (const auto &t : a.terms()) {
            kernels::PauliMask mask = detail::term_mask(t);
            for (uint64_t b = 0; b < static_cast<uint64_t>(dim); b++) {
                m(static_cast<long>(b ^ mask.x), static_cast<long>(b)) += t.f * mask.phase(b);
            }
        }
        return {basis, m};
    }
    for (uint64_t j = 0; j < static_cast<uint64_t>(dim); j++) {
        auto [pj, phj] = pauli_from_index(j, n);
        // Q_j = conj(phase_j) P_j.
        for (const auto &t : a.terms()) {
            auto [ph1, s1] = pauli_product(t.left, pj);
            auto [ph2, s2] = pauli_product(s1, t.right);
            PauliIndex pi = pauli_index_codec(s2);
            m(static_cast<long>(pi.index), static_cast<long>(j)) +=
                t.f * (ph1 * ph2).value() * phj.conj().value() * pi.phase.value();
        }
    }
    return {basis, m};
}

inline TransferMatrix transfer_matrix(const DiagonalSuperop &a, const BasisTag &basis) {
    const std::size_t n = a.n;
    detail::require_dense_superop(n);
    if (basis.d != 2 || basis.kind == BasisKind::Custom) {
        throw BasisMismatch("transfer_matrix supports the qubit C and P bases");
    }
    const long dim = 1L << (2 * n);
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (uint64_t j = 0; j < static_cast<uint64_t>(dim); j++) {
        m(static_cast<long>(j), static_cast<long>(j)) = a(pauli_from_index(j, n).first);
    }
    if (basis.kind == BasisKind::Computational) {
        DenseOperator r = bell_matrix(n);
        m = r.adjoint() * m * r;
    }
    return {basis, m};
}

/// M^A_C v for an operator-sum superoperator on C-basis amplitudes.
inline std::vector<cplx> apply_superop(const OperatorSumSuperop &a, const std::vector<cplx> &v) {
    std::vector<cplx> out(v.size(), cplx(0));
    for (const auto &t : a.terms()) {
        kernels::accumulate_pauli(out, v, detail::term_mask(t), t.f);
    }
    return out;
}

inline double real_or_throw(cplx v) {
    if (std::abs(v.imag()) > 1e-10) {
        throw NotSelfAdjoint("expectation has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

/// <A^k>_O = <<O|(M^A)^k|O>>.
inline double expectation(const OperatorSumSuperop &a, const VectorizedState &s, int k = 1) {
    if (!a.self_adjoint()) {
        throw NotSelfAdjoint("expectation needs a self-adjoint superoperator");
    }
    if (k < 1) {
        throw InvalidArgument("moment order must be at least 1");
    }
    if (s.n != a.n() || s.d() != 2) {
        throw SizeMismatch("superoperator and state differ in n");
    }
    VectorizedState c = s.basis.kind == BasisKind::Pauli ? bell_transform(s, BellDirection::PtoC) : s;
    if (c.basis.kind != BasisKind::Computational) {
        throw BasisMismatch("expectation needs a C or P basis state");
    }
    std::vector<cplx> v = c.amps;
    for (int i = 0; i < k; i++) {
        v = apply_superop(a, v);
    }
    return real_or_throw(kernels::inner(c.amps, v));
}

inline double expectation(const DiagonalSuperop &a, const VectorizedState &s, int k = 1) {
    if (k < 1) {
        throw InvalidArgument("moment order must be at least 1");
    }
    if (s.n != a.n || s.d() != 2) {
        throw SizeMismatch("superoperator and state differ in n");
    }
    VectorizedState p = s.basis.kind == BasisKind::Computational ? bell_transform(s, BellDirection::CtoP) : s;
    if (p.basis.kind != BasisKind::Pauli) {
        throw BasisMismatch("expectation needs a C or P basis state");
    }
    double acc = 0;
    for (uint64_t j = 0; j < p.amps.size(); j++) {
        double w = std::norm(p.amps[j]);
        if (w != 0) {
            acc += w * std::pow(a(pauli_from_index(j, s.n).first), k);
        }
    }
    return acc;
}

enum class WalshDirection { FToLambda, LambdaToF };

/// Dense transform over the 4^n Pauli indices: lambda = K f, or f = K lambda / 4^n.
inline std::vector<double> walsh_hadamard(const std::vector<double> &v, WalshDirection dir) {
    const std::size_t len = v.size();
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < len) {
        bits++;
    }
    if (len == 0 || (std::size_t{1} << bits) != len || bits % 2 != 0) {
        throw SizeMismatch("walsh_hadamard: length must be 4^n");
    }
    // K_ik = (-1)^{i . swap(k)} where swap exchanges the (z, x) bits per site.
    auto swap_bits = [](uint64_t k) { return ((k & 0xAAAAAAAAAAAAAAAAull) >> 1) | ((k & 0x5555555555555555ull) << 1); };
    std::vector<double> w(len);
    for (uint64_t k = 0; k < len; k++) {
        w[swap_bits(k)] = v[k];
    }
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += 2 * h) {
            for (std::size_t j = i; j < i + h; j++) {
                double a = w[j], b = w[j + h];
                w[j] = a + b;
                w[j + h] = a - b;
            }
        }
    }
    if (dir == WalshDirection::LambdaToF) {
        std::vector<double> out(len);
        for (uint64_t k = 0; k < len; k++) {
            out[k] = w[k] / static_cast<double>(len);
        }
        return out;
    }
    return w;
}

enum class CommutationVerdict { NotCommuting, AllSeparableCommuting, CommutingEntangledEigenbasis };

struct CommutationClass {
    CommutationVerdict verdict = CommutationVerdict::AllSeparableCommuting;
    /// First offending pair for NotCommuting, first doubly anticommuting pair
    /// for CommutingEntangledEigenbasis.
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

inline const char *verdict_name(CommutationVerdict v) {
    switch (v) {
        case CommutationVerdict::NotCommuting:
            return "NotCommuting";
        case CommutationVerdict::AllSeparableCommuting:
            return "AllSeparableCommuting";
        case CommutationVerdict::CommutingEntangledEigenbasis:
            return "CommutingEntangledEigenbasis";
    }
    return "?";
}

using PauliPair = std::pair<PauliString, PauliString>;

/// Terms P_i(.)Q_i and P_j(.)Q_j commute iff [P_i,P_j] and [Q_i,Q_j] both vanish
/// or both are anticommutators.
inline CommutationClass classify_commuting_set(const std::vector<PauliPair> &pairs) {
    if (pairs.empty()) {
        throw InvalidArgument("classify_commuting_set: empty set");
    }
    CommutationClass out;
    for (std::size_t i = 0; i < pairs.size(); i++) {
        for (std::size_t j = i + 1; j < pairs.size(); j++) {
            bool pc = commutes(pairs[i].first, pairs[j].first);
            bool qc = commutes(pairs[i].second, pairs[j].second);
            if (pc != qc) {
                return {CommutationVerdict::NotCommuting, std::make_pair(i, j)};
            }
            if (!pc && out.verdict == CommutationVerdict::AllSeparableCommuting) {
                out = {CommutationVerdict::CommutingEntangledEigenbasis, std::make_pair(i, j)};
            }
        }
    }
    return out;
}

/// The Bell transform as a circuit on the doubled register: CX(L -> R) then H(L).
inline Circuit bell_circuit(std::size_t n) {
    Circuit c(2 * n);
    for (std::size_t i = 0; i < n; i++) {
        c.append(Gate::named(GateKind::CX, {2 * i, 2 * i + 1}));
        c.append(Gate::named(GateKind::H, {2 * i}));
    }
    return c;
}

/// Clifford C with C (P_i (x) Q_i*) C^dag Z-type for every pair. The diagonal
/// family P_i = Q_i uses the Bell transform; separable sets get a circuit that is
/// a product over H_L and H_R.
inline Diagonalization common_eigenbasis_circuit(const std::vector<PauliPair> &pairs) {
    CommutationClass cls = classify_commuting_set(pairs);
    if (cls.verdict == CommutationVerdict::NotCommuting) {
        throw NotCommuting("pairs " + std::to_string(cls.witness->first) + " and " +
                           std::to_string(cls.witness->second) + " do not commute as superoperators");
    }
    const std::size_t n = pairs[0].first.n();
    std::vector<SignedPauli> ops;
    bool all_diag = true;
    for (const auto &[p, q] : pairs) {
        check_same_size(p, pairs[0].first);
        ops.push_back(interleave_conj(p, q));
        all_diag = all_diag && p == q;
    }
    Diagonalization out{Circuit(2 * n), ops};
    bool all_z = true;
    for (const auto &o : ops) {
        all_z = all_z && o.p.is_z_type();
    }
    if (all_z) {
        return out;
    }
    if (all_diag) {
        out.circuit = bell_circuit(n);
        for (auto &o : out.diagonal) {
            clifford::conjugate(o, out.circuit);
        }
        return out;
    }
    if (cls.verdict == CommutationVerdict::AllSeparableCommuting) {
        std::vector<SignedPauli> ls, rs;
        for (const auto &[p, q] : pairs) {
            ls.push_back({p, false});
            rs.push_back({q, q.transpose_sign() < 0});
        }
        Diagonalization dl = diagonalize_commuting(ls, n);
        Diagonalization dr = diagonalize_commuting(rs, n);
        out.circuit = Circuit::parallel(dl.circuit.remapped(2 * n, detail::side_of(n, false)),
                                        dr.circuit.remapped(2 * n, detail::side_of(n, true)));
        for (auto &o : out.diagonal) {
            clifford::conjugate(o, out.circuit);
        }
        return out;
    }
    return diagonalize_commuting(ops, 2 * n);
}

/// Parsed superoperator file: operator-sum lines `<re> <im> <left> <right>`, or
/// a single built-in name (`size`, `rhs_boundary@x`, `weight_indicator@k`).
using SuperopSpec = std::variant<OperatorSumSuperop, DiagonalSuperop>;

inline SuperopSpec parse_superop(const std::string &text, std::size_t n) {
    std::istringstream in(text);
    std::string line;
    std::optional<OperatorSumSuperop> a;
    std::optional<DiagonalSuperop> builtin;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        auto where = "superop line " + std::to_string(lineno) + ": ";
        if (tok.size() == 1) {
            if (builtin || a) {
                throw ParseError(where + "a built-in must be the only entry");
            }
            const std::string &name = tok[0];
            auto at = name.find('@');
            std::string base = name.substr(0, at);
            std::optional<std::size_t> arg;
            if (at != std::string::npos) {
                try {
                    std::size_t used = 0;
                    long v = std::stol(name.substr(at + 1), &used);
                    if (used != name.size() - at - 1 || v < 0) {
                        throw std::invalid_argument("bad");
                    }
                    arg = static_cast<std::size_t>(v);
                } catch (const std::exception &) {
                    throw ParseError(where + "bad built-in argument in '" + name + "'");
                }
            }
            try {
                if (base == "size" && !arg) {
                    builtin = size_superop(n);
                } else if (base == "rhs_boundary" && arg) {
                    builtin = rhs_boundary_superop(n, *arg);
                } else if (base == "weight_indicator" && arg) {
                    builtin = weight_indicator_superop(n, *arg);
                } else {
                    throw ParseError(where + "unknown built-in '" + name + "'");
                }
            } catch (const InvalidArgument &e) {
                throw ParseError(where + e.what());
            }
            continue;
        }
        if (tok.size() != 4) {
            throw ParseError(where + "expected '<re> <im> <left> <right>'");
        }
        if (builtin) {
            throw ParseError(where + "a built-in must be the only entry");
        }
        double re, im;
        try {
            std::size_t u1 = 0, u2 = 0;
            re = std::stod(tok[0], &u1);
            im = std::stod(tok[1], &u2);
            if (u1 != tok[0].size() || u2 != tok[1].size()) {
                throw std::invalid_argument("bad");
            }
        } catch (const std::exception &) {
            throw ParseError(where + "bad coefficient");
        }
        PauliString l, r;
        try {
            l = PauliString::from_string(tok[2]);
            r = PauliString::from_string(tok[3]);
        } catch (const ParseError &e) {
            throw ParseError(where + e.what());
        }
        if (l.n() != n || r.n() != n) {
            throw ParseError(where + "string length differs from n=" + std::to_string(n));
        }
        if (!a) {
            a.emplace(n);
        }
        a->add(cplx(re, im), l, r);
    }
    if (builtin) {
        return *builtin;
    }
    if (!a) {
        throw ParseError("superop: no terms");
    }
    return *a;
}

}  // namespace opvec

#endif
