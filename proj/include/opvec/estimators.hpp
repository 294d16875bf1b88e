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

#ifndef OPVEC_ESTIMATORS_HPP
#define OPVEC_ESTIMATORS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "opvec/clifford.hpp"
#include "opvec/rng.hpp"
#include "opvec/simulator.hpp"
#include "opvec/superop.hpp"
#include "opvec/vectorize.hpp"

namespace opvec {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct EstimatorReport {
    std::string label;
    double value = 0;
    double std_error = 0;
    uint64_t shots = 0;
    uint64_t seed = 0;
    std::map<std::string, std::string> metadata;
};

/// Running mean and unbiased variance of a stream of samples.
class SampleStats {
   public:
    void add(double v, uint64_t count = 1) {
        if (count == 0) {
            return;
        }
        const double c = static_cast<double>(count);
        const double total = static_cast<double>(n_) + c;
        const double delta = v - mean_;
        mean_ += delta * c / total;
        m2_ += delta * delta * static_cast<double>(n_) * c / total;
        n_ += count;
    }

    uint64_t count() const {
        return n_;
    }
    double mean() const {
        return mean_;
    }
    double variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double std_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

   private:
    uint64_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

inline EstimatorReport make_report(std::string label, const SampleStats &st, uint64_t seed) {
    return {std::move(label), st.mean(), st.std_error(), st.count(), seed, {}};
}

/// +-1 eigenvalue of a signed Z-type string on register outcome b.
inline int z_eigenvalue(const SignedPauli &d, uint64_t b) {
    const std::size_t k = d.p.n();
    uint64_t zmask = 0;
    for (std::size_t q = 0; q < k; q++) {
        if (d.p.z(q)) {
            zmask |= uint64_t{1} << (k - 1 - q);
        }
    }
    return (std::popcount(zmask & b) & 1) ? -d.sign() : d.sign();
}

namespace detail {

inline std::vector<uint64_t> z_masks(const std::vector<SignedPauli> &ds) {
    std::vector<uint64_t> out;
    for (const auto &d : ds) {
        if (!d.p.is_z_type()) {
            throw InvalidArgument("eigenbasis circuit left a non-diagonal operator");
        }
        const std::size_t k = d.p.n();
        uint64_t m = 0;
        for (std::size_t q = 0; q < k; q++) {
            if (d.p.z(q)) {
                m |= uint64_t{1} << (k - 1 - q);
            }
        }
        out.push_back(m);
    }
    return out;
}

inline int masked_sign(uint64_t mask, int sign, uint64_t b) {
    return (std::popcount(mask & b) & 1) ? -sign : sign;
}

}  // namespace detail

struct EmpiricalPauliDist {
    std::size_t n = 0;
    std::map<uint64_t, uint64_t> counts;
    uint64_t shots = 0;
    uint64_t seed = 0;

    PauliString string_at(uint64_t index) const {
        return pauli_from_index(index, n).first;
    }
};

/// Born samples of ||O>>_P decoded to Pauli-string indices.
inline EmpiricalPauliDist sample_pauli_dist(const VectorizedState &s, uint64_t shots, RngStream &rng) {
    if (s.basis.kind != BasisKind::Pauli || s.d() != 2) {
        throw BasisMismatch("sample_pauli_dist needs a qubit state in the Pauli basis");
    }
    if (shots == 0) {
        throw InvalidArgument("shots must be at least 1");
    }
    BornSampler sampler(s.amps);
    EmpiricalPauliDist d{s.n, {}, shots, rng.seed()};
    for (uint64_t i = 0; i < shots; i++) {
        d.counts[sampler.sample(rng)]++;
    }
    return d;
}

/// Empirical mean of lambda^power over the samples.
inline EstimatorReport mc_diagonal(const EmpiricalPauliDist &d, const DiagonalSuperop &a, int power = 1) {
    if (d.n != a.n) {
        throw SizeMismatch("distribution and superoperator differ in n");
    }
    if (power < 1) {
        throw InvalidArgument("moment order must be at least 1");
    }
    SampleStats st;
    for (const auto &[idx, c] : d.counts) {
        double v = std::pow(a(d.string_at(idx)), power);
        if (!std::isfinite(v)) {
            throw InvalidArgument("lambda is unbounded on a sampled string");
        }
        st.add(v, c);
    }
    EstimatorReport r = make_report(a.name.empty() ? "mc_diagonal" : a.name, st, d.seed);
    if (power > 1) {
        r.metadata["power"] = std::to_string(power);
    }
    return r;
}

/// <<O| P_i (x) Q_i* |O>> = tr(O^dag P_i O Q_i)/2^n for every pair, from one
/// measurement basis.
inline std::vector<EstimatorReport> estimate_otoc_group(const VectorizedState &s, const std::vector<PauliPair> &pairs,
                                                        uint64_t shots, RngStream &rng) {
    if (s.basis.kind != BasisKind::Computational || s.d() != 2) {
        throw BasisMismatch("estimate_otoc_group needs a qubit state in the computational basis");
    }
    if (shots == 0) {
        throw InvalidArgument("shots must be at least 1");
    }
    for (const auto &[p, q] : pairs) {
        if (p.n() != s.n || q.n() != s.n) {
            throw SizeMismatch("pair size differs from the state");
        }
    }
    Diagonalization diag = common_eigenbasis_circuit(pairs);
    QState q = QState::from_vectorized(s);
    apply_circuit_inplace(q, diag.circuit);
    auto masks = detail::z_masks(diag.diagonal);
    auto counts = born_sample(q, shots, rng);
    std::vector<EstimatorReport> out;
    for (std::size_t i = 0; i < pairs.size(); i++) {
        SampleStats st;
        for (const auto &[b, c] : counts) {
            st.add(detail::masked_sign(masks[i], diag.diagonal[i].sign(), b), c);
        }
        EstimatorReport r = make_report("otoc[" + pairs[i].first.str() + "," + pairs[i].second.str() + "]", st,
                                        rng.seed());
        r.metadata["left"] = pairs[i].first.str();
        r.metadata["right"] = pairs[i].second.str();
        out.push_back(std::move(r));
    }
    return out;
}

struct ShotPlan {
    std::vector<uint64_t> counts;
    uint64_t total = 0;
};

/// Shots proportional to the weights, rounded by largest remainder, with at
/// least one shot for every group of nonzero weight.
inline ShotPlan allocate_shots(const std::vector<double> &weights, uint64_t total) {
    double wsum = 0;
    std::size_t nonzero = 0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) {
            throw InvalidArgument("allocate_shots: weights must be finite and non-negative");
        }
        wsum += w;
        nonzero += w > 0;
    }
    if (wsum == 0) {
        throw InvalidArgument("allocate_shots: all weights are zero");
    }
    if (total < nonzero) {
        throw InvalidArgument("allocate_shots: fewer shots than nonzero groups");
    }
    const std::size_t g = weights.size();
    std::vector<double> ideal(g);
    ShotPlan plan{std::vector<uint64_t>(g, 0), total};
    uint64_t used = 0;
    for (std::size_t i = 0; i < g; i++) {
        ideal[i] = static_cast<double>(total) * weights[i] / wsum;
        plan.counts[i] = static_cast<uint64_t>(std::floor(ideal[i]));
        if (weights[i] > 0 && plan.counts[i] == 0) {
            plan.counts[i] = 1;
        }
        used += plan.counts[i];
    }
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), 0);
    auto excess = [&](std::size_t i) { return static_cast<double>(plan.counts[i]) - ideal[i]; };
    while (used < total) {
        std::size_t best = g;
        for (std::size_t i = 0; i < g; i++) {
            if (weights[i] > 0 && (best == g || excess(i) < excess(best))) {
                best = i;
            }
        }
        plan.counts[best]++;
        used++;
    }
    while (used > total) {
        std::size_t best = g;
        for (std::size_t i = 0; i < g; i++) {
            if (plan.counts[i] > 1 && (best == g || excess(i) > excess(best))) {
                best = i;
            }
        }
        plan.counts[best]--;
        used--;
    }
    return plan;
}

/// The variance-optimal rule n_i proportional to sqrt(Var_i), for a
/// caller-supplied variance table.
inline ShotPlan allocate_shots_by_variance(const std::vector<double> &variances, uint64_t total) {
    std::vector<double> w;
    for (double v : variances) {
        if (!(v >= 0)) {
            throw InvalidArgument("allocate_shots_by_variance: variances must be non-negative");
        }
        w.push_back(std::sqrt(v));
    }
    return allocate_shots(w, total);
}

using Grouping = std::vector<std::vector<std::size_t>>;

namespace detail {

inline void check_grouping(const OperatorSumSuperop &a, const Grouping &groups) {
    std::vector<int> seen(a.terms().size(), 0);
    for (const auto &g : groups) {
        if (g.empty()) {
            throw InvalidArgument("invalid grouping: empty group");
        }
        for (auto t : g) {
            if (t >= seen.size()) {
                throw InvalidArgument("invalid grouping: term index " + std::to_string(t) + " out of range");
            }
            seen[t]++;
        }
    }
    for (std::size_t t = 0; t < seen.size(); t++) {
        if (seen[t] != 1) {
            throw InvalidArgument("invalid grouping: term " + std::to_string(t) + " appears " +
                                  std::to_string(seen[t]) + " times");
        }
    }
}

inline bool is_identity_term(const SuperopTerm &t) {
    return t.left.is_identity() && t.right.is_identity();
}

}  // namespace detail

/// Sum of |f| per group, the weights of the proportional allocation rule.
inline std::vector<double> group_weights(const OperatorSumSuperop &a, const Grouping &groups) {
    std::vector<double> w;
    for (const auto &g : groups) {
        double s = 0;
        for (auto t : g) {
            s += std::abs(a.terms().at(t).f);
        }
        w.push_back(s);
    }
    return w;
}

/// <A>_O as a sum of group estimates, each group measured in its own common
/// eigenbasis with plan.counts[g] shots.
inline EstimatorReport estimate_superop_grouped(const VectorizedState &s, const OperatorSumSuperop &a,
                                                const Grouping &groups, const ShotPlan &plan, RngStream &rng) {
    if (!a.self_adjoint()) {
        throw NotSelfAdjoint("estimate_superop_grouped needs a self-adjoint superoperator");
    }
    if (s.basis.kind != BasisKind::Computational || s.d() != 2) {
        throw BasisMismatch("estimate_superop_grouped needs a qubit state in the computational basis");
    }
    if (s.n != a.n()) {
        throw SizeMismatch("superoperator and state differ in n");
    }
    detail::check_grouping(a, groups);
    if (plan.counts.size() != groups.size()) {
        throw InvalidArgument("shot plan has " + std::to_string(plan.counts.size()) + " entries for " +
                              std::to_string(groups.size()) + " groups");
    }
    double value = 0, var = 0;
    uint64_t shots = 0;
    EstimatorReport r;
    for (std::size_t gi = 0; gi < groups.size(); gi++) {
        const auto &g = groups[gi];
        std::vector<PauliPair> pairs;
        std::vector<double> f;
        for (auto t : g) {
            pairs.push_back({a.terms()[t].left, a.terms()[t].right});
            f.push_back(a.terms()[t].f.real());
        }
        bool constant = std::all_of(g.begin(), g.end(), [&](std::size_t t) {
            return detail::is_identity_term(a.terms()[t]);
        });
        if (constant) {
            for (double x : f) {
                value += x;
            }
            continue;
        }
        if (plan.counts[gi] == 0) {
            throw InvalidArgument("group " + std::to_string(gi) + " has no shots");
        }
        Diagonalization diag = common_eigenbasis_circuit(pairs);
        QState q = QState::from_vectorized(s);
        apply_circuit_inplace(q, diag.circuit);
        auto masks = detail::z_masks(diag.diagonal);
        RngStream sub = rng.fork(gi);
        auto counts = born_sample(q, plan.counts[gi], sub);
        SampleStats st;
        for (const auto &[b, c] : counts) {
            double sum = 0;
            for (std::size_t i = 0; i < g.size(); i++) {
                sum += f[i] * detail::masked_sign(masks[i], diag.diagonal[i].sign(), b);
            }
            st.add(sum, c);
        }
        value += st.mean();
        var += st.std_error() * st.std_error();
        shots += plan.counts[gi];
        r.metadata["group" + std::to_string(gi)] = format_double(st.mean());
    }
    r.label = "superop_grouped";
    r.value = value;
    r.std_error = std::sqrt(var);
    r.shots = shots;
    r.seed = rng.seed();
    r.metadata["groups"] = std::to_string(groups.size());
    return r;
}

/// Sample-count proxies at unit RMS error for naive term-by-term estimation,
/// commuting-group estimation with weight-proportional shots, and direct
/// sampling in the eigenbasis of A. Identity terms are constants and excluded.
struct ShotCountProxies {
    double naive = 0;
    double comm = 0;
    double full_comm = 0;
};

inline ShotCountProxies shot_count_proxies(const VectorizedState &s, const OperatorSumSuperop &a,
                                           const Grouping &groups) {
    detail::check_grouping(a, groups);
    auto variance = [&](const OperatorSumSuperop &b) {
        double m1 = expectation(b, s, 1);
        double m2 = expectation(b, s, 2);
        return std::max(0.0, m2 - m1 * m1);
    };
    ShotCountProxies out;
    double wtotal = 0, naive_sum = 0, comm_sum = 0;
    OperatorSumSuperop whole(a.n());
    for (const auto &g : groups) {
        OperatorSumSuperop grp(a.n());
        double wg = 0;
        for (auto t : g) {
            const auto &term = a.terms()[t];
            if (detail::is_identity_term(term)) {
                continue;
            }
            OperatorSumSuperop single(a.n());
            single.add(term.f, term.left, term.right);
            double w = std::abs(term.f);
            naive_sum += variance(single) / w;
            grp.add(term.f, term.left, term.right);
            whole.add(term.f, term.left, term.right);
            wg += w;
        }
        if (wg > 0) {
            comm_sum += variance(grp) / wg;
            wtotal += wg;
        }
    }
    out.naive = wtotal * naive_sum;
    out.comm = wtotal * comm_sum;
    out.full_comm = whole.terms().empty() ? 0.0 : variance(whole);
    return out;
}

struct OseResult {
    EstimatorReport purity;
    double entropy = 0;
};

/// Stabilizer purity P^(alpha) = sum_k p_k^alpha from M outer Born samples k_i;
/// each p_{k_i}^{alpha-1} is estimated by the mean over m repetitions of a
/// product of alpha-1 indicator shots 1[fresh sample = k_i].
inline OseResult estimate_ose_shots(const VectorizedState &s, int alpha, uint64_t outer, uint64_t inner,
                                    RngStream &rng) {
    if (alpha < 2) {
        throw InvalidArgument("estimate_ose: alpha must be an integer >= 2");
    }
    if (s.basis.kind != BasisKind::Pauli || s.d() != 2) {
        throw BasisMismatch("estimate_ose needs a qubit state in the Pauli basis");
    }
    if (outer == 0 || inner == 0) {
        throw InvalidArgument("estimate_ose: shot counts must be positive");
    }
    BornSampler sampler(s.amps);
    SampleStats st;
    for (uint64_t i = 0; i < outer; i++) {
        const uint64_t k = sampler.sample(rng);
        uint64_t hits = 0;
        for (uint64_t j = 0; j < inner; j++) {
            bool all = true;
            for (int a = 0; a < alpha - 1; a++) {
                all = (sampler.sample(rng) == k) && all;
            }
            hits += all;
        }
        st.add(static_cast<double>(hits) / static_cast<double>(inner));
    }
    OseResult r;
    r.purity = make_report("ose_purity", st, rng.seed());
    r.purity.shots = outer + outer * inner * static_cast<uint64_t>(alpha - 1);
    r.purity.metadata["alpha"] = std::to_string(alpha);
    r.purity.metadata["outer_samples"] = std::to_string(outer);
    r.purity.metadata["inner_repetitions"] = std::to_string(inner);
    r.purity.metadata["log_base"] = "e";
    const double p = st.mean();
    r.entropy = p > 0 ? std::log(p) / (1.0 - alpha) : std::numeric_limits<double>::infinity();
    return r;
}

struct OseShotCounts {
    uint64_t outer = 0;
    uint64_t total_inner = 0;
    uint64_t per_sample = 0;
};

/// M = ceil(2 ln(4/delta)/eps^2), N = ceil(2(alpha-1) ln(4/delta)/eps^2), m = ceil(N/M).
inline OseShotCounts ose_shot_counts(int alpha, double eps, double delta) {
    if (!(eps > 0) || !(delta > 0 && delta < 1)) {
        throw InvalidArgument("estimate_ose: need eps > 0 and 0 < delta < 1");
    }
    if (alpha < 2) {
        throw InvalidArgument("estimate_ose: alpha must be an integer >= 2");
    }
    const double l = std::log(4.0 / delta) / (eps * eps);
    OseShotCounts c;
    c.outer = static_cast<uint64_t>(std::ceil(2.0 * l));
    c.total_inner = static_cast<uint64_t>(std::ceil(2.0 * (alpha - 1) * l));
    c.per_sample = (c.total_inner + c.outer - 1) / c.outer;
    return c;
}

inline OseResult estimate_ose(const VectorizedState &s, int alpha, double eps, double delta, RngStream &rng) {
    OseShotCounts c = ose_shot_counts(alpha, eps, delta);
    OseResult r = estimate_ose_shots(s, alpha, c.outer, c.per_sample, rng);
    r.purity.metadata["epsilon"] = format_double(eps);
    r.purity.metadata["delta"] = format_double(delta);
    return r;
}

/// Linearized second-Renyi operator entanglement 1 - tr(rho_A^2) by a
/// destructive SWAP test on two copies: every (L, R) qubit of the sites in A is
/// Bell-measured against its partner in the second copy.
inline EstimatorReport estimate_loe2(const VectorizedState &s1, const VectorizedState &s2,
                                     const std::vector<std::size_t> &partition, uint64_t shots, RngStream &rng) {
    if (s1.n != s2.n || s1.basis.kind != s2.basis.kind || s1.d() != 2 || s2.d() != 2) {
        throw SizeMismatch("estimate_loe2: copies differ in n or basis");
    }
    const std::size_t n = s1.n;
    std::vector<bool> in_a(n, false);
    for (auto a : partition) {
        if (a >= n || in_a[a]) {
            throw InvalidArgument("estimate_loe2: partition sites must be distinct and in range");
        }
        in_a[a] = true;
    }
    if (partition.empty() || partition.size() == n) {
        throw InvalidArgument("estimate_loe2: partition must be a nonempty proper subset");
    }
    if (shots == 0) {
        throw InvalidArgument("shots must be at least 1");
    }
    const std::size_t k = 4 * n;
    if (k > kMaxQubits) {
        throw CapExceeded("estimate_loe2: two copies need " + std::to_string(k) + " qubits");
    }
    std::vector<cplx> amps(std::size_t{1} << k);
    const std::size_t half = s2.amps.size();
    for (std::size_t i = 0; i < s1.amps.size(); i++) {
        for (std::size_t j = 0; j < half; j++) {
            amps[i * half + j] = s1.amps[i] * s2.amps[j];
        }
    }
    QState q(k, std::move(amps));
    Circuit bell(k);
    std::vector<std::pair<uint64_t, uint64_t>> bits;
    for (auto a : partition) {
        for (std::size_t side = 0; side < 2; side++) {
            const std::size_t c1 = 2 * a + side, c2 = 2 * n + 2 * a + side;
            bell.append(Gate::named(GateKind::CX, {c1, c2}));
            bell.append(Gate::named(GateKind::H, {c1}));
            bits.push_back({uint64_t{1} << (k - 1 - c1), uint64_t{1} << (k - 1 - c2)});
        }
    }
    apply_circuit_inplace(q, bell);
    auto counts = born_sample(q, shots, rng);
    SampleStats st;
    for (const auto &[b, c] : counts) {
        int v = 1;
        for (const auto &[m1, m2] : bits) {
            if ((b & m1) && (b & m2)) {
                v = -v;
            }
        }
        st.add(v, c);
    }
    EstimatorReport r = make_report("loe2", st, rng.seed());
    r.metadata["purity"] = format_double(st.mean());
    r.value = 1.0 - st.mean();
    std::string part;
    for (auto a : partition) {
        part += (part.empty() ? "" : ",") + std::to_string(a);
    }
    r.metadata["partition"] = part;
    return r;
}

/// <X> on the ancilla (last qubit) of an interferometric state.
inline EstimatorReport estimate_corr_interferometric(const QState &s, uint64_t shots, RngStream &rng) {
    const std::size_t k = s.num_qubits();
    if (k % 2 != 1) {
        throw SizeMismatch("interferometric state must have 2n + 1 qubits");
    }
    if (shots == 0) {
        throw InvalidArgument("shots must be at least 1");
    }
    QState q = s;
    apply_gate(q, Gate::named(GateKind::H, {k - 1}));
    auto counts = born_sample(q, shots, rng);
    SampleStats st;
    for (const auto &[b, c] : counts) {
        st.add((b & 1) ? -1.0 : 1.0, c);
    }
    return make_report("corr", st, rng.seed());
}

/// Per shot: i uniform, |i> -> U_psi^dag V U_phi |i>, measure j.
inline std::vector<std::pair<uint64_t, uint64_t>> nqubit_sample(const Circuit &v, const Circuit &u_phi,
                                                                const Circuit &u_psi, uint64_t shots,
                                                                RngStream &rng) {
    const std::size_t n = v.num_qubits();
    if (u_phi.num_qubits() != n || u_psi.num_qubits() != n) {
        throw SizeMismatch("nqubit_sample: circuits differ in qubit count");
    }
    if (shots == 0) {
        throw InvalidArgument("shots must be at least 1");
    }
    Circuit full(n);
    full.append(u_phi);
    full.barrier();
    full.append(v);
    full.barrier();
    full.append(u_psi.inverse());
    std::unordered_map<uint64_t, BornSampler> cache;
    std::vector<std::pair<uint64_t, uint64_t>> out;
    out.reserve(shots);
    const uint64_t dim = uint64_t{1} << n;
    for (uint64_t s = 0; s < shots; s++) {
        const uint64_t i = rng.below(dim);
        auto it = cache.find(i);
        if (it == cache.end()) {
            QState q = QState::basis_state(n, i);
            apply_circuit_inplace(q, full);
            it = cache.emplace(i, BornSampler(q)).first;
        }
        out.push_back({i, it->second.sample(rng)});
    }
    return out;
}

/// U, then the Pauli gates of O, then U^dag: the circuit of U^dag O U.
inline Circuit heisenberg_operator_circuit(const PauliString &o, const Circuit &u) {
    const std::size_t n = u.num_qubits();
    if (o.n() != n) {
        throw SizeMismatch("operator and circuit differ in qubit count");
    }
    Circuit c(n);
    c.append(u);
    c.barrier();
    for (std::size_t q = 0; q < n; q++) {
        switch (o.at(q)) {
            case 'X':
                c.append(Gate::named(GateKind::X, {q}));
                break;
            case 'Y':
                c.append(Gate::named(GateKind::Y, {q}));
                break;
            case 'Z':
                c.append(Gate::named(GateKind::Z, {q}));
                break;
            default:
                break;
        }
    }
    c.barrier();
    c.append(u.inverse());
    return c;
}

/// OTOCs tr(O(t) P_i O(t) Q_i)/2^n from n-qubit samples. The set must be
/// separable-commuting: {P_i} and {Q_i} each mutually commute.
inline std::vector<EstimatorReport> nqubit_otoc(const PauliString &o, const Circuit &u,
                                                const std::vector<PauliPair> &pairs, uint64_t shots,
                                                RngStream &rng) {
    const std::size_t n = u.num_qubits();
    CommutationClass cls = classify_commuting_set(pairs);
    if (cls.verdict == CommutationVerdict::NotCommuting) {
        throw NotCommuting("pairs " + std::to_string(cls.witness->first) + " and " +
                           std::to_string(cls.witness->second) + " do not commute as superoperators");
    }
    if (cls.verdict == CommutationVerdict::CommutingEntangledEigenbasis) {
        throw EntangledEigenbasis("pairs " + std::to_string(cls.witness->first) + " and " +
                                  std::to_string(cls.witness->second) +
                                  " anticommute on both sides; their common eigenbasis is entangled");
    }
    std::vector<SignedPauli> ps, qs;
    for (const auto &[p, q] : pairs) {
        if (p.n() != n || q.n() != n) {
            throw SizeMismatch("pair size differs from the circuit");
        }
        ps.push_back({p, false});
        qs.push_back({q, false});
    }
    Diagonalization dp = diagonalize_commuting(ps, n);
    Diagonalization dq = diagonalize_commuting(qs, n);
    auto mp = detail::z_masks(dp.diagonal);
    auto mq = detail::z_masks(dq.diagonal);
    // U_phi = C_Q^dag, U_psi = C_P^dag.
    auto samples = nqubit_sample(heisenberg_operator_circuit(o, u), dq.circuit.inverse(), dp.circuit.inverse(),
                                 shots, rng);
    std::vector<EstimatorReport> out;
    for (std::size_t k = 0; k < pairs.size(); k++) {
        SampleStats st;
        for (const auto &[i, j] : samples) {
            st.add(detail::masked_sign(mp[k], dp.diagonal[k].sign(), j) *
                   detail::masked_sign(mq[k], dq.diagonal[k].sign(), i));
        }
        EstimatorReport r = make_report("nqubit_otoc[" + pairs[k].first.str() + "," + pairs[k].second.str() + "]",
                                        st, rng.seed());
        r.metadata["left"] = pairs[k].first.str();
        r.metadata["right"] = pairs[k].second.str();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace opvec

#endif
