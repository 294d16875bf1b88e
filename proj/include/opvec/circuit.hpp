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

#ifndef OPVEC_CIRCUIT_HPP
#define OPVEC_CIRCUIT_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opvec/common.hpp"
#include "opvec/pauli.hpp"

namespace opvec {

enum class GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    SX,
    SXdg,
    RX,
    RY,
    RZ,
    CX,
    CY,
    CZ,
    SWAP,
    /// exp(i angle P) with P laid on the targets.
    PauliRot,
    Unitary,
};

struct GateInfo {
    GateKind kind;
    const char *name;
    int arity;
    bool has_angle;
};

inline const std::vector<GateInfo> &gate_table() {
    static const std::vector<GateInfo> table = {
        {GateKind::X, "x", 1, false},     {GateKind::Y, "y", 1, false},     {GateKind::Z, "z", 1, false},
        {GateKind::H, "h", 1, false},     {GateKind::S, "s", 1, false},     {GateKind::Sdg, "sdg", 1, false},
        {GateKind::T, "t", 1, false},     {GateKind::Tdg, "tdg", 1, false}, {GateKind::SX, "sx", 1, false},
        {GateKind::SXdg, "sxdg", 1, false}, {GateKind::RX, "rx", 1, true},  {GateKind::RY, "ry", 1, true},
        {GateKind::RZ, "rz", 1, true},    {GateKind::CX, "cx", 2, false},   {GateKind::CY, "cy", 2, false},
        {GateKind::CZ, "cz", 2, false},   {GateKind::SWAP, "swap", 2, false},
    };
    return table;
}

inline const GateInfo *gate_info(GateKind k) {
    for (const auto &g : gate_table()) {
        if (g.kind == k) {
            return &g;
        }
    }
    return nullptr;
}

class Gate {
   public:
    GateKind kind = GateKind::X;
    std::vector<std::size_t> targets;
    double angle = 0;
    /// Letters of a PauliRot gate, one per target.
    PauliString pauli;
    /// Matrix of a Unitary gate; targets[0] is the high index bit.
    DenseOperator matrix;

    static Gate named(GateKind kind, std::vector<std::size_t> targets, double angle = 0) {
        const GateInfo *info = gate_info(kind);
        if (info == nullptr) {
            throw InvalidArgument("Gate::named needs a standard gate kind");
        }
        if (static_cast<int>(targets.size()) != info->arity) {
            throw InvalidArgument(std::string("gate ") + info->name + " takes " + std::to_string(info->arity) +
                                  " targets");
        }
        Gate g;
        g.kind = kind;
        g.targets = std::move(targets);
        g.angle = angle;
        g.check_distinct();
        return g;
    }

    static Gate pauli_rotation(const PauliString &p, std::vector<std::size_t> targets, double theta) {
        if (p.n() != targets.size()) {
            throw InvalidArgument("pauli rotation: string length differs from target count");
        }
        Gate g;
        g.kind = GateKind::PauliRot;
        g.pauli = p;
        g.targets = std::move(targets);
        g.angle = theta;
        g.check_distinct();
        return g;
    }

    static Gate unitary(const DenseOperator &m, std::vector<std::size_t> targets, double tol = 1e-10) {
        const long dim = 1L << targets.size();
        if (m.rows() != dim || m.cols() != dim) {
            throw SizeMismatch("unitary gate: matrix dimension does not match targets");
        }
        if ((DenseOperator(m.adjoint() * m) - DenseOperator::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
            throw NotUnitary("unitary gate: matrix is not unitary");
        }
        Gate g;
        g.kind = GateKind::Unitary;
        g.matrix = m;
        g.targets = std::move(targets);
        g.check_distinct();
        return g;
    }

    std::size_t arity() const {
        return targets.size();
    }

    std::string name() const {
        if (kind == GateKind::PauliRot) {
            return "exp_" + pauli.str();
        }
        if (kind == GateKind::Unitary) {
            return "unitary";
        }
        return gate_info(kind)->name;
    }

    DenseOperator to_matrix() const {
        using std::cos;
        using std::sin;
        const cplx i(0, 1);
        const double r = 1.0 / std::sqrt(2.0);
        auto m2 = [](cplx a, cplx b, cplx c, cplx d) {
            DenseOperator m(2, 2);
            m << a, b, c, d;
            return m;
        };
        switch (kind) {
            case GateKind::X:
                return m2(0, 1, 1, 0);
            case GateKind::Y:
                return m2(0, -i, i, 0);
            case GateKind::Z:
                return m2(1, 0, 0, -1);
            case GateKind::H:
                return m2(r, r, r, -r);
            case GateKind::S:
                return m2(1, 0, 0, i);
            case GateKind::Sdg:
                return m2(1, 0, 0, -i);
            case GateKind::T:
                return m2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4));
            case GateKind::Tdg:
                return m2(1, 0, 0, std::polar(1.0, -std::numbers::pi / 4));
            case GateKind::SX:
                return m2(cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5));
            case GateKind::SXdg:
                return m2(cplx(0.5, -0.5), cplx(0.5, 0.5), cplx(0.5, 0.5), cplx(0.5, -0.5));
            case GateKind::RX:
                return m2(cos(angle / 2), -i * sin(angle / 2), -i * sin(angle / 2), cos(angle / 2));
            case GateKind::RY:
                return m2(cos(angle / 2), -sin(angle / 2), sin(angle / 2), cos(angle / 2));
            case GateKind::RZ:
                return m2(std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2));
            case GateKind::CX:
            case GateKind::CY:
            case GateKind::CZ: {
                DenseOperator m = DenseOperator::Identity(4, 4);
                DenseOperator t = kind == GateKind::CX   ? m2(0, 1, 1, 0)
                                  : kind == GateKind::CY ? m2(0, -i, i, 0)
                                                         : m2(1, 0, 0, -1);
                m.block(2, 2, 2, 2) = t;
                return m;
            }
            case GateKind::SWAP: {
                DenseOperator m = DenseOperator::Zero(4, 4);
                m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
                return m;
            }
            case GateKind::PauliRot: {
                const long dim = 1L << pauli.n();
                return DenseOperator(cos(angle) * DenseOperator::Identity(dim, dim) + i * sin(angle) * to_dense(pauli));
            }
            case GateKind::Unitary:
                return matrix;
        }
        throw InvalidArgument("unknown gate kind");
    }

    Gate dagger() const {
        Gate g = *this;
        switch (kind) {
            case GateKind::S:
                g.kind = GateKind::Sdg;
                break;
            case GateKind::Sdg:
                g.kind = GateKind::S;
                break;
            case GateKind::T:
                g.kind = GateKind::Tdg;
                break;
            case GateKind::Tdg:
                g.kind = GateKind::T;
                break;
            case GateKind::SX:
                g.kind = GateKind::SXdg;
                break;
            case GateKind::SXdg:
                g.kind = GateKind::SX;
                break;
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::PauliRot:
                g.angle = -angle;
                break;
            case GateKind::Unitary:
                g.matrix = matrix.adjoint();
                break;
            default:
                break;
        }
        return g;
    }

    /// Entrywise complex conjugate U*.
    Gate conjugate() const {
        Gate g = *this;
        switch (kind) {
            case GateKind::S:
            case GateKind::Sdg:
            case GateKind::T:
            case GateKind::Tdg:
            case GateKind::SX:
            case GateKind::SXdg:
                return dagger();
            case GateKind::RX:
            case GateKind::RZ:
                g.angle = -angle;
                return g;
            case GateKind::PauliRot:
                g.angle = -angle * pauli.transpose_sign();
                return g;
            case GateKind::Y:
            case GateKind::CY:
            case GateKind::Unitary:
                return as_unitary(to_matrix().conjugate());
            default:
                return g;
        }
    }

    /// Transpose Uᵀ.
    Gate transpose() const {
        Gate g = *this;
        switch (kind) {
            case GateKind::RY:
                g.angle = -angle;
                return g;
            case GateKind::PauliRot:
                g.angle = angle * pauli.transpose_sign();
                return g;
            case GateKind::Y:
            case GateKind::CY:
            case GateKind::Unitary:
                return as_unitary(to_matrix().transpose());
            default:
                return g;
        }
    }

    Gate remapped(const std::vector<std::size_t> &map) const {
        Gate g = *this;
        for (auto &t : g.targets) {
            if (t >= map.size()) {
                throw InvalidArgument("gate remap: target outside the map");
            }
            t = map[t];
        }
        g.check_distinct();
        return g;
    }

    bool is_clifford() const {
        switch (kind) {
            case GateKind::X:
            case GateKind::Y:
            case GateKind::Z:
            case GateKind::H:
            case GateKind::S:
            case GateKind::Sdg:
            case GateKind::SX:
            case GateKind::SXdg:
            case GateKind::CX:
            case GateKind::CY:
            case GateKind::CZ:
            case GateKind::SWAP:
                return true;
            default:
                return false;
        }
    }

    std::string to_text() const {
        if (kind == GateKind::Unitary) {
            throw InvalidArgument("dense unitary gates have no text form");
        }
        std::ostringstream os;
        os.precision(17);
        os << name();
        for (auto t : targets) {
            os << " " << t;
        }
        if (kind == GateKind::PauliRot || gate_info(kind)->has_angle) {
            os << " " << angle;
        }
        return os.str();
    }

    static Gate from_text(const std::string &line) {
        std::istringstream in(line);
        std::string name;
        in >> name;
        std::vector<std::string> args;
        std::string a;
        while (in >> a) {
            args.push_back(a);
        }
        auto to_index = [&](const std::string &s) {
            std::size_t used = 0;
            long v = -1;
            try {
                v = std::stol(s, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != s.size() || v < 0) {
                throw ParseError("bad qubit index '" + s + "'");
            }
            return static_cast<std::size_t>(v);
        };
        auto to_angle = [&](const std::string &s) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != s.size()) {
                throw ParseError("bad angle '" + s + "'");
            }
            return v;
        };
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (lower.rfind("exp_", 0) == 0) {
            PauliString p = PauliString::from_string(name.substr(4));
            if (args.size() != p.n() + 1) {
                throw ParseError("gate " + name + " expects " + std::to_string(p.n()) + " targets and an angle");
            }
            std::vector<std::size_t> ts;
            for (std::size_t i = 0; i < p.n(); i++) {
                ts.push_back(to_index(args[i]));
            }
            return pauli_rotation(p, ts, to_angle(args.back()));
        }
        for (const auto &g : gate_table()) {
            if (lower == g.name) {
                std::size_t want = static_cast<std::size_t>(g.arity) + (g.has_angle ? 1 : 0);
                if (args.size() != want) {
                    throw ParseError("gate " + name + " expects " + std::to_string(want) + " arguments");
                }
                std::vector<std::size_t> ts;
                for (int i = 0; i < g.arity; i++) {
                    ts.push_back(to_index(args[static_cast<std::size_t>(i)]));
                }
                return named(g.kind, ts, g.has_angle ? to_angle(args.back()) : 0.0);
            }
        }
        throw ParseError("unknown gate '" + name + "'");
    }

   private:
    Gate as_unitary(const DenseOperator &m) const {
        Gate g;
        g.kind = GateKind::Unitary;
        g.matrix = m;
        g.targets = targets;
        return g;
    }

    void check_distinct() const {
        for (std::size_t i = 0; i < targets.size(); i++) {
            for (std::size_t j = i + 1; j < targets.size(); j++) {
                if (targets[i] == targets[j]) {
                    throw InvalidArgument("gate targets must be distinct");
                }
            }
        }
    }
};

/// Gates on k qubits arranged in layers with disjoint targets.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(std::size_t k) : k_(k), frontier_(k, 0) {
    }

    std::size_t num_qubits() const {
        return k_;
    }
    const std::vector<std::vector<Gate>> &layers() const {
        return layers_;
    }
    std::size_t depth() const {
        return layers_.size();
    }

    std::size_t gate_count() const {
        std::size_t c = 0;
        for (const auto &l : layers_) {
            c += l.size();
        }
        return c;
    }

    /// Places g in the earliest layer after every earlier gate sharing a qubit.
    void append(const Gate &g) {
        std::size_t layer = 0;
        for (auto t : g.targets) {
            if (t >= k_) {
                throw InvalidArgument("gate target " + std::to_string(t) + " out of range for " +
                                      std::to_string(k_) + " qubits");
            }
            layer = std::max(layer, frontier_[t]);
        }
        if (layer == layers_.size()) {
            layers_.emplace_back();
        }
        layers_[layer].push_back(g);
        for (auto t : g.targets) {
            frontier_[t] = layer + 1;
        }
    }

    /// Starts a new layer at the end; later appends cannot move before it.
    void barrier() {
        std::fill(frontier_.begin(), frontier_.end(), layers_.size());
    }

    void append(const Circuit &c) {
        if (c.k_ != k_) {
            throw SizeMismatch("appending a circuit on a different qubit count");
        }
        for (const auto &l : c.layers_) {
            for (const auto &g : l) {
                append(g);
            }
        }
    }

    std::vector<Gate> gates() const {
        std::vector<Gate> out;
        for (const auto &l : layers_) {
            out.insert(out.end(), l.begin(), l.end());
        }
        return out;
    }

    Circuit inverse() const {
        return map_layers(true, [](const Gate &g) { return g.dagger(); });
    }
    Circuit conjugate() const {
        return map_layers(false, [](const Gate &g) { return g.conjugate(); });
    }
    Circuit transpose() const {
        return map_layers(true, [](const Gate &g) { return g.transpose(); });
    }

    /// Relabels qubit q as map[q] on a register of new_k qubits, keeping layers.
    Circuit remapped(std::size_t new_k, const std::vector<std::size_t> &map) const {
        Circuit c(new_k);
        for (const auto &l : layers_) {
            std::vector<Gate> nl;
            for (const auto &g : l) {
                nl.push_back(g.remapped(map));
            }
            c.push_layer(std::move(nl));
        }
        return c;
    }

    /// Layer-wise union of two circuits acting on disjoint qubits.
    static Circuit parallel(const Circuit &a, const Circuit &b) {
        if (a.k_ != b.k_) {
            throw SizeMismatch("parallel composition of circuits on different registers");
        }
        Circuit c(a.k_);
        std::size_t d = std::max(a.depth(), b.depth());
        for (std::size_t i = 0; i < d; i++) {
            std::vector<Gate> l;
            if (i < a.depth()) {
                l.insert(l.end(), a.layers_[i].begin(), a.layers_[i].end());
            }
            if (i < b.depth()) {
                l.insert(l.end(), b.layers_[i].begin(), b.layers_[i].end());
            }
            c.push_layer(std::move(l));
        }
        return c;
    }

    /// Appends an explicit layer. Targets within it must be disjoint.
    void push_layer(std::vector<Gate> layer) {
        std::vector<bool> used(k_, false);
        for (const auto &g : layer) {
            for (auto t : g.targets) {
                if (t >= k_) {
                    throw InvalidArgument("gate target out of range");
                }
                if (used[t]) {
                    throw InvalidArgument("layer targets overlap on qubit " + std::to_string(t));
                }
                used[t] = true;
            }
        }
        layers_.push_back(std::move(layer));
        std::fill(frontier_.begin(), frontier_.end(), layers_.size());
    }

    std::string to_text() const {
        std::string s;
        for (const auto &l : layers_) {
            for (const auto &g : l) {
                s += g.to_text();
                s += "\n";
            }
        }
        return s;
    }

    /// One gate per line, `<name> <targets...> [angle]`. The register size is
    /// `k` if given, else one more than the largest target.
    static Circuit parse(const std::string &text, std::optional<std::size_t> k = std::nullopt) {
        std::istringstream in(text);
        std::string line;
        std::vector<Gate> gs;
        std::size_t max_t = 0;
        int lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            try {
                gs.push_back(Gate::from_text(line));
            } catch (const Error &e) {
                throw ParseError("circuit line " + std::to_string(lineno) + ": " + e.what());
            }
            for (auto t : gs.back().targets) {
                max_t = std::max(max_t, t + 1);
            }
        }
        std::size_t kk = k.value_or(max_t);
        if (max_t > kk) {
            throw ParseError("circuit uses qubit " + std::to_string(max_t - 1) + " but the register has " +
                             std::to_string(kk));
        }
        Circuit c(kk);
        for (const auto &g : gs) {
            c.append(g);
        }
        return c;
    }

   private:
    template <typename F>
    Circuit map_layers(bool reverse, F &&f) const {
        Circuit c(k_);
        std::vector<std::vector<Gate>> ls = layers_;
        if (reverse) {
            std::reverse(ls.begin(), ls.end());
        }
        for (const auto &l : ls) {
            std::vector<Gate> nl;
            for (const auto &g : l) {
                nl.push_back(f(g));
            }
            c.push_layer(std::move(nl));
        }
        return c;
    }

    std::size_t k_ = 0;
    std::vector<std::vector<Gate>> layers_;
    std::vector<std::size_t> frontier_;
};

}  // namespace opvec

#endif
