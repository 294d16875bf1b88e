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

#ifndef OPVEC_LATTICE2D_HPP
#define OPVEC_LATTICE2D_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opvec/circuit.hpp"
#include "opvec/pauli.hpp"

namespace opvec::lattice2d {

struct GridPos {
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const GridPos &) const = default;
};

/// A rows x cols lattice embedded on a rows x 2cols device grid. Site (r, c)
/// occupies the horizontal capsule of device columns 2c and 2c+1. Capsules are
/// mirrored in alternate columns, so that neighbouring capsules face each
/// other with the same copy: R-R across an even-odd boundary and L-L across an
/// odd-even one.
struct GridLayout {
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// placement[i] = (position of i_L, position of i_R).
    std::vector<std::pair<GridPos, GridPos>> placement;

    std::size_t num_sites() const {
        return rows * cols;
    }
    std::size_t num_device_qubits() const {
        return 2 * rows * cols;
    }
    std::size_t site_index(std::size_t r, std::size_t c) const {
        return r * cols + c;
    }
    std::pair<std::size_t, std::size_t> site_coords(std::size_t i) const {
        return {i / cols, i % cols};
    }
    std::size_t device_index(const GridPos &p) const {
        return p.row * 2 * cols + p.col;
    }
    GridPos device_pos(std::size_t d) const {
        return {d / (2 * cols), d % (2 * cols)};
    }
    /// Device index of the logical doubled-space qubit q (L of site i is 2i, R is 2i+1).
    std::size_t device_of(std::size_t q) const {
        const auto &pl = placement.at(q / 2);
        return device_index(q % 2 == 0 ? pl.first : pl.second);
    }
    /// perm[q] = device index of logical qubit q.
    std::vector<std::size_t> permutation() const {
        std::vector<std::size_t> p(num_device_qubits());
        for (std::size_t q = 0; q < p.size(); q++) {
            p[q] = device_of(q);
        }
        return p;
    }
    /// The layout after a SWAP inside every capsule.
    GridLayout swapped() const {
        GridLayout g = *this;
        for (auto &pl : g.placement) {
            std::swap(pl.first, pl.second);
        }
        return g;
    }
};

inline std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

inline bool grid_adjacent(const GridPos &a, const GridPos &b) {
    auto diff = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
    return (a.row == b.row && diff(a.col, b.col) == 1) || (a.col == b.col && diff(a.row, b.row) == 1);
}

inline GridLayout embed(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("embed: rows and cols must be at least 1");
    }
    GridLayout g{rows, cols, {}};
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            GridPos left{r, 2 * c}, right{r, 2 * c + 1};
            if (c % 2 == 1) {
                std::swap(left, right);
            }
            g.placement.push_back({left, right});
        }
    }
    return g;
}

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    bool operator==(const Edge &) const = default;
};

/// Nearest-neighbour edges: horizontal ones row by row, then vertical ones.
inline std::vector<Edge> lattice_edges(std::size_t rows, std::size_t cols) {
    std::vector<Edge> e;
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c + 1 < cols; c++) {
            e.push_back({r * cols + c, r * cols + c + 1});
        }
    }
    for (std::size_t r = 0; r + 1 < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            e.push_back({r * cols + c, (r + 1) * cols + c});
        }
    }
    return e;
}

/// H = hx sum X + hz sum Z - J sum ZZ, with terms in that block order.
inline PauliSum lattice_hamiltonian(std::size_t rows, std::size_t cols, double hx, double hz, double j) {
    const std::size_t n = rows * cols;
    PauliSum h(n);
    for (std::size_t i = 0; i < n; i++) {
        h.add(hx, PauliString::single(n, i, 'X'));
    }
    for (std::size_t i = 0; i < n; i++) {
        h.add(hz, PauliString::single(n, i, 'Z'));
    }
    for (const auto &e : lattice_edges(rows, cols)) {
        PauliString p(n);
        p.set(e.a, 'Z');
        p.set(e.b, 'Z');
        h.add(-j, p);
    }
    return h;
}

enum class Copy { L, R };

enum class OpKind { Field, Edge, Swap };

struct ScheduledGate {
    OpKind kind = OpKind::Field;
    /// Device-level gate; targets are device indices at execution time.
    Gate gate;
    /// Lattice sites the gate implements (one for fields and swaps, two for edges).
    std::vector<std::size_t> sites;
    Copy copy = Copy::L;
};

struct ScheduleLayer {
    std::string name;
    std::vector<ScheduledGate> gates;
};

struct Schedule {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<ScheduleLayer> layers;

    /// Layers containing at least one two-qubit gate.
    std::size_t entangling_depth() const {
        std::size_t d = 0;
        for (const auto &l : layers) {
            for (const auto &g : l.gates) {
                if (g.gate.targets.size() == 2) {
                    d++;
                    break;
                }
            }
        }
        return d;
    }

    Schedule then(const Schedule &next) const {
        if (next.rows != rows || next.cols != cols) {
            throw SizeMismatch("schedules are for different lattices");
        }
        Schedule s = *this;
        s.layers.insert(s.layers.end(), next.layers.begin(), next.layers.end());
        return s;
    }
};

/// One first-order Trotter step of the super-Hamiltonian for the mixed-field
/// Ising model, starting from `layout`'s placement. Each term c P of H becomes
/// exp(+i c dt P) on the L copy and exp(-i c dt P) on the R copy. Entangling
/// layers: vertical edges (L on even rows, R on odd rows), the horizontal edges
/// already adjacent, a SWAP in every capsule, the remaining vertical edges, the
/// remaining horizontal edges.
inline Schedule trotter_step_schedule(double hx, double hz, double j, double dt, const GridLayout &layout) {
    const std::size_t n = layout.num_sites();
    if (layout.placement.size() != n) {
        throw InvalidArgument("trotter_step_schedule: layout placement is incomplete");
    }
    Schedule s{layout.rows, layout.cols, {}};
    GridLayout cur = layout;
    auto pos = [&](std::size_t site, Copy c) {
        return cur.device_index(c == Copy::L ? cur.placement[site].first : cur.placement[site].second);
    };
    auto sign = [](Copy c) { return c == Copy::L ? 1.0 : -1.0; };
    auto field_layer = [&](const char *name, char p, double coef) {
        ScheduleLayer l{name, {}};
        if (coef == 0) {
            return;
        }
        for (std::size_t i = 0; i < n; i++) {
            for (Copy c : {Copy::L, Copy::R}) {
                l.gates.push_back({OpKind::Field,
                                   Gate::pauli_rotation(PauliString::single(1, 0, p), {pos(i, c)}, sign(c) * coef * dt),
                                   {i},
                                   c});
            }
        }
        s.layers.push_back(std::move(l));
    };
    field_layer("field_x", 'X', hx);
    field_layer("field_z", 'Z', hz);
    if (j == 0) {
        return s;
    }
    const PauliString zz = PauliString::from_string("ZZ");
    auto edge_gate = [&](const Edge &e, Copy c) {
        return ScheduledGate{OpKind::Edge, Gate::pauli_rotation(zz, {pos(e.a, c), pos(e.b, c)}, sign(c) * (-j) * dt),
                             {e.a, e.b}, c};
    };
    std::vector<Edge> horizontal, vertical;
    for (const auto &e : lattice_edges(layout.rows, layout.cols)) {
        (layout.site_coords(e.a).first == layout.site_coords(e.b).first ? horizontal : vertical).push_back(e);
    }
    auto vertical_layer = [&](const char *name, std::size_t parity_l) {
        ScheduleLayer l{name, {}};
        for (const auto &e : vertical) {
            const std::size_t r = layout.site_coords(e.a).first;
            l.gates.push_back(edge_gate(e, r % 2 == parity_l ? Copy::L : Copy::R));
        }
        return l;
    };
    std::vector<std::pair<Edge, Copy>> pending;
    ScheduleLayer h1{"horizontal_a", {}};
    for (const auto &e : horizontal) {
        for (Copy c : {Copy::L, Copy::R}) {
            if (grid_adjacent(cur.device_pos(pos(e.a, c)), cur.device_pos(pos(e.b, c)))) {
                h1.gates.push_back(edge_gate(e, c));
            } else {
                pending.push_back({e, c});
            }
        }
    }
    s.layers.push_back(vertical_layer("vertical_a", 0));
    s.layers.push_back(std::move(h1));
    ScheduleLayer sw{"swap", {}};
    for (std::size_t i = 0; i < n; i++) {
        sw.gates.push_back({OpKind::Swap, Gate::named(GateKind::SWAP, {pos(i, Copy::L), pos(i, Copy::R)}), {i}, Copy::L});
    }
    s.layers.push_back(std::move(sw));
    cur = cur.swapped();
    s.layers.push_back(vertical_layer("vertical_b", 1));
    ScheduleLayer h2{"horizontal_b", {}};
    for (const auto &[e, c] : pending) {
        h2.gates.push_back(edge_gate(e, c));
    }
    s.layers.push_back(std::move(h2));
    std::erase_if(s.layers, [](const ScheduleLayer &l) { return l.gates.empty(); });
    return s;
}

struct ValidationReport {
    std::vector<std::string> violations;
    std::size_t entangling_depth = 0;
    std::size_t edge_gates = 0;
    std::size_t edge_gates_l = 0;
    std::size_t edge_gates_r = 0;
    std::size_t swap_gates = 0;
    std::size_t field_gates = 0;
    /// Layout after replaying every SWAP.
    GridLayout final_layout;
    bool identity_permutation = false;

    bool ok() const {
        return violations.empty();
    }
};

/// Replays the schedule, tracking SWAPs. Checks per-layer disjointness, grid
/// adjacency of every two-qubit gate, that every gate lands on the current
/// position of the sites it claims, and that every lattice edge appears once
/// per step on each copy with opposite angles.
inline ValidationReport validate(const Schedule &s, const GridLayout &layout) {
    ValidationReport rep;
    GridLayout cur = layout;
    const std::size_t nd = layout.num_device_qubits();
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> edge_angles;
    auto where = [](std::size_t li, const std::string &name) {
        return "layer " + std::to_string(li) + " (" + name + "): ";
    };
    for (std::size_t li = 0; li < s.layers.size(); li++) {
        const auto &layer = s.layers[li];
        std::set<std::size_t> used;
        bool entangling = false;
        std::vector<std::size_t> swapped_sites;
        for (const auto &g : layer.gates) {
            for (auto t : g.gate.targets) {
                if (t >= nd) {
                    rep.violations.push_back(where(li, layer.name) + "target " + std::to_string(t) + " out of range");
                    continue;
                }
                if (!used.insert(t).second) {
                    rep.violations.push_back(where(li, layer.name) + "qubit " + std::to_string(t) + " used twice");
                }
            }
            if (g.gate.targets.size() == 2) {
                entangling = true;
                const auto a = g.gate.targets[0], b = g.gate.targets[1];
                if (a < nd && b < nd && !grid_adjacent(cur.device_pos(a), cur.device_pos(b))) {
                    rep.violations.push_back(where(li, layer.name) + "gate on non-adjacent qubits " +
                                             std::to_string(a) + " and " + std::to_string(b));
                }
            }
            auto at = [&](std::size_t site, Copy c) {
                const auto &pl = cur.placement.at(site);
                return cur.device_index(c == Copy::L ? pl.first : pl.second);
            };
            switch (g.kind) {
                case OpKind::Field:
                    rep.field_gates++;
                    if (g.sites.size() != 1 || g.gate.targets.size() != 1 || at(g.sites[0], g.copy) != g.gate.targets[0]) {
                        rep.violations.push_back(where(li, layer.name) + "field gate is not on its site's qubit");
                    }
                    break;
                case OpKind::Edge: {
                    rep.edge_gates++;
                    (g.copy == Copy::L ? rep.edge_gates_l : rep.edge_gates_r)++;
                    if (g.sites.size() != 2 || g.gate.targets.size() != 2 || at(g.sites[0], g.copy) != g.gate.targets[0] ||
                        at(g.sites[1], g.copy) != g.gate.targets[1]) {
                        rep.violations.push_back(where(li, layer.name) + "edge gate is not on its sites' " +
                                                 (g.copy == Copy::L ? "L" : "R") + " qubits");
                        break;
                    }
                    auto key = edge_key(g.sites[0], g.sites[1]);
                    auto &slot = edge_angles[key];
                    (g.copy == Copy::L ? slot.first : slot.second).push_back(g.gate.angle);
                    break;
                }
                case OpKind::Swap:
                    rep.swap_gates++;
                    if (g.sites.size() != 1 || g.gate.targets.size() != 2 ||
                        edge_key(g.gate.targets[0], g.gate.targets[1]) !=
                            edge_key(at(g.sites[0], Copy::L), at(g.sites[0], Copy::R))) {
                        rep.violations.push_back(where(li, layer.name) + "swap is not inside a capsule");
                    } else {
                        swapped_sites.push_back(g.sites[0]);
                    }
                    break;
            }
        }
        for (auto i : swapped_sites) {
            std::swap(cur.placement[i].first, cur.placement[i].second);
        }
        rep.entangling_depth += entangling;
    }
    const auto edges = lattice_edges(layout.rows, layout.cols);
    for (const auto &[key, ang] : edge_angles) {
        bool known = false;
        for (const auto &e : edges) {
            known = known || (edge_key(e.a, e.b) == key);
        }
        if (!known) {
            rep.violations.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                     ") is not a lattice edge");
            continue;
        }
        if (ang.first.size() != ang.second.size()) {
            rep.violations.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                     ") has unpaired L/R gates");
            continue;
        }
        for (std::size_t k = 0; k < ang.first.size(); k++) {
            if (std::abs(ang.first[k] + ang.second[k]) > 1e-12) {
                rep.violations.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                         ") has L/R angles that are not opposite");
            }
        }
    }
    if (rep.edge_gates > 0) {
        std::size_t per = edge_angles.empty() ? 0 : edge_angles.begin()->second.first.size();
        for (const auto &e : edges) {
            auto it = edge_angles.find(edge_key(e.a, e.b));
            if (it == edge_angles.end() || it->second.first.size() != per) {
                rep.violations.push_back("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                         ") is missing or repeated");
            }
        }
    }
    rep.final_layout = cur;
    rep.identity_permutation = cur.placement == layout.placement;
    return rep;
}

/// Device-level circuit on 2 rows cols qubits, one circuit layer per schedule layer.
inline Circuit schedule_to_circuit(const Schedule &s, const GridLayout &layout) {
    Circuit c(layout.num_device_qubits());
    for (const auto &l : s.layers) {
        std::vector<Gate> gates;
        for (const auto &g : l.gates) {
            gates.push_back(g.gate);
        }
        c.push_layer(std::move(gates));
    }
    return c;
}

/// The layout in effect after `steps` Trotter steps starting from `layout`.
inline GridLayout layout_after(const GridLayout &layout, const Schedule &step, std::size_t steps) {
    GridLayout cur = layout;
    for (std::size_t k = 0; k < steps; k++) {
        for (const auto &l : step.layers) {
            if (l.name == "swap") {
                cur = cur.swapped();
            }
        }
    }
    return cur;
}

/// `steps` consecutive Trotter steps, each compiled from the layout left by the previous one.
inline Schedule trotter_schedule(double hx, double hz, double j, double dt, const GridLayout &layout,
                                 std::size_t steps) {
    Schedule s{layout.rows, layout.cols, {}};
    GridLayout cur = layout;
    for (std::size_t k = 0; k < steps; k++) {
        Schedule step = trotter_step_schedule(hx, hz, j, dt, cur);
        s = s.then(step);
        cur = layout_after(cur, step, 1);
    }
    return s;
}

}  // namespace opvec::lattice2d

#endif
