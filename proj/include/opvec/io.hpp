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

#ifndef OPVEC_IO_HPP
#define OPVEC_IO_HPP

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "opvec/estimators.hpp"
#include "opvec/lattice2d.hpp"

namespace opvec::io {

using nlohmann::json;

inline json report_to_json(const EstimatorReport &r) {
    json j = json::object();
    j["label"] = r.label;
    j["value"] = r.value;
    j["stderr"] = r.std_error;
    j["shots"] = r.shots;
    j["seed"] = r.seed;
    j["params"] = json::object();
    for (const auto &[k, v] : r.metadata) {
        j["params"][k] = v;
    }
    return j;
}

inline std::string dist_to_csv(const EmpiricalPauliDist &d) {
    std::ostringstream out;
    out << "pauli_string,count\n";
    for (const auto &[idx, c] : d.counts) {
        out << d.string_at(idx).str() << "," << c << "\n";
    }
    return out.str();
}

inline json schedule_to_json(const lattice2d::Schedule &s) {
    json j = json::object();
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    j["entangling_depth"] = s.entangling_depth();
    j["layers"] = json::array();
    for (const auto &l : s.layers) {
        json layer = json::object();
        layer["name"] = l.name;
        layer["gates"] = json::array();
        for (const auto &g : l.gates) {
            json gj = json::object();
            gj["gate"] = g.gate.kind == GateKind::PauliRot ? "exp_" + g.gate.pauli.str() : g.gate.name();
            gj["targets"] = g.gate.targets;
            gj["angle"] = g.gate.angle;
            gj["sites"] = g.sites;
            if (g.kind != lattice2d::OpKind::Swap) {
                gj["copy"] = g.copy == lattice2d::Copy::L ? "L" : "R";
            }
            layer["gates"].push_back(gj);
        }
        j["layers"].push_back(layer);
    }
    return j;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw Error("write failed for '" + path + "'");
    }
}

}  // namespace opvec::io

#endif
