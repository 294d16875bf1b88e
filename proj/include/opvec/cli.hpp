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

#ifndef OPVEC_CLI_HPP
#define OPVEC_CLI_HPP

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "opvec/estimators.hpp"
#include "opvec/io.hpp"
#include "opvec/lattice2d.hpp"
#include "opvec/oracle.hpp"
#include "opvec/simulator.hpp"
#include "opvec/superop.hpp"

namespace opvec::cli {

using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kParse = 3,
    kCap = 4,
    kNonCommuting = 5,
    kInvalidConfig = 6,
};

class ConfigError : public Error {
   public:
    explicit ConfigError(std::vector<std::string> errors) : Error(join(errors)), errors_(std::move(errors)) {
    }
    const std::vector<std::string> &errors() const {
        return errors_;
    }

   private:
    static std::string join(const std::vector<std::string> &e) {
        std::string s;
        for (const auto &x : e) {
            s += (s.empty() ? "" : "; ") + x;
        }
        return s;
    }
    std::vector<std::string> errors_;
};

inline const std::vector<std::string> &task_names() {
    static const std::vector<std::string> names = {"evolve", "sample", "otoc",    "superop", "ose",
                                                   "loe",    "corr",   "choi2pc", "nqubit",  "compile2d"};
    return names;
}

struct ExperimentConfig {
    std::string task;
    std::string operator_text;
    std::string operator2_text;
    std::string hamiltonian_text;
    std::string circuit_text;
    std::string circuit2_text;
    std::string superop_text;
    double t = 0;
    double t2 = 0;
    uint64_t steps = 20;
    uint64_t shots = 10000;
    uint64_t seed = 0;
    int alpha = 2;
    double epsilon = 0.1;
    double delta = 0.05;
    std::vector<std::size_t> partition;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::optional<Grouping> groups;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double hx = 1.0;
    double hz = 0.5;
    double j = 1.0;
    double dt = 0.1;
    bool with_oracle = false;
    /// Every resolved field, defaults included.
    json normalized;
};

struct ValidationResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;
};

namespace detail {

class Reader {
   public:
    Reader(const json &j, std::vector<std::string> &errors) : j_(j), errors_(errors) {
    }

    bool has(const char *key) const {
        return j_.contains(key);
    }

    std::optional<double> number(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        if (!j_[key].is_number()) {
            errors_.push_back(std::string(key) + ": expected a number");
            return std::nullopt;
        }
        return j_[key].get<double>();
    }

    std::optional<uint64_t> count(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        if (!j_[key].is_number_integer() || j_[key].get<long long>() < 0) {
            errors_.push_back(std::string(key) + ": expected a non-negative integer");
            return std::nullopt;
        }
        return j_[key].get<uint64_t>();
    }

    std::optional<std::string> string(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        if (!j_[key].is_string()) {
            errors_.push_back(std::string(key) + ": expected a string");
            return std::nullopt;
        }
        return j_[key].get<std::string>();
    }

   private:
    const json &j_;
    std::vector<std::string> &errors_;
};

/// Inline text or the contents of `<key>_file`, resolved against base_dir.
inline std::string text_or_file(Reader &r, const char *key, const std::string &base_dir,
                                std::vector<std::string> &errors) {
    const std::string fkey = std::string(key) + "_file";
    auto inline_text = r.string(key);
    auto file = r.string(fkey.c_str());
    if (inline_text && file) {
        errors.push_back(std::string(key) + ": give either '" + key + "' or '" + fkey + "', not both");
        return "";
    }
    if (file) {
        std::filesystem::path p(*file);
        if (p.is_relative()) {
            p = std::filesystem::path(base_dir) / p;
        }
        try {
            return io::read_file(p.string());
        } catch (const Error &e) {
            errors.push_back(fkey + ": " + e.what());
            return "";
        }
    }
    return inline_text.value_or("");
}

}  // namespace detail

/// Resolves defaults and checks types, ranges and per-task required fields.
/// All problems are collected; nothing stops at the first one.
inline ValidationResult validate_config(const json &j, const std::string &task_arg, const std::string &base_dir) {
    ValidationResult res;
    auto &errors = res.errors;
    if (!j.is_object()) {
        errors.push_back("config must be a JSON object");
        return res;
    }
    static const std::set<std::string> known = {
        "task",       "operator",        "operator_file", "operator2", "operator2_file", "hamiltonian",
        "hamiltonian_file", "circuit",   "circuit_file",  "circuit2",  "circuit2_file",  "superop",
        "superop_file", "t",             "t2",            "steps",     "shots",          "seed",
        "alpha",      "epsilon",         "delta",         "partition", "pairs",          "groups",
        "rows",       "cols",            "hx",            "hz",        "J",              "dt"};
    for (const auto &[k, v] : j.items()) {
        if (!known.count(k)) {
            errors.push_back("unknown key '" + k + "'");
        }
    }
    detail::Reader r(j, errors);
    ExperimentConfig c;
    auto task = r.string("task");
    if (!task_arg.empty() && task_arg != "validate") {
        if (task && *task != task_arg) {
            errors.push_back("task: config says '" + *task + "' but '" + task_arg + "' was requested");
        }
        c.task = task_arg;
    } else if (task) {
        c.task = *task;
    } else {
        errors.push_back("task: missing");
    }
    if (!c.task.empty() &&
        std::find(task_names().begin(), task_names().end(), c.task) == task_names().end()) {
        errors.push_back("task: unknown task '" + c.task + "'");
    }
    c.operator_text = detail::text_or_file(r, "operator", base_dir, errors);
    c.operator2_text = detail::text_or_file(r, "operator2", base_dir, errors);
    c.hamiltonian_text = detail::text_or_file(r, "hamiltonian", base_dir, errors);
    c.circuit_text = detail::text_or_file(r, "circuit", base_dir, errors);
    c.circuit2_text = detail::text_or_file(r, "circuit2", base_dir, errors);
    c.superop_text = detail::text_or_file(r, "superop", base_dir, errors);
    if (!c.hamiltonian_text.empty() && !c.circuit_text.empty()) {
        errors.push_back("hamiltonian and circuit are mutually exclusive");
    }
    c.t = r.number("t").value_or(c.t);
    c.t2 = r.number("t2").value_or(c.t2);
    c.steps = r.count("steps").value_or(c.steps);
    c.shots = r.count("shots").value_or(c.shots);
    c.seed = r.count("seed").value_or(c.seed);
    if (auto a = r.count("alpha")) {
        c.alpha = static_cast<int>(*a);
    }
    c.epsilon = r.number("epsilon").value_or(c.epsilon);
    c.delta = r.number("delta").value_or(c.delta);
    c.rows = r.count("rows").value_or(0);
    c.cols = r.count("cols").value_or(0);
    c.hx = r.number("hx").value_or(c.hx);
    c.hz = r.number("hz").value_or(c.hz);
    c.j = r.number("J").value_or(c.j);
    c.dt = r.number("dt").value_or(c.dt);
    if (c.steps < 1) {
        errors.push_back("steps: must be at least 1");
    }
    if (c.shots < 1) {
        errors.push_back("shots: must be at least 1");
    }
    if (j.contains("partition")) {
        if (!j["partition"].is_array()) {
            errors.push_back("partition: expected an array of site indices");
        } else {
            for (const auto &v : j["partition"]) {
                if (!v.is_number_integer() || v.get<long long>() < 0) {
                    errors.push_back("partition: entries must be non-negative integers");
                    break;
                }
                c.partition.push_back(v.get<std::size_t>());
            }
        }
    }
    if (j.contains("pairs")) {
        bool ok = j["pairs"].is_array();
        if (ok) {
            for (const auto &p : j["pairs"]) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
                    ok = false;
                    break;
                }
                c.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
            }
        }
        if (!ok) {
            errors.push_back("pairs: expected an array of [left, right] Pauli-string pairs");
        }
    }
    if (j.contains("groups")) {
        bool ok = j["groups"].is_array();
        Grouping g;
        if (ok) {
            for (const auto &grp : j["groups"]) {
                if (!grp.is_array()) {
                    ok = false;
                    break;
                }
                g.emplace_back();
                for (const auto &v : grp) {
                    if (!v.is_number_integer() || v.get<long long>() < 0) {
                        ok = false;
                        break;
                    }
                    g.back().push_back(v.get<std::size_t>());
                }
            }
        }
        if (ok) {
            c.groups = g;
        } else {
            errors.push_back("groups: expected an array of arrays of term indices");
        }
    }
    auto require = [&](bool present, const char *what) {
        if (!present) {
            errors.push_back(c.task + ": " + what + " is required");
        }
    };
    const std::string &t = c.task;
    if (t != "choi2pc" && t != "compile2d" && !t.empty()) {
        require(!c.operator_text.empty(), "operator");
    }
    if (t == "otoc" || t == "choi2pc" || t == "nqubit") {
        require(!c.pairs.empty(), "pairs");
    }
    if (t == "superop") {
        require(!c.superop_text.empty(), "superop");
    }
    if (t == "loe") {
        require(!c.partition.empty(), "a nonempty partition");
        std::set<std::size_t> uniq(c.partition.begin(), c.partition.end());
        if (uniq.size() != c.partition.size()) {
            errors.push_back("partition: repeated site");
        }
    }
    if (t == "corr") {
        require(!c.operator2_text.empty(), "operator2");
    }
    if (t == "choi2pc") {
        require(!c.hamiltonian_text.empty() || !c.circuit_text.empty(), "hamiltonian or circuit");
    }
    if (t == "ose") {
        if (c.alpha < 2) {
            errors.push_back("alpha: must be an integer >= 2 for ose (got " + std::to_string(c.alpha) + ")");
        }
        if (!(c.epsilon > 0)) {
            errors.push_back("epsilon: must be positive");
        }
        if (!(c.delta > 0 && c.delta < 1)) {
            errors.push_back("delta: must lie in (0, 1)");
        }
    }
    if (t == "compile2d") {
        require(c.rows >= 1, "rows >= 1");
        require(c.cols >= 1, "cols >= 1");
    }
    if (!errors.empty()) {
        return res;
    }
    json &nj = c.normalized;
    nj["task"] = c.task;
    nj["t"] = c.t;
    nj["t2"] = c.t2;
    nj["steps"] = c.steps;
    nj["shots"] = c.shots;
    nj["seed"] = c.seed;
    if (t == "ose") {
        nj["alpha"] = c.alpha;
        nj["epsilon"] = c.epsilon;
        nj["delta"] = c.delta;
    }
    if (!c.partition.empty()) {
        nj["partition"] = c.partition;
    }
    if (!c.pairs.empty()) {
        nj["pairs"] = json::array();
        for (const auto &[a, b] : c.pairs) {
            nj["pairs"].push_back({a, b});
        }
    }
    if (c.groups) {
        nj["groups"] = *c.groups;
    }
    if (t == "compile2d") {
        nj["rows"] = c.rows;
        nj["cols"] = c.cols;
        nj["hx"] = c.hx;
        nj["hz"] = c.hz;
        nj["J"] = c.j;
        nj["dt"] = c.dt;
    }
    for (const auto &[key, text] : {std::pair<const char *, const std::string *>{"operator", &c.operator_text},
                                    {"operator2", &c.operator2_text},
                                    {"hamiltonian", &c.hamiltonian_text},
                                    {"circuit", &c.circuit_text},
                                    {"circuit2", &c.circuit2_text},
                                    {"superop", &c.superop_text}}) {
        if (!text->empty()) {
            nj[key] = *text;
        }
    }
    res.config = std::move(c);
    return res;
}

inline ValidationResult validate_config_file(const std::string &path, const std::string &task_arg) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    return validate_config(j, task_arg, std::filesystem::path(path).parent_path().string());
}

/// A Pauli string such as "ZII", or `<re> <im> <string>` lines.
inline PauliSum parse_operator(const std::string &text) {
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
    if (!trimmed.empty() && trimmed.find_first_not_of("IXYZ") == std::string::npos) {
        return PauliSum::from_string(trimmed);
    }
    return PauliSum::parse(text);
}

namespace detail {

inline PauliSum reversed(const PauliSum &h) {
    PauliSum r(h.n());
    for (auto it = h.terms().rbegin(); it != h.terms().rend(); ++it) {
        r.add(it->coef, it->str);
    }
    return r;
}

/// Evolution unitary: a circuit, a Trotterized Hamiltonian, or the identity.
/// The Hamiltonian form runs its terms in reverse so that the Heisenberg circuit
/// U^dag (x) Uᵀ applies them in file order, gate for gate as the super-propagator.
struct Evolution {
    Circuit circuit;
    std::optional<PauliSum> hamiltonian;
    double t = 0;
    uint64_t steps = 1;

    DenseOperator dense() const {
        if (hamiltonian) {
            return oracle::exact_trotter_unitary(reversed(*hamiltonian), t, steps);
        }
        return oracle::circuit_unitary(circuit);
    }
};

inline Evolution make_evolution(const std::string &circuit_text, const std::string &hamiltonian_text, double t,
                                uint64_t steps, std::size_t n) {
    Evolution e;
    if (!circuit_text.empty()) {
        e.circuit = Circuit::parse(circuit_text, n);
        return e;
    }
    if (!hamiltonian_text.empty()) {
        PauliSum h = PauliSum::parse(hamiltonian_text);
        if (h.n() != n) {
            throw ConfigError({"hamiltonian acts on " + std::to_string(h.n()) + " sites but the operator has " +
                               std::to_string(n)});
        }
        require_hermitian(h);
        e.hamiltonian = h;
        e.t = t;
        e.steps = steps;
        e.circuit = trotter_circuit(reversed(h), t, steps);
        return e;
    }
    e.circuit = Circuit(n);
    return e;
}

inline std::vector<PauliPair> parse_pairs(const std::vector<std::pair<std::string, std::string>> &pairs,
                                          std::size_t n) {
    std::vector<PauliPair> out;
    for (const auto &[a, b] : pairs) {
        PauliString p = PauliString::from_string(a), q = PauliString::from_string(b);
        if (p.n() != n || q.n() != n) {
            throw ConfigError({"pair (" + a + ", " + b + ") does not have length " + std::to_string(n)});
        }
        out.push_back({p, q});
    }
    return out;
}

inline VectorizedState evolved_state(const PauliSum &o, const Evolution &e) {
    QState s = prepare_vectorized(o, BasisTag::computational());
    apply_circuit_inplace(s, heisenberg_circuit(e.circuit));
    return s.to_vectorized(o.n(), BasisTag::computational());
}

/// Greedy grouping: each term joins the first group it commutes with as a
/// superoperator.
inline Grouping greedy_grouping(const OperatorSumSuperop &a) {
    Grouping g;
    std::vector<std::vector<PauliPair>> members;
    for (std::size_t t = 0; t < a.terms().size(); t++) {
        PauliPair p{a.terms()[t].left, a.terms()[t].right};
        bool placed = false;
        for (std::size_t k = 0; k < g.size() && !placed; k++) {
            auto trial = members[k];
            trial.push_back(p);
            if (classify_commuting_set(trial).verdict != CommutationVerdict::NotCommuting) {
                members[k] = trial;
                g[k].push_back(t);
                placed = true;
            }
        }
        if (!placed) {
            g.push_back({t});
            members.push_back({p});
        }
    }
    return g;
}

inline double weight_of_index(uint64_t idx, std::size_t n) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; i++) {
        w += ((idx >> (2 * i)) & 3) != 0;
    }
    return static_cast<double>(w);
}

}  // namespace detail

struct RunOutput {
    json reports = json::array();
    std::optional<std::string> dist_csv;
    std::optional<json> schedule;
    std::optional<VectorizedState> state;
};

class Runner {
   public:
    explicit Runner(const ExperimentConfig &c) : c_(c), root_(c.seed) {
    }

    RunOutput run() {
        const std::string &t = c_.task;
        if (t == "compile2d") {
            compile2d();
            return std::move(out_);
        }
        if (t == "choi2pc") {
            choi2pc();
            return std::move(out_);
        }
        o_ = parse_operator(c_.operator_text);
        n_ = o_.n();
        evo_ = detail::make_evolution(c_.circuit_text, c_.hamiltonian_text, c_.t, c_.steps, n_);
        if (c_.with_oracle) {
            require_cap(n_, "with-oracle");
        }
        if (t == "evolve") {
            evolve();
        } else if (t == "sample") {
            sample();
        } else if (t == "otoc") {
            otoc();
        } else if (t == "superop") {
            superop();
        } else if (t == "ose") {
            ose();
        } else if (t == "loe") {
            loe();
        } else if (t == "corr") {
            corr();
        } else if (t == "nqubit") {
            nqubit();
        } else {
            throw ConfigError({"unknown task '" + t + "'"});
        }
        return std::move(out_);
    }

   private:
    void emit(const EstimatorReport &r, std::optional<double> oracle_value = std::nullopt) {
        json j = io::report_to_json(r);
        j["seed"] = c_.seed;
        j["params"]["stream_seed"] = std::to_string(r.seed);
        j["params"]["task"] = c_.task;
        j["params"]["t"] = format_double(c_.t);
        j["params"]["steps"] = std::to_string(c_.steps);
        if (c_.with_oracle && oracle_value) {
            const double d = std::abs(r.value - *oracle_value);
            j["oracle"] = *oracle_value;
            j["abs_delta"] = d;
            if (r.std_error > 0) {
                j["abs_delta_over_stderr"] = d / r.std_error;
            } else {
                j["abs_delta_over_stderr"] = d <= 1e-12 ? json(0.0) : json(nullptr);
            }
        }
        out_.reports.push_back(j);
    }

    DenseOperator oracle_evolved() const {
        DenseOperator u = evo_.dense();
        return oracle::normalize_hs(u.adjoint() * oracle::dense(o_) * u);
    }

    VectorizedState state_c() const {
        return detail::evolved_state(o_, evo_);
    }

    VectorizedState state_p() const {
        return bell_transform(state_c(), BellDirection::CtoP);
    }

    void evolve() {
        VectorizedState s = state_p();
        out_.state = s;
        double size = 0;
        for (uint64_t k = 0; k < s.amps.size(); k++) {
            size += std::norm(s.amps[k]) * detail::weight_of_index(k, n_);
        }
        EstimatorReport r{"operator_size", size, 0, 0, c_.seed, {{"exact", "statevector"}}};
        std::optional<double> ov;
        if (c_.with_oracle) {
            auto p = oracle::exact_pauli_distribution(oracle_evolved());
            double e = 0;
            for (uint64_t k = 0; k < p.size(); k++) {
                e += p[k] * detail::weight_of_index(k, n_);
            }
            ov = e;
        }
        emit(r, ov);
    }

    void sample() {
        RngStream rng = root_.fork("sample");
        EmpiricalPauliDist d = sample_pauli_dist(state_p(), c_.shots, rng);
        out_.dist_csv = io::dist_to_csv(d);
        DiagonalSuperop size = size_superop(n_);
        std::optional<std::vector<double>> p;
        if (c_.with_oracle) {
            p = oracle::exact_pauli_distribution(oracle_evolved());
        }
        for (int power : {1, 2}) {
            EstimatorReport r = mc_diagonal(d, size, power);
            r.label = power == 1 ? "size" : "size^2";
            std::optional<double> ov;
            if (p) {
                double e = 0;
                for (uint64_t k = 0; k < p->size(); k++) {
                    e += (*p)[k] * std::pow(detail::weight_of_index(k, n_), power);
                }
                ov = e;
            }
            emit(r, ov);
        }
    }

    void otoc() {
        auto pairs = detail::parse_pairs(c_.pairs, n_);
        RngStream rng = root_.fork("otoc");
        auto reps = estimate_otoc_group(state_c(), pairs, c_.shots, rng);
        std::optional<DenseOperator> ot;
        if (c_.with_oracle) {
            ot = oracle_evolved();
        }
        for (std::size_t i = 0; i < reps.size(); i++) {
            std::optional<double> ov;
            if (ot) {
                ov = oracle::exact_otoc(*ot, oracle::pauli_matrix(pairs[i].first), oracle::pauli_matrix(pairs[i].second));
            }
            emit(reps[i], ov);
        }
    }

    void superop() {
        SuperopSpec spec = parse_superop(c_.superop_text, n_);
        if (auto *diag = std::get_if<DiagonalSuperop>(&spec)) {
            RngStream rng = root_.fork("superop");
            EmpiricalPauliDist d = sample_pauli_dist(state_p(), c_.shots, rng);
            EstimatorReport r = mc_diagonal(d, *diag);
            std::optional<double> ov;
            if (c_.with_oracle) {
                auto p = oracle::exact_pauli_distribution(oracle_evolved());
                double e = 0;
                for (uint64_t k = 0; k < p.size(); k++) {
                    if (p[k] > 0) {
                        e += p[k] * (*diag)(pauli_from_index(k, n_).first);
                    }
                }
                ov = e;
            }
            emit(r, ov);
            return;
        }
        const auto &a = std::get<OperatorSumSuperop>(spec);
        Grouping g = c_.groups ? *c_.groups : detail::greedy_grouping(a);
        std::vector<double> w = group_weights(a, g);
        for (std::size_t i = 0; i < g.size(); i++) {
            bool constant = std::all_of(g[i].begin(), g[i].end(), [&](std::size_t t) {
                return t < a.terms().size() && a.terms()[t].left.is_identity() && a.terms()[t].right.is_identity();
            });
            if (constant) {
                w[i] = 0;
            }
        }
        RngStream rng = root_.fork("superop");
        EstimatorReport r;
        if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0; })) {
            r = estimate_superop_grouped(state_c(), a, g, ShotPlan{std::vector<uint64_t>(g.size(), 0), 0}, rng);
        } else {
            r = estimate_superop_grouped(state_c(), a, g, allocate_shots(w, c_.shots), rng);
        }
        std::optional<double> ov;
        if (c_.with_oracle) {
            ov = oracle::exact_superop_expectation(a, oracle_evolved());
        }
        emit(r, ov);
    }

    void ose() {
        RngStream rng = root_.fork("ose");
        OseResult res = estimate_ose(state_p(), c_.alpha, c_.epsilon, c_.delta, rng);
        res.purity.metadata["M_alpha"] = format_double(res.entropy);
        std::optional<oracle::OseExact> ex;
        if (c_.with_oracle) {
            ex = oracle::exact_ose(oracle_evolved(), c_.alpha);
        }
        emit(res.purity, ex ? std::optional<double>(ex->purity) : std::nullopt);
        const double p = res.purity.value;
        EstimatorReport m{"ose_entropy", res.entropy,
                          p > 0 ? res.purity.std_error / (std::abs(1.0 - c_.alpha) * p) : 0.0, res.purity.shots,
                          res.purity.seed, res.purity.metadata};
        emit(m, ex ? std::optional<double>(ex->entropy) : std::nullopt);
    }

    void loe() {
        for (auto a : c_.partition) {
            if (a >= n_) {
                throw ConfigError({"partition: site " + std::to_string(a) + " out of range for n=" + std::to_string(n_)});
            }
        }
        if (c_.partition.size() >= n_) {
            throw ConfigError({"partition: must be a proper subset of the sites"});
        }
        RngStream rng = root_.fork("loe");
        VectorizedState s = state_c();
        EstimatorReport r = estimate_loe2(s, s, c_.partition, c_.shots, rng);
        std::optional<double> ov;
        if (c_.with_oracle) {
            ov = oracle::exact_loe(oracle_evolved(), c_.partition, 2).linear;
        }
        emit(r, ov);
    }

    void corr() {
        PauliSum o2 = parse_operator(c_.operator2_text);
        if (o2.n() != n_) {
            throw ConfigError({"operator2 acts on " + std::to_string(o2.n()) + " sites, operator on " +
                               std::to_string(n_)});
        }
        detail::Evolution e2 = detail::make_evolution(c_.circuit2_text, c_.hamiltonian_text, c_.t2, c_.steps, n_);
        RngStream rng = root_.fork("corr");
        QState s = interferometric_state(o_, o2, evo_.circuit, e2.circuit);
        EstimatorReport r = estimate_corr_interferometric(s, c_.shots, rng);
        std::optional<double> ov;
        if (c_.with_oracle) {
            ov = oracle::exact_correlator(oracle::dense(o_), oracle::dense(o2), evo_.dense(), e2.dense());
        }
        emit(r, ov);
    }

    void choi2pc() {
        if (!c_.circuit_text.empty()) {
            evo_.circuit = Circuit::parse(c_.circuit_text);
            n_ = evo_.circuit.num_qubits();
        } else {
            PauliSum h = PauliSum::parse(c_.hamiltonian_text);
            n_ = h.n();
            evo_ = detail::make_evolution("", c_.hamiltonian_text, c_.t, c_.steps, n_);
        }
        if (c_.with_oracle) {
            require_cap(n_, "with-oracle");
        }
        auto pairs = detail::parse_pairs(c_.pairs, n_);
        RngStream rng = root_.fork("choi2pc");
        VectorizedState s = prepare_choi(evo_.circuit).to_vectorized(n_, BasisTag::computational());
        auto reps = estimate_otoc_group(s, pairs, c_.shots, rng);
        std::optional<DenseOperator> u;
        if (c_.with_oracle) {
            u = evo_.dense();
        }
        for (std::size_t i = 0; i < reps.size(); i++) {
            reps[i].label = "two_point[" + pairs[i].first.str() + "," + pairs[i].second.str() + "]";
            std::optional<double> ov;
            if (u) {
                ov = oracle::exact_two_point(*u, oracle::pauli_matrix(pairs[i].second),
                                             oracle::pauli_matrix(pairs[i].first));
            }
            emit(reps[i], ov);
        }
    }

    void nqubit() {
        if (o_.size() != 1) {
            throw ConfigError({"nqubit: operator must be a single Pauli string"});
        }
        auto pairs = detail::parse_pairs(c_.pairs, n_);
        RngStream rng = root_.fork("nqubit");
        auto reps = nqubit_otoc(o_.terms()[0].str, evo_.circuit, pairs, c_.shots, rng);
        std::optional<DenseOperator> ot;
        if (c_.with_oracle) {
            ot = oracle_evolved();
        }
        for (std::size_t i = 0; i < reps.size(); i++) {
            std::optional<double> ov;
            if (ot) {
                ov = oracle::exact_otoc(*ot, oracle::pauli_matrix(pairs[i].first), oracle::pauli_matrix(pairs[i].second));
            }
            emit(reps[i], ov);
        }
    }

    void compile2d() {
        lattice2d::GridLayout layout = lattice2d::embed(c_.rows, c_.cols);
        lattice2d::Schedule s = lattice2d::trotter_schedule(c_.hx, c_.hz, c_.j, c_.dt, layout, c_.steps);
        lattice2d::ValidationReport v = lattice2d::validate(s, layout);
        out_.schedule = io::schedule_to_json(s);
        (*out_.schedule)["violations"] = v.violations;
        auto add = [&](const char *label, double value) {
            emit(EstimatorReport{label, value, 0, 0, c_.seed, {}});
        };
        add("entangling_depth", static_cast<double>(v.entangling_depth));
        add("edge_gates", static_cast<double>(v.edge_gates));
        add("swap_gates", static_cast<double>(v.swap_gates));
        add("violations", static_cast<double>(v.violations.size()));
        if (!v.ok()) {
            throw Error("compiled schedule failed validation: " + v.violations.front());
        }
    }

    const ExperimentConfig &c_;
    RngStream root_;
    PauliSum o_;
    std::size_t n_ = 0;
    detail::Evolution evo_;
    RunOutput out_;
};

/// Runs one task and writes report.json (plus dist.csv or schedule.json) into out_dir.
inline void run(const ExperimentConfig &c, const std::string &out_dir) {
    RunOutput out = Runner(c).run();
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    io::write_file((dir / "report.json").string(), out.reports.dump(2) + "\n");
    if (out.dist_csv) {
        io::write_file((dir / "dist.csv").string(), *out.dist_csv);
    }
    if (out.schedule) {
        io::write_file((dir / "schedule.json").string(), out.schedule->dump(2) + "\n");
    }
    if (out.state) {
        std::ostringstream bin;
        write_state(bin, *out.state);
        io::write_file((dir / "state.bin").string(), bin.str());
    }
}

/// `opvec <task> --config <file> [--with-oracle] [--seed N] [--out DIR]`, and
/// `opvec validate --config <file>`. Returns the process exit code.
inline int main_entry(int argc, const char *const *argv, std::ostream &out = std::cout,
                      std::ostream &err = std::cerr) {
    CLI::App app{"Vectorized Heisenberg-operator simulation and estimation"};
    app.name("opvec");
    std::string task, config, out_dir = ".";
    bool with_oracle = false;
    std::optional<uint64_t> seed;
    std::vector<std::string> choices = task_names();
    choices.push_back("validate");
    app.add_option("task", task, "Task to run, or 'validate'")->required()->check(CLI::IsMember(choices));
    app.add_option("--config", config, "Experiment config (JSON)")->required();
    app.add_flag("--with-oracle", with_oracle, "Append exact oracle values to each report");
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--out", out_dir, "Output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }
    try {
        ValidationResult v = validate_config_file(config, task == "validate" ? "" : task);
        if (!v.config) {
            for (const auto &e : v.errors) {
                err << "config error: " << e << "\n";
            }
            return kInvalidConfig;
        }
        ExperimentConfig c = *v.config;
        if (seed) {
            c.seed = *seed;
            c.normalized["seed"] = *seed;
        }
        c.with_oracle = with_oracle;
        if (task == "validate") {
            out << c.normalized.dump(2) << "\n";
            return kOk;
        }
        run(c, out_dir);
        return kOk;
    } catch (const ConfigError &e) {
        for (const auto &m : e.errors()) {
            err << "config error: " << m << "\n";
        }
        return kInvalidConfig;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const CapExceeded &e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const NotCommuting &e) {
        err << "non-commuting set: " << e.what() << "\n";
        return kNonCommuting;
    } catch (const EntangledEigenbasis &e) {
        err << "entangled eigenbasis: " << e.what() << "\n";
        return kNonCommuting;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kOther;
    }
}

}  // namespace opvec::cli

#endif
