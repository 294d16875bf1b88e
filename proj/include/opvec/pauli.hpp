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

#ifndef OPVEC_PAULI_HPP
#define OPVEC_PAULI_HPP

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opvec/common.hpp"

namespace opvec {

using DenseOperator = Eigen::MatrixXcd;

/// A power of i.
struct Phase {
    uint8_t k = 0;

    constexpr Phase() = default;
    constexpr explicit Phase(int power) : k(static_cast<uint8_t>(((power % 4) + 4) % 4)) {
    }

    constexpr Phase operator*(Phase other) const {
        return Phase(k + other.k);
    }
    constexpr Phase conj() const {
        return Phase(4 - k);
    }
    constexpr bool operator==(const Phase &other) const = default;

    cplx value() const {
        static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[k];
    }
};

/// Hermitian Pauli string stored as packed (a_z, a_x) bit vectors. Site 0 is the
/// leftmost character of the text form. Y is the pair (1, 1).
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t n) : n_(n), zs_(words_for(n), 0), xs_(words_for(n), 0) {
    }

    static PauliString from_string(std::string_view text) {
        PauliString p(text.size());
        for (std::size_t i = 0; i < text.size(); i++) {
            p.set(i, text[i]);
        }
        return p;
    }

    static PauliString single(std::size_t n, std::size_t q, char c) {
        PauliString p(n);
        p.set(q, c);
        return p;
    }

    std::size_t n() const {
        return n_;
    }
    std::size_t num_words() const {
        return zs_.size();
    }
    const std::vector<uint64_t> &z_words() const {
        return zs_;
    }
    const std::vector<uint64_t> &x_words() const {
        return xs_;
    }
    uint64_t &z_word(std::size_t w) {
        return zs_[w];
    }
    uint64_t &x_word(std::size_t w) {
        return xs_[w];
    }

    bool z(std::size_t q) const {
        return (zs_[q >> 6] >> (q & 63)) & 1;
    }
    bool x(std::size_t q) const {
        return (xs_[q >> 6] >> (q & 63)) & 1;
    }
    void set_z(std::size_t q, bool v) {
        set_bit(zs_, q, v);
    }
    void set_x(std::size_t q, bool v) {
        set_bit(xs_, q, v);
    }

    void set(std::size_t q, char c) {
        if (q >= n_) {
            throw SizeMismatch("pauli site out of range");
        }
        switch (c) {
            case 'I':
            case '_':
                set_z(q, false);
                set_x(q, false);
                break;
            case 'X':
                set_z(q, false);
                set_x(q, true);
                break;
            case 'Y':
                set_z(q, true);
                set_x(q, true);
                break;
            case 'Z':
                set_z(q, true);
                set_x(q, false);
                break;
            default:
                throw ParseError(std::string("invalid pauli character '") + c + "'");
        }
    }

    char at(std::size_t q) const {
        static const char table[4] = {'I', 'X', 'Z', 'Y'};
        return table[(z(q) << 1) | x(q)];
    }

    std::string str() const {
        std::string s(n_, 'I');
        for (std::size_t q = 0; q < n_; q++) {
            s[q] = at(q);
        }
        return s;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t i = 0; i < zs_.size(); i++) {
            w += std::popcount(zs_[i] | xs_[i]);
        }
        return w;
    }

    std::size_t num_y() const {
        std::size_t w = 0;
        for (std::size_t i = 0; i < zs_.size(); i++) {
            w += std::popcount(zs_[i] & xs_[i]);
        }
        return w;
    }

    bool is_identity() const {
        return weight() == 0;
    }

    bool is_z_type() const {
        for (uint64_t w : xs_) {
            if (w) {
                return false;
            }
        }
        return true;
    }

    /// Sign s with Pᵀ = P* = s P.
    int transpose_sign() const {
        return (num_y() & 1) ? -1 : 1;
    }

    /// Concatenation: this on the first sites, other on the rest.
    PauliString tensor(const PauliString &other) const {
        PauliString r(n_ + other.n_);
        for (std::size_t q = 0; q < n_; q++) {
            r.set_z(q, z(q));
            r.set_x(q, x(q));
        }
        for (std::size_t q = 0; q < other.n_; q++) {
            r.set_z(n_ + q, other.z(q));
            r.set_x(n_ + q, other.x(q));
        }
        return r;
    }

    bool operator==(const PauliString &other) const = default;
    bool operator<(const PauliString &other) const {
        if (n_ != other.n_) {
            return n_ < other.n_;
        }
        if (zs_ != other.zs_) {
            return zs_ < other.zs_;
        }
        return xs_ < other.xs_;
    }

    std::size_t hash() const {
        std::size_t h = n_ * 0x9E3779B97F4A7C15ull;
        for (std::size_t i = 0; i < zs_.size(); i++) {
            h ^= zs_[i] + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
            h ^= xs_[i] + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        }
        return h;
    }

   private:
    static std::size_t words_for(std::size_t n) {
        return (n + 63) / 64;
    }
    static void set_bit(std::vector<uint64_t> &v, std::size_t q, bool b) {
        uint64_t m = uint64_t{1} << (q & 63);
        if (b) {
            v[q >> 6] |= m;
        } else {
            v[q >> 6] &= ~m;
        }
    }

    std::size_t n_ = 0;
    std::vector<uint64_t> zs_;
    std::vector<uint64_t> xs_;
};

struct PauliStringHash {
    std::size_t operator()(const PauliString &p) const {
        return p.hash();
    }
};

inline void check_same_size(const PauliString &p, const PauliString &q) {
    if (p.n() != q.n()) {
        throw SizeMismatch("pauli strings of different length: " + std::to_string(p.n()) + " vs " +
                           std::to_string(q.n()));
    }
}

/// Returns (phi, R) with P Q = i^phi R.
inline std::pair<Phase, PauliString> pauli_product(const PauliString &p, const PauliString &q) {
    check_same_size(p, q);
    PauliString r(p.n());
    // With P = i^{x.z} X^x Z^z per site the product phase is
    // x1.z1 + x2.z2 + 2 z1.x2 - x3.z3 (mod 4).
    int acc = 0;
    for (std::size_t w = 0; w < p.num_words(); w++) {
        uint64_t z1 = p.z_words()[w], x1 = p.x_words()[w];
        uint64_t z2 = q.z_words()[w], x2 = q.x_words()[w];
        uint64_t z3 = z1 ^ z2, x3 = x1 ^ x2;
        acc += std::popcount(x1 & z1) + std::popcount(x2 & z2) + 2 * std::popcount(z1 & x2) -
               std::popcount(x3 & z3);
        r.z_word(w) = z3;
        r.x_word(w) = x3;
    }
    return {Phase(acc), r};
}

inline bool commutes(const PauliString &p, const PauliString &q) {
    check_same_size(p, q);
    uint64_t acc = 0;
    for (std::size_t w = 0; w < p.num_words(); w++) {
        acc ^= (p.z_words()[w] & q.x_words()[w]) ^ (p.x_words()[w] & q.z_words()[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

struct GeometricFeatures {
    std::size_t weight = 0;
    /// 1-based site label of the rightmost non-identity site.
    std::optional<std::size_t> right_boundary;
};

inline GeometricFeatures geometric_features(const PauliString &p) {
    GeometricFeatures f;
    f.weight = p.weight();
    for (std::size_t q = p.n(); q-- > 0;) {
        if (p.z(q) || p.x(q)) {
            f.right_boundary = q + 1;
            break;
        }
    }
    return f;
}

struct PauliTerm {
    cplx coef;
    PauliString str;
};

/// Linear combination of Pauli strings. Terms keep first-appearance order;
/// duplicates merge and exact zeros are dropped.
class PauliSum {
   public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n) : n_(n) {
    }
    PauliSum(cplx c, const PauliString &p) : n_(p.n()) {
        add(c, p);
    }

    static PauliSum from_string(std::string_view s, cplx c = 1.0) {
        return PauliSum(c, PauliString::from_string(s));
    }

    std::size_t n() const {
        return n_;
    }
    const std::vector<PauliTerm> &terms() const {
        return terms_;
    }
    std::size_t size() const {
        return terms_.size();
    }
    bool empty() const {
        return terms_.empty();
    }

    void add(cplx c, const PauliString &p) {
        if (p.n() != n_) {
            throw SizeMismatch("term of length " + std::to_string(p.n()) + " in sum over " + std::to_string(n_) +
                               " sites");
        }
        auto it = index_.find(p);
        if (it != index_.end()) {
            terms_[it->second].coef += c;
            if (terms_[it->second].coef == cplx(0)) {
                terms_.erase(terms_.begin() + static_cast<long>(it->second));
                rebuild_index();
            }
            return;
        }
        if (c == cplx(0)) {
            return;
        }
        index_.emplace(p, terms_.size());
        terms_.push_back({c, p});
    }

    bool is_hermitian() const {
        for (const auto &t : terms_) {
            if (t.coef.imag() != 0) {
                return false;
            }
        }
        return true;
    }

    /// Sum of |c_k|^2, i.e. tr(O†O)/2^n.
    double norm2() const {
        double s = 0;
        for (const auto &t : terms_) {
            s += std::norm(t.coef);
        }
        return s;
    }

    PauliSum scaled(cplx s) const {
        PauliSum r(n_);
        for (const auto &t : terms_) {
            r.add(t.coef * s, t.str);
        }
        return r;
    }

    /// Rescaled so that tr(O†O)/2^n = 1.
    PauliSum normalized() const {
        double nn = norm2();
        if (nn == 0) {
            throw ZeroOperator("cannot normalize the zero operator");
        }
        return scaled(1.0 / std::sqrt(nn));
    }

    /// Parses `<re> <im> <string>` lines. Blank lines and '#' comments are skipped.
    static PauliSum parse(std::string_view text, std::optional<std::size_t> expected_n = std::nullopt) {
        std::istringstream in{std::string(text)};
        std::string line;
        std::optional<PauliSum> out;
        if (expected_n) {
            out.emplace(*expected_n);
        }
        int lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            std::istringstream ls(line);
            std::string re_s, im_s, ps;
            if (!(ls >> re_s)) {
                continue;
            }
            std::string extra;
            if (!(ls >> im_s >> ps) || (ls >> extra)) {
                throw ParseError("line " + std::to_string(lineno) + ": expected '<re> <im> <pauli string>'");
            }
            double re, im;
            try {
                std::size_t used_re = 0, used_im = 0;
                re = std::stod(re_s, &used_re);
                im = std::stod(im_s, &used_im);
                if (used_re != re_s.size() || used_im != im_s.size()) {
                    throw std::invalid_argument("trailing");
                }
            } catch (const std::exception &) {
                throw ParseError("line " + std::to_string(lineno) + ": bad coefficient");
            }
            PauliString p;
            try {
                p = PauliString::from_string(ps);
            } catch (const ParseError &e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
            }
            if (!out) {
                out.emplace(p.n());
            }
            if (p.n() != out->n()) {
                throw ParseError("line " + std::to_string(lineno) + ": string length " + std::to_string(p.n()) +
                                 " does not match n=" + std::to_string(out->n()));
            }
            out->add(cplx(re, im), p);
        }
        if (!out) {
            throw ParseError("no terms found");
        }
        return *out;
    }

    std::string to_text() const {
        std::ostringstream os;
        os.precision(17);
        for (const auto &t : terms_) {
            os << t.coef.real() << " " << t.coef.imag() << " " << t.str.str() << "\n";
        }
        return os.str();
    }

   private:
    void rebuild_index() {
        index_.clear();
        for (std::size_t i = 0; i < terms_.size(); i++) {
            index_.emplace(terms_[i].str, i);
        }
    }

    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
    std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
};

/// Dense matrix of a Pauli string; site 0 is the most significant index bit.
inline DenseOperator to_dense(const PauliString &p) {
    require_cap(p.n(), "to_dense");
    const std::size_t n = p.n();
    const std::size_t dim = std::size_t{1} << n;
    uint64_t xm = 0, zm = 0;
    for (std::size_t q = 0; q < n; q++) {
        uint64_t bit = uint64_t{1} << (n - 1 - q);
        if (p.x(q)) {
            xm |= bit;
        }
        if (p.z(q)) {
            zm |= bit;
        }
    }
    const cplx base = Phase(static_cast<int>(p.num_y())).value();
    DenseOperator m = DenseOperator::Zero(static_cast<long>(dim), static_cast<long>(dim));
    for (uint64_t b = 0; b < dim; b++) {
        double s = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
        m(static_cast<long>(b ^ xm), static_cast<long>(b)) = base * s;
    }
    return m;
}

inline DenseOperator to_dense(const PauliSum &o) {
    require_cap(o.n(), "to_dense");
    const long dim = 1L << o.n();
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (const auto &t : o.terms()) {
        m += t.coef * to_dense(t.str);
    }
    return m;
}

}  // namespace opvec

#endif
