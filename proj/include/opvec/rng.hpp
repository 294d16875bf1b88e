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

#ifndef OPVEC_RNG_HPP
#define OPVEC_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace opvec {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seeded random stream. Identical seeds give identical sequences; fork()
/// derives independent named sub-streams without consuming from the parent.
class RngStream {
   public:
    explicit RngStream(uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {
    }

    uint64_t seed() const {
        return seed_;
    }
    uint64_t counter() const {
        return counter_;
    }

    uint64_t next_u64() {
        counter_++;
        return engine_();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    RngStream fork(std::string_view name) const {
        uint64_t h = 0xCBF29CE484222325ull;
        for (char c : name) {
            h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ull;
        }
        return RngStream(splitmix64(seed_ ^ splitmix64(h)));
    }

    RngStream fork(uint64_t index) const {
        return RngStream(splitmix64(seed_ ^ splitmix64(index + 0x632BE59BD9B4E019ull)));
    }

   private:
    uint64_t seed_;
    uint64_t counter_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace opvec

#endif
