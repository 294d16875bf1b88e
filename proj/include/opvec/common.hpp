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

#ifndef OPVEC_COMMON_HPP
#define OPVEC_COMMON_HPP

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace opvec {

using cplx = std::complex<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class SizeMismatch : public Error {
   public:
    using Error::Error;
};

class CapExceeded : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

class InvalidArgument : public Error {
   public:
    using Error::Error;
};

class ZeroOperator : public Error {
   public:
    using Error::Error;
};

class BasisMismatch : public Error {
   public:
    using Error::Error;
};

class NotCommuting : public Error {
   public:
    using Error::Error;
};

/// Raised when an OTOC set needs an eigenbasis entangled across the L/R halves.
class EntangledEigenbasis : public Error {
   public:
    using Error::Error;
};

class NotUnitary : public Error {
   public:
    using Error::Error;
};

class NotHermitian : public Error {
   public:
    using Error::Error;
};

class NotSelfAdjoint : public Error {
   public:
    using Error::Error;
};

class ZeroProbability : public Error {
   public:
    ZeroProbability(const std::string &what, double probability) : Error(what), probability(probability) {
    }
    double probability;
};

constexpr int kDefaultOracleCap = 7;

/// Oracle size cap. OPVEC_MAX_N may lower it but never raise it.
inline int oracle_cap() {
    int cap = kDefaultOracleCap;
    if (const char *env = std::getenv("OPVEC_MAX_N")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0 && v < cap) {
            cap = static_cast<int>(v);
        }
    }
    return cap;
}

inline void require_cap(std::size_t n, const char *what) {
    if (static_cast<long>(n) > oracle_cap()) {
        throw CapExceeded(std::string(what) + ": n=" + std::to_string(n) + " exceeds oracle cap " +
                          std::to_string(oracle_cap()));
    }
}

}  // namespace opvec

#endif
