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

#ifndef OPVEC_OPVEC_HPP
#define OPVEC_OPVEC_HPP

#include "opvec/circuit.hpp"
#include "opvec/clifford.hpp"
#include "opvec/common.hpp"
#include "opvec/estimators.hpp"
#include "opvec/kernels.hpp"
#include "opvec/lattice2d.hpp"
#include "opvec/oracle.hpp"
#include "opvec/pauli.hpp"
#include "opvec/rng.hpp"
#include "opvec/simulator.hpp"
#include "opvec/superop.hpp"
#include "opvec/vectorize.hpp"

#endif
