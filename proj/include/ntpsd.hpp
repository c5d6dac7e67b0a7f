// Copyright 2026 The ntpsd Authors
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

#pragma once

#include "ntpsd/conditioning.hpp"
#include "ntpsd/dynamics.hpp"
#include "ntpsd/error.hpp"
#include "ntpsd/fidelity.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/gauss_legendre.hpp"
#include "ntpsd/hermite.hpp"
#include "ntpsd/moments.hpp"
#include "ntpsd/parallel.hpp"
#include "ntpsd/steering.hpp"
#include "ntpsd/wigner.hpp"
