// Copyright 2026 The zrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "zrace/bessel.hpp"
#include "zrace/char_functions.hpp"
#include "zrace/constants.hpp"
#include "zrace/errors.hpp"
#include "zrace/eta1.hpp"
#include "zrace/eta2.hpp"
#include "zrace/primes.hpp"
#include "zrace/races.hpp"
#include "zrace/sampling.hpp"
#include "zrace/zero_catalog.hpp"
