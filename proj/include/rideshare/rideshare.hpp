// Copyright 2026 The Authors.
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


// Umbrella header for the whole library.

#pragma once

#include "rideshare/assignment.hpp"
#include "rideshare/common.hpp"
#include "rideshare/config.hpp"
#include "rideshare/csv.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/dense_lp.hpp"
#include "rideshare/feasibility.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/flow.hpp"
#include "rideshare/objective.hpp"
#include "rideshare/oracle.hpp"
#include "rideshare/problem.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/serialize.hpp"
#include "rideshare/sim.hpp"
#include "rideshare/solver.hpp"
#include "rideshare/texpand.hpp"
