// Copyright 2026 The mtdgame Authors
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

// Umbrella header for the mtdgame library (CLI front end not included).

#include "mtdgame/attack_graph.hpp"
#include "mtdgame/common.hpp"
#include "mtdgame/game_model.hpp"
#include "mtdgame/matrix_lp.hpp"
#include "mtdgame/simulator.hpp"
#include "mtdgame/solver.hpp"
#include "mtdgame/vuln_catalog.hpp"
