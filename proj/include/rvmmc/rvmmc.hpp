// Copyright 2026 The rvmmc Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include "anneal.hpp"
#include "bench.hpp"
#include "embedded_ising.hpp"
#include "embedding.hpp"
#include "error.hpp"
#include "exact.hpp"
#include "hardware_graph.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "qubo.hpp"
#include "random.hpp"
#include "sample_set.hpp"
#include "solvers.hpp"
