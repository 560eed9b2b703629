// Copyright 2026 The cfk Authors
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

#ifndef CFK_CFK_HPP_
#define CFK_CFK_HPP_

#include "cfk/attack.hpp"
#include "cfk/classifier.hpp"
#include "cfk/csv.hpp"
#include "cfk/dataset.hpp"
#include "cfk/error.hpp"
#include "cfk/forest.hpp"
#include "cfk/generalization.hpp"
#include "cfk/grasp.hpp"
#include "cfk/metrics.hpp"
#include "cfk/mondrian.hpp"
#include "cfk/neighbors.hpp"
#include "cfk/parallel.hpp"
#include "cfk/pipeline.hpp"
#include "cfk/rng.hpp"
#include "cfk/schema.hpp"
#include "cfk/synthetic.hpp"

#endif  // CFK_CFK_HPP_
