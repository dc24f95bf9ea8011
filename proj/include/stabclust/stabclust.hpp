//
// Copyright 2026 The stabclust Authors
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
//

#ifndef STABCLUST_STABCLUST_HPP_
#define STABCLUST_STABCLUST_HPP_

#include "stabclust/convex.hpp"
#include "stabclust/dataset_io.hpp"
#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/instance.hpp"
#include "stabclust/lemmas.hpp"
#include "stabclust/local_model.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/outcome.hpp"
#include "stabclust/private_kmeans.hpp"
#include "stabclust/private_kmedian.hpp"
#include "stabclust/rng.hpp"
#include "stabclust/sample_aggregate.hpp"
#include "stabclust/stability.hpp"
#include "stabclust/suite.hpp"

#endif  // STABCLUST_STABCLUST_HPP_
