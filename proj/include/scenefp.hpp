// Copyright 2026 The scenefp Authors
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


#ifndef SCENEFP_HPP_
#define SCENEFP_HPP_

#include "scenefp/config.hpp"
#include "scenefp/errors.hpp"
#include "scenefp/fingerprint.hpp"
#include "scenefp/geometry.hpp"
#include "scenefp/metric_framework.hpp"
#include "scenefp/metrics.hpp"
#include "scenefp/pairwise_metrics.hpp"
#include "scenefp/report.hpp"
#include "scenefp/safety_potential.hpp"
#include "scenefp/scene_model.hpp"
#include "scenefp/traffic_quality.hpp"

#endif  // SCENEFP_HPP_
