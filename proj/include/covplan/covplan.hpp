// Copyright 2026 The covplan Authors
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

#include "covplan/conformal.hpp"
#include "covplan/dataset.hpp"
#include "covplan/error.hpp"
#include "covplan/finite_horizon.hpp"
#include "covplan/friedman.hpp"
#include "covplan/limit.hpp"
#include "covplan/models.hpp"
#include "covplan/numeric.hpp"
#include "covplan/params.hpp"
#include "covplan/pipeline.hpp"
#include "covplan/planner.hpp"
#include "covplan/replication.hpp"
#include "covplan/rng.hpp"
#include "covplan/urn.hpp"
