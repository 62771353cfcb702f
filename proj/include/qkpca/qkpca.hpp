// Copyright 2026 The qkpca Authors
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

#include "qkpca/benchmark.hpp"
#include "qkpca/classifiers.hpp"
#include "qkpca/csv.hpp"
#include "qkpca/datasets.hpp"
#include "qkpca/error.hpp"
#include "qkpca/feature_map.hpp"
#include "qkpca/kernels.hpp"
#include "qkpca/kpca.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/metrics.hpp"
#include "qkpca/parallel.hpp"
#include "qkpca/rng.hpp"
#include "qkpca/saqk_train.hpp"
#include "qkpca/statevector.hpp"
