// Copyright 2026 The nerfdeg Authors.
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

#include "nerfdeg/augment.hpp"
#include "nerfdeg/camera_io.hpp"
#include "nerfdeg/convolve.hpp"
#include "nerfdeg/dataset.hpp"
#include "nerfdeg/degradation.hpp"
#include "nerfdeg/error.hpp"
#include "nerfdeg/geometry.hpp"
#include "nerfdeg/image.hpp"
#include "nerfdeg/kdtree.hpp"
#include "nerfdeg/kernel.hpp"
#include "nerfdeg/mask.hpp"
#include "nerfdeg/metrics.hpp"
#include "nerfdeg/parallel.hpp"
#include "nerfdeg/png_io.hpp"
#include "nerfdeg/random.hpp"
#include "nerfdeg/recipe_json.hpp"
#include "nerfdeg/view_selection.hpp"
