// SPDX-License-Identifier: Apache-2.0
//
// xlma: placement optimization and simulation for movable-subarray uplinks
// Copyright (C) 2026 The xlma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "xlma/common.hpp"

namespace xlma {

/// Axis-aligned box given by its center and full edge lengths.
struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 dims = Vec3::Ones();

  Vec3 lo() const { return center - 0.5 * dims; }
  Vec3 hi() const { return center + 0.5 * dims; }
};

/// Slab test for the closed segment [a, b] against a closed box. Touching a
/// face or edge counts as an intersection. The result does not depend on the
/// order of the endpoints.
bool segment_intersects_box(const Vec3& a, const Vec3& b, const Box& box);

}  // namespace xlma
