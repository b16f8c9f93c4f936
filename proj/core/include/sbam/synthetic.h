/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SBAM_SYNTHETIC_H_
#define SBAM_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbam/image.h"
#include "sbam/rng.h"

namespace sbam {

// Dim background with one bright, patch-aligned rectangle.
struct PlantedObjectSpec {
  std::size_t size = 32;        // image side, pixels
  std::size_t patch_side = 8;
  double coverage = 0.25;       // fraction of patches the object covers
  std::size_t channels = 1;
  // Peak-to-peak amplitude of a stripe pattern (period 4 px, horizontal or
  // vertical at random per image) inside the object and on the background.
  // Both share one orientation, so masked patches are predictable from
  // visible ones. Zero gives flat regions, whose normalised targets are 0.
  float texture = 0.2f;
  float background_texture = 0.1f;
};

struct PlantedObjectImage {
  Image image;
  std::vector<std::uint8_t> object_tokens;  // per patch, 1 inside the object
  std::size_t object_rows = 0;              // rectangle size in patches
  std::size_t object_cols = 0;
};

// Number of patches the object covers: round(coverage * L), at least 1.
std::size_t object_patch_count(const PlantedObjectSpec& spec);

// Draws count images. The object shape is chosen uniformly among the
// rectangles of exactly object_patch_count patches that fit the grid, and its
// position uniformly among placements. Background level ~ U[0.05, 0.3),
// object level ~ U[0.7, 1.0) minus texture headroom.
// Throws ParameterError for invalid geometry or when no rectangle of the
// requested area fits.
std::vector<PlantedObjectImage> generate_planted_objects(
    std::size_t count, const PlantedObjectSpec& spec, Rng& rng);

// Just the images, e.g. for training.
std::vector<Image> planted_object_images(std::size_t count,
                                         const PlantedObjectSpec& spec,
                                         Rng& rng);

}  // namespace sbam

#endif  // SBAM_SYNTHETIC_H_
