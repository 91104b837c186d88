// Copyright 2026 The fieldseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "fieldseg/raster.hpp"

namespace fieldseg {

/// Reads an 8-bit PNG as RGB. Grayscale files are expanded, alpha is dropped.
RgbImage read_png_rgb(const std::string& path);

/// Reads an 8-bit single-channel PNG. Colour or alpha channels raise InputError.
GrayImage read_png_gray(const std::string& path);

/// Grayscale PNG thresholded at 128 (>= 128 is set).
BinaryMask read_png_mask(const std::string& path);

void write_png_rgb(const std::string& path, const RgbImage& img);
void write_png_gray(const std::string& path, const GrayImage& img);

}  // namespace fieldseg
