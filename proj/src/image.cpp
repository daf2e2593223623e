// Copyright 2026 The Spectradec Authors. All Rights Reserved.
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

#include "spectradec/image.hpp"

namespace spectradec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptData: return "CorruptData";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kWrongChannelCount: return "WrongChannelCount";
    case ErrorCode::kIndivisibleDimensions: return "IndivisibleDimensions";
    case ErrorCode::kCallbackShapeMismatch: return "CallbackShapeMismatch";
    case ErrorCode::kPatchCountMismatch: return "PatchCountMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kPartitionMetadataMismatch:
      return "PartitionMetadataMismatch";
    case ErrorCode::kCutoffOutOfRange: return "CutoffOutOfRange";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kOddChannelCount: return "OddChannelCount";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kWeightShapeMismatch: return "WeightShapeMismatch";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kIncompatibleStack: return "IncompatibleStack";
    case ErrorCode::kCodecError: return "CodecError";
    case ErrorCode::kInsufficientImages: return "InsufficientImages";
    case ErrorCode::kInsufficientSpecs: return "InsufficientSpecs";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(ColorSpace cs) {
  switch (cs) {
    case ColorSpace::kRgb: return "RGB";
    case ColorSpace::kLuma: return "Luma";
    case ColorSpace::kFeature: return "Feature";
  }
  return "Unknown";
}

PlanarImage::PlanarImage(int channels, int height, int width, ColorSpace cs)
    : Planes<float>(channels, height, width) {
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kWrongChannelCount,
                "images have 1 or 3 channels, got " + std::to_string(channels));
  }
  set_colorspace(cs);
}

void PlanarImage::set_colorspace(ColorSpace cs) {
  if (channels() == 1 && cs == ColorSpace::kRgb) {
    throw Error(ErrorCode::kWrongChannelCount,
                "single-channel image cannot be tagged RGB");
  }
  if (channels() == 3 && cs == ColorSpace::kLuma) {
    throw Error(ErrorCode::kWrongChannelCount,
                "three-channel image cannot be tagged Luma");
  }
  colorspace_ = cs;
}

PlanarImage PlanarImage::constant(int channels, int height, int width,
                                  float value, ColorSpace cs) {
  PlanarImage img(channels, height, width, cs);
  img.data().setConstant(value);
  return img;
}

}  // namespace spectradec
