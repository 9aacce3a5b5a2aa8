/*
 * Copyright 2026 The semdist Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "semdist/error.hpp"

namespace semdist {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kBadLength: return "BadLength";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kNotNormalized: return "NotNormalized";
    case Errc::kBadClassId: return "BadClassId";
    case Errc::kBadFeature: return "BadFeature";
    case Errc::kEmptyUnion: return "EmptyUnion";
    case Errc::kNoSharedClasses: return "NoSharedClasses";
    case Errc::kDuplicateImageId: return "DuplicateImageId";
    case Errc::kMissingLabels: return "MissingLabels";
    case Errc::kUnknownImageId: return "UnknownImageId";
    case Errc::kInvalidConfig: return "InvalidConfig";
    case Errc::kParseError: return "ParseError";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::string_view source, std::size_t line, const std::string& what)
    : Error(Errc::kParseError, std::string(source) + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

}  // namespace semdist
