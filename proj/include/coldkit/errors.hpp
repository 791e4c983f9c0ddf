// Copyright 2026 The coldkit Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coldkit {

// Every failure raised by the library derives from Error and carries a
// stable kind name. The CLI prints "<kind>: <message>" on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define COLDKIT_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

COLDKIT_DEFINE_ERROR(MalformedFile)
COLDKIT_DEFINE_ERROR(InvariantViolation)
COLDKIT_DEFINE_ERROR(FeatureDimMismatch)
COLDKIT_DEFINE_ERROR(PlacementExhausted)
COLDKIT_DEFINE_ERROR(UnknownTarget)
COLDKIT_DEFINE_ERROR(UnknownId)
COLDKIT_DEFINE_ERROR(MissingFeature)
COLDKIT_DEFINE_ERROR(NoValidAnchor)
COLDKIT_DEFINE_ERROR(AnchorNotInMap)
COLDKIT_DEFINE_ERROR(ArityMismatch)
COLDKIT_DEFINE_ERROR(UnknownCategory)
COLDKIT_DEFINE_ERROR(MissingScene)
COLDKIT_DEFINE_ERROR(TooFewPairs)
COLDKIT_DEFINE_ERROR(ZeroNormVector)

#undef COLDKIT_DEFINE_ERROR

// Raised by the instruction parser; offset is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error("ParseError", message + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace coldkit
