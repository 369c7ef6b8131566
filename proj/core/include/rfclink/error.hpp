/* Copyright 2026 The rfclink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace rfclink {

// Base of every error raised by the library. Callers that only care about
// "something failed" catch this; the subclasses carry the failure kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RFCLINK_DECLARE_ERROR(Name)         \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// corpus
RFCLINK_DECLARE_ERROR(NetworkError);
RFCLINK_DECLARE_ERROR(NotFound);
// header diagrams
RFCLINK_DECLARE_ERROR(MalformedRow);
// dataset
RFCLINK_DECLARE_ERROR(UnknownLabel);
RFCLINK_DECLARE_ERROR(DanglingAnnotation);
RFCLINK_DECLARE_ERROR(TooFewSamples);
RFCLINK_DECLARE_ERROR(ParseError);
// numerics and models
RFCLINK_DECLARE_ERROR(ShapeMismatch);
RFCLINK_DECLARE_ERROR(IdOutOfRange);
RFCLINK_DECLARE_ERROR(EmptyInput);
RFCLINK_DECLARE_ERROR(ClassOutOfRange);
// training and evaluation
RFCLINK_DECLARE_ERROR(ZeroSamples);
RFCLINK_DECLARE_ERROR(EmptyTrainingSet);
RFCLINK_DECLARE_ERROR(UnknownKind);
RFCLINK_DECLARE_ERROR(ConfigError);

#undef RFCLINK_DECLARE_ERROR

}  // namespace rfclink
