// Copyright 2026 The mnn-assoc Authors
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

#ifndef MNN_ERROR_HPP_
#define MNN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mnn {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Vector/matrix dimension mismatches.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Values outside their allowed range (non-finite inputs, entries outside
// [-1, 1] where the pipeline requires rescaled data, intensities > 255, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or arguments: bad architectures, epochs = 0,
// train_count out of range, k < 2, unsatisfiable synthetic specs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Empty datasets or fewer points than clusters.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A pattern group received no training pairs during mapper training.
class MissingGroupData : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed files (WAV/PGM/RAWVEC/manifest/archive).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Archive carries a version this build does not understand.
class UnsupportedVersion : public FormatError {
 public:
  using FormatError::FormatError;
};

// Archive checksum does not match its body.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mnn

#endif  // MNN_ERROR_HPP_
