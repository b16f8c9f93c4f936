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

#ifndef SBAM_ERRORS_H_
#define SBAM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sbam {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Array or batch dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A MaskingConfig / TrainConfig / config file violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input bytes are readable but not in the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The reconstruction loss is undefined when nothing is masked.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

// PIMR is undefined when all pooled performances are equal.
class DegenerateSweepError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbam

#endif  // SBAM_ERRORS_H_
