// Copyright 2026 The rvmmc Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace rvmmc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or out-of-range parameter.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Rejection sampling ran out of attempts.
class GenerationError : public Error {
  public:
    using Error::Error;
};

/// Malformed input text. The message carries the line/field location.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A problem exceeds a solver's hard size limit.
class SizeLimitError : public Error {
  public:
    using Error::Error;
};

/// An instance admits no feasible cutset.
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

/// Structural problem with an embedding handed to an operation that needs a valid one.
class EmbeddingError : public Error {
  public:
    using Error::Error;
};

}  // namespace rvmmc
