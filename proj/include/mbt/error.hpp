// Copyright 2026 The mbtlite Authors.
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

#ifndef MBT_ERROR_HPP_
#define MBT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace mbt {

// Root of every error the library throws. The CLI maps any mbt::Error to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent suite document. `model` and `element` locate the
// offending item when known (either may be empty).
class ModelError : public Error {
 public:
  ModelError(std::string model, std::string element, const std::string& message)
      : Error(format(model, element, message)),
        model_(std::move(model)),
        element_(std::move(element)) {}

  const std::string& model() const { return model_; }
  const std::string& element() const { return element_; }

 private:
  static std::string format(const std::string& model, const std::string& element,
                            const std::string& message) {
    if (model.empty() && element.empty()) return message;
    return model + "/" + element + ": " + message;
  }

  std::string model_;
  std::string element_;
};

// Lexical or syntax error in guard/action text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& message)
      : Error(message + " at position " + std::to_string(position)),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

// Runtime failure while evaluating a guard or action.
class EvalError : public Error {
 public:
  enum class Kind { kUndefinedVariable, kTypeMismatch, kNonBoolean, kOverflow };

  EvalError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Bad stop-condition or generator spec string.
class SpecError : public Error {
 public:
  using Error::Error;
};

// The step loop cannot continue (dead end, exhausted plan, replan limit,
// missing adapter binding).
class EngineError : public Error {
 public:
  using Error::Error;
};

// No enabled out-edge and no shared-state jump available.
class DeadEndError : public EngineError {
 public:
  using EngineError::EngineError;
};

// QuickRandom has no reachable unvisited edge left.
class PlanningExhaustedError : public EngineError {
 public:
  using EngineError::EngineError;
};

// QuickRandom/A* plans kept running into false guards.
class ReplanLimitError : public EngineError {
 public:
  using EngineError::EngineError;
};

// Shortest-path target cannot be reached from the current position.
class UnreachableError : public EngineError {
 public:
  using EngineError::EngineError;
};

// Code-coverage ingestion or artifact parsing problem.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Invalid simulated-SUT description.
class SutError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbt

#endif  // MBT_ERROR_HPP_
