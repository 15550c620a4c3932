// Copyright 2026 The slasim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace slasim {

// Base class for faults that indicate a bug in the simulator or an event
// sequence that the model forbids. The CLI maps these to exit code 3.
class SimFault : public std::runtime_error {
 public:
  explicit SimFault(const std::string& what) : std::runtime_error(what) {}
};

class PastTimeError : public SimFault {
 public:
  explicit PastTimeError(const std::string& what) : SimFault(what) {}
};

class HandlerFault : public SimFault {
 public:
  explicit HandlerFault(const std::string& what) : SimFault(what) {}
};

class IllegalTransitionError : public SimFault {
 public:
  explicit IllegalTransitionError(const std::string& what) : SimFault(what) {}
};

class NoWorkersError : public SimFault {
 public:
  explicit NoWorkersError(const std::string& what) : SimFault(what) {}
};

class NotBootingError : public SimFault {
 public:
  explicit NotBootingError(const std::string& what) : SimFault(what) {}
};

class WorkerBusyError : public SimFault {
 public:
  explicit WorkerBusyError(const std::string& what) : SimFault(what) {}
};

class MisalignedLeaseError : public SimFault {
 public:
  explicit MisalignedLeaseError(const std::string& what) : SimFault(what) {}
};

class JobNotFinishedError : public SimFault {
 public:
  explicit JobNotFinishedError(const std::string& what) : SimFault(what) {}
};

class DuplicateJobError : public SimFault {
 public:
  explicit DuplicateJobError(const std::string& what) : SimFault(what) {}
};

// Configuration rejection: malformed document, unknown field, out-of-range
// value. Carries the offending field path. The CLI maps these to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace slasim
