// Copyright 2026 The sgrl Authors
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

#ifndef SGRL_ERRORS_H_
#define SGRL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sgrl {

// All library failures derive from Error so the CLI can map them onto exit
// codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (map files, policy files, sample CSVs, configs).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  int line() const { return line_; }

 private:
  int line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A query that cannot be answered: blocked endpoint, no path.
class QueryError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public QueryError {
 public:
  using QueryError::QueryError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class SensingError : public Error {
 public:
  using Error::Error;
};

class EnvironmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgrl

#endif  // SGRL_ERRORS_H_
