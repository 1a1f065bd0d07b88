// Copyright 2026 The scenefp Authors
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

#ifndef SCENEFP__ERRORS_HPP_
#define SCENEFP__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace scenefp
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Problems with the recording itself (malformed rows, bad ordering).
class InputError : public Error
{
public:
  using Error::Error;
};

class ParseError : public InputError
{
public:
  ParseError(std::size_t line, const std::string & what)
  : InputError("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class MonotonicityError : public InputError
{
public:
  explicit MonotonicityError(std::string track_id)
  : InputError("timestamps not strictly increasing in track '" + track_id + "'"),
    track_id_(std::move(track_id))
  {
  }

  const std::string & track_id() const noexcept { return track_id_; }

private:
  std::string track_id_;
};

class SchemaError : public InputError
{
public:
  using InputError::InputError;
};

class RangeError : public InputError
{
public:
  using InputError::InputError;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace scenefp

#endif  // SCENEFP__ERRORS_HPP_
