// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace corgi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by dataset loading; carries the 1-based line and offending field.
class DatasetError : public Error {
 public:
  DatasetError(const std::string& message, std::size_t line = 0, std::string field = {})
      : Error(message), line_(line), field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

class PromptError : public Error {
 public:
  using Error::Error;
};

class TeacherError : public Error {
 public:
  enum class Kind { transport, exhausted_retries, authentication, truncated, bad_response, unscripted, empty_reply };

  TeacherError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StageError : public Error {
 public:
  StageError(std::string stage, std::string kind, const std::string& message)
      : Error(message), stage_(std::move(stage)), kind_(std::move(kind)) {}

  const std::string& stage() const { return stage_; }
  const std::string& kind() const { return kind_; }

 private:
  std::string stage_;
  std::string kind_;
};

}  // namespace corgi
