// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace osmheight {

// Exception hierarchy. The CLI maps InputError -> exit 2, ContractError -> 3,
// anything else -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input files and records.
class InputError : public Error {
 public:
  using Error::Error;
};

// A record is missing a required field. `field()` names it.
class ParseError : public InputError {
 public:
  ParseError(const std::string& field, const std::string& what)
      : InputError(what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class EmptyNetworkError : public InputError {
 public:
  using InputError::InputError;
};

class ProjectionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Interface contract violated, e.g. a feature-manifest hash mismatch.
class InsideBuildingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoDetectionsError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class FeatureError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class AvailabilityError : public Error {
 public:
  using Error::Error;
};

class ExportError : public Error {
 public:
  using Error::Error;
};

}  // namespace osmheight
