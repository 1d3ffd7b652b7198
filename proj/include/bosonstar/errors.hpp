#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosonstar {

/// Base of every library error; `category()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { Validation, Numerical, Check };

  Error(Category c, const std::string& what) : std::runtime_error(what), category_(c) {}
  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(Category::Numerical, what) {}
};

class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, std::size_t history)
      : NumericalError(what), history_length(history) {}
  std::size_t history_length;
};

class DivergentIterate : public NumericalError {
 public:
  DivergentIterate(const std::string& what, std::size_t history)
      : NumericalError(what), history_length(history) {}
  std::size_t history_length;
};

class NonFinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NegativeWeight : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureTailTooLarge : public NumericalError {
 public:
  QuadratureTailTooLarge(const std::string& what, double tail)
      : NumericalError(what), tail_estimate(tail) {}
  double tail_estimate;
};

class MaxProfilesExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(Category::Validation, what) {}
};

class ZeroField : public InvalidArgument {
 public:
  ZeroField() : InvalidArgument("field has zero norm") {}
};

class InsufficientSnapshots : public InvalidArgument {
 public:
  InsufficientSnapshots(std::size_t have, std::size_t need)
      : InvalidArgument("need at least " + std::to_string(need) + " snapshots, have " +
                        std::to_string(have)) {}
};

class NotAPartition : public InvalidArgument {
 public:
  explicit NotAPartition(double defect)
      : InvalidArgument("sum of squares deviates from 1 by " + std::to_string(defect)) {}
};

class NotTightOnGrid : public Error {
 public:
  explicit NotTightOnGrid(const std::string& what) : Error(Category::Check, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(Category::Validation, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> f)
      : Error(Category::Validation, join(f)), fields(std::move(f)) {}
  std::vector<std::string> fields;

 private:
  static std::string join(const std::vector<std::string>& f) {
    std::string s = "invalid config fields:";
    for (const auto& x : f) s += " " + x;
    return s;
  }
};

}  // namespace bosonstar
