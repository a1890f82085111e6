#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxlat {

// Precondition violations: dimension mismatch, support violation, bad arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (files, unknown concepts, spec violations).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditioning on an event of probability zero.
class NullEventError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Non-finite loss or gradient during training.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::vector<std::size_t> concepts = {})
      : std::runtime_error(what), concepts_(std::move(concepts)) {}

  const std::vector<std::size_t>& concepts() const noexcept { return concepts_; }

 private:
  std::vector<std::size_t> concepts_;
};

}  // namespace boxlat
