#pragma once

#include <stdexcept>
#include <string>

namespace mta {

// Bad arguments or malformed input values (ranges, dimensions, non-finite data).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tiling assigns some element to more than one tile.
class OverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The synthetic generator could not place a tile within its attempt budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unparsable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mta
