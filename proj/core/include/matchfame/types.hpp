#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace matchfame {

// Row/column/node index. All indices are 0-based.
using Index = std::int32_t;
using EdgeId = std::int32_t;

// Raised when input data is malformed or inconsistent (bad shapes, missing
// edges, disconnected graphs). Programming errors use std::logic_error.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace matchfame
