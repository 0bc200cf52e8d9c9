#pragma once

#include <stdexcept>
#include <string>

namespace imbal {

/// Input data is unreadable, malformed, or violates a dataset invariant.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace imbal
