#pragma once

#include <stdexcept>
#include <string>

namespace gpf {

// Invalid user input (bad graph, bad descriptor, out-of-range parameter).
// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was exceeded (enumeration size, Fock dimension, sweep
// width). Never a silent truncation. The CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gpf
