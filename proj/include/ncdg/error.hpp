#pragma once

#include <stdexcept>
#include <string>

namespace ncdg {

// Malformed input: bad endpoints, unbalanced strings, unparsable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested family (after lexical restrictions) has no member.
class NoParse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncdg
