#pragma once

#include "mpseq/types.hpp"

#include <string>
#include <vector>

namespace mpseq {

/// One invariant violation found in a library. `mp_id` is empty for
/// library-level problems.
struct Violation {
  std::string mp_id;
  std::string field;
  std::string message;
};

/// Checks every invariant of a single learned MP.
std::vector<Violation> validate_mp(const LearnedMP& mp);

/// Collects every invariant violation across all entries; an empty result
/// means the library is valid.
std::vector<Violation> validate_library(const MPLibrary& lib);

std::string describe(const std::vector<Violation>& violations);

}  // namespace mpseq
