#pragma once

#include <stdexcept>
#include <string>

namespace draht {

//============================================================================
// Failures reading or writing files, or malformed input files.

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//----------------------------------------------------------------------------
// Violated codec preconditions and corrupt or inconsistent bitstreams.

struct CodecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//============================================================================

}  // namespace draht
