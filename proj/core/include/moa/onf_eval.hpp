#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "moa/onf.hpp"

namespace moa {

using BufferMap = std::map<std::string, std::vector<double>>;

// Reference executor for normal-form programs: runs every statement in
// order, loops ascending, and accumulates each summation left to right.
// Buffers must match the program's declared lengths under the given n.
BufferMap eval_onf(const OnfProgram& p, BufferMap buffers, std::int64_t n);

}  // namespace moa
