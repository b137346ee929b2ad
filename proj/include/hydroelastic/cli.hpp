#pragma once

#include <iosfwd>

namespace hydroelastic::cli {

/// hydroelastic {simulate|sweep|probe|report} --config PATH --out DIR
///   [--set key=value]... [--threads N] [--seed S]
/// Returns 0 on success, 1 when a run fails, 2 on usage or config errors.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hydroelastic::cli
