// cli.hpp
// Command-line front end and certificate serialization.

#pragma once

#include "orbike/enumerate.hpp"
#include "orbike/lct.hpp"
#include "orbike/oracle.hpp"
#include "orbike/orbifold.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace orbike::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kComputed = 0, kInvalidInput = 1, kResourceCap = 2 };

using Record = nlohmann::ordered_json;

/// Certificate for one tuple: echoed input, every inequality as exact
/// "p/q" strings, the verdict and caveats. timing_us is the only field that
/// varies between identical runs.
Record check_certificate(const RamTuple& t, bool allow_unit_orders);

/// Rebuilds the tuple from a certificate's "input" block and re-evaluates it.
Record recheck_certificate(const Record& certificate);

Record tuple_record(const TupleRecord& rec);
Record family_record(const SylvesterFamily& fam);
Record ke_record(const char* kind, const KeReport& rep);

/// Flattens nested objects with dotted keys; arrays of scalars are joined
/// with spaces. Used for the CSV and text encodings.
std::vector<std::pair<std::string, std::string>> flatten(const Record& rec);

/// Entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbike::cli
