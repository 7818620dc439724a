#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace heckelab::cli {

/// Runs one subcommand. Exit code 0 on success, 1 on a library error, 2 on a usage error.
/// Errors are reported on `err` as "heckelab: <kind>: <message>".
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

/// Seed from HECKELAB_SEED if set, otherwise the library default.
std::uint64_t default_seed();

/// Deterministic invariant-suite report; `all_passed` receives the overall verdict.
std::string selfcheck_report(std::uint64_t seed, bool& all_passed);
/// Same suite with every threshold multiplied by `tolerance`.
std::string selfcheck_report_scaled(std::uint64_t seed, double tolerance, bool& all_passed);

/// Writes `body` to `path` through a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, const std::string& body);

}  // namespace heckelab::cli
