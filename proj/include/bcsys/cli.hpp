#ifndef BCSYS_CLI_HPP
#define BCSYS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace bcsys::cli {

enum ExitCode : int
{
    ok = 0,
    validation_error = 1,
    check_failed = 2,
};

/// Runs one subcommand. args excludes the program name.
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

/// Compact JSON with doubles printed to 17 significant digits and keys in
/// sorted order, so output is byte-stable for a fixed build.
std::string dump_json(nlohmann::json const & j);
/// Flat objects become a header and one row; a "rows" array of flat objects
/// becomes one line per row. Nested values are embedded as quoted JSON.
std::string dump_csv(nlohmann::json const & j);

}  // namespace bcsys::cli

#endif
