#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "plap/profile.hpp"

namespace plap::cli {

enum ExitCode : int { ok = 0, assertion = 1, usage = 2, numerical = 3 };

/// Runs one command line (without the program name). Output goes to `out`, or to
/// the --out file; diagnostics and help text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Profile literal: const:<v>, step:<v1>,<v2>[@<split>], file:<path>,
/// randwell:a=<a>,lo=<lo>,hi=<hi>,cells=<k> (seeded by `seed`).
Profile parse_profile(const std::string& literal, const PExponent& p, Role role,
                      std::uint64_t seed);

}  // namespace plap::cli
