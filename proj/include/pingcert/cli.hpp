#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "pingcert/search.hpp"

namespace pingcert {

// Exit statuses of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitNotCertified = 1, kExitInvalidInput = 2, kExitUndecided = 3 };

struct JobSpec {
  std::string command;  // certify-free, certify-semigroup, growth, bounds, verify
  std::string input;    // generating set, or a certificate for bounds/verify
  std::string out;      // certificate or report path; empty prints JSON to stdout
  std::string trace_out;
  SearchBudget budget;
  int radius = 6;
  std::optional<RationalInterval> kappa_f2;
  // bounds without a certificate file
  std::optional<int> found_in_power;
  std::string kind = "free";
};

int run_job(const JobSpec& spec, std::ostream& out, std::ostream& err);

// Parses argv into a JobSpec; thread count from PINGCERT_THREADS.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pingcert
