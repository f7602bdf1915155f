#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpigeon/pointer.hpp"
#include "qpigeon/report.hpp"

namespace qpigeon::cli {

inline constexpr int kSchemaVersion = 1;

enum class Verb { kVerify, kWeakValue, kAbl, kSweep, kSample, kDemoSequential };
enum class Format { kText, kJson, kCsv };

struct Command {
  Verb verb = Verb::kVerify;
  Format format = Format::kText;
  std::string output_path;                      // empty = stdout
  double tolerance = 1e-10;                     // verify, weak-value, abl
  std::string observable = "total";             // weak-value, abl
  std::vector<double> epsilons = kDefaultEpsilons;  // sweep
  double sigma = 1.0;
  double half_width = 10.0;
  int n_points = 1024;
  bool postselect = true;
  long long shots = 100000;                     // sample
  std::uint64_t seed = 1;
  std::string measure = "none";                 // sample
  std::string order = "0,1;1,2";                // demo-sequential
  std::string echoed;                           // reconstructed invocation
};

// Thrown for --help/--version: text goes to stdout, exit code 0.
struct HelpRequested {
  std::string text;
};

// Thrown for malformed invocations: message to stderr, exit code 2.
struct UsageError {
  std::string message;
};

// argv without the program name. Inserts the default verb `verify` when the
// first token is not a verb.
Command parse_command(const std::vector<std::string>& argv);

Report execute(const Command& cmd);

// text: aligned check table; json: stable-key schema; csv: data rows only
// (throws when the report has none).
std::string render(const Report& report, Format format);

// Parse + execute + render + write. Exit code 0 = all checks pass,
// 1 = failed check or execution error, 2 = usage error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace qpigeon::cli
