#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dvrforms {

// Exit code contract: 0 success / decided-true, 2 decided-false,
// 1 error (parse failure, precision exhaustion, shape mismatch, ...).
struct CliOptions {
    bool machine = false;                     // --output machine
    std::optional<int> precision;             // --precision override
    std::optional<std::string> witness_path;  // --witness <path>
};

int cmd_validate(const std::string& file, const CliOptions& opt, std::ostream& out,
                 std::ostream& err);
int cmd_invariants(const std::string& file, const CliOptions& opt, std::ostream& out,
                   std::ostream& err);
int cmd_normal_form(const std::string& file, const CliOptions& opt, std::ostream& out,
                    std::ostream& err);
int cmd_congruent(const std::string& file_a, const std::string& file_b, const CliOptions& opt,
                  std::ostream& out, std::ostream& err);
int cmd_realisable(const std::string& kind, std::int64_t p, int precision, int epsilon,
                   const std::string& d_list, const CliOptions& opt, std::ostream& out,
                   std::ostream& err);
// Re-multiplies X'^* A X and compares with B.
int cmd_verify(const std::string& file_a, const std::string& file_b,
               const std::string& witness_file, const CliOptions& opt, std::ostream& out,
               std::ostream& err);

} // namespace dvrforms
