#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dzo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

/// One machine-readable check line: "CHECK <name> PASS|FAIL <detail>".
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidateOptions {
  std::vector<double> betas = {2, 3, 4, 5, 6};   // kernel
  int n_max = 50;                                // mixing
  int er_samples = 20;                           // mixing
  std::size_t samples = 100000;                  // estimator: unbiasedness and second moment
  std::size_t bias_samples = 1000000;            // estimator: bias scaling
  std::uint64_t seed = 20240601;
};

std::vector<CheckResult> validate_kernel(const ValidateOptions& opt);
std::vector<CheckResult> validate_mixing(const ValidateOptions& opt);
std::vector<CheckResult> validate_estimator(const ValidateOptions& opt);
/// The three parts of validate_estimator: affine unbiasedness, bias scaling
/// on the Hölder probe, second-moment envelope and noise-term slopes.
std::vector<CheckResult> estimator_unbiased_checks(const ValidateOptions& opt);
std::vector<CheckResult> estimator_bias_checks(const ValidateOptions& opt);
std::vector<CheckResult> estimator_moment_checks(const ValidateOptions& opt);
std::vector<CheckResult> validate_hard(const ValidateOptions& opt);

/// Checks for one hard-instance configuration, over omega = plus, minus, alternating.
std::vector<CheckResult> hard_checks(double beta, double alpha, double T, int d, std::ostream* report);

/// Prints the lines and returns kOk or kValidation.
int report_checks(const std::string& suite, const std::vector<CheckResult>& checks, std::ostream& out);

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out);
int cmd_sweep(const std::string& config_path, std::optional<int> seeds, const std::string& out_dir,
              std::ostream& out);
int cmd_validate(const std::string& suite, const ValidateOptions& opt, std::ostream& out);
int cmd_ratefit(const std::string& csv_path, const std::string& column, double tail, std::ostream& out);
int cmd_hard_check(double beta, double alpha, double T, int d, std::ostream& out);

/// Runs `body`, mapping exceptions to exit codes and printing them to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace dzo::cli
