// Identity/oracle batteries behind the `verify` command: each suite runs a
// fixed set of exact checks and reports per-check status.
#pragma once

#include <string>
#include <vector>

namespace partlim {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // short human-readable context
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

struct VerifyBudget {
  unsigned appendix_order = 5;      // T_N / finite-difference identities
  unsigned s2_order = 6;            // digit-sum convolution and inversion
  unsigned cumulant_order = 15;     // decomposition N range
  unsigned cumulant_half_order = 8; // decomposition n range
  unsigned recurrence_half_order = 50;
  std::size_t grid_m = 8192;
  unsigned grid_iters = 40;
};

VerifyReport verify_appendix(const VerifyBudget& budget = {});
VerifyReport verify_cumulants(const VerifyBudget& budget = {});
VerifyReport verify_recurrences(const VerifyBudget& budget = {});
VerifyReport verify_convergence(const VerifyBudget& budget = {});

// suite: appendix | cumulants | recurrences | convergence | all
std::vector<VerifyReport> run_verify(const std::string& suite,
                                     const VerifyBudget& budget = {});

}  // namespace partlim
