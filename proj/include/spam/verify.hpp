#pragma once

#include "spam/expand.hpp"
#include "spam/model.hpp"

namespace spam {

// Oracle harness: random low-rank instances checked against the dense
// expansion, plus finite-difference gradient checks over every loss kind and
// the neural path.
struct VerifyOptions {
  int max_d = 6;
  int max_k = 3;
  int trials = 200;
  std::uint64_t seed = 1;
  long long oracle_cap = kDefaultOracleCap;
  double forward_tol = 1e-9;
  double grad_tol = 1e-4;
  // test hook: perturbs the decomposed forward result to prove the harness
  // detects contraction defects
  bool corrupt_forward = false;
};

struct VerifyReport {
  int trials = 0;
  double max_forward_dev = 0.0;
  double max_grad_rel_err = 0.0;
  double forward_tol = 0.0;
  double grad_tol = 0.0;
  bool pass = true;
};

VerifyReport run_verification(const VerifyOptions& opts);

}  // namespace spam
