#pragma once

#include <string>
#include <vector>

#include "oscwell/config.hpp"

namespace oscwell {

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;  // |value| <= bound, or containment as described by name
  bool pass = false;
};

struct VerifyStage {
  std::string name;
  std::vector<VerifyCheck> checks;
  bool pass = true;
};

struct VerifyReport {
  std::vector<VerifyStage> stages;
  bool pass = true;
  std::string failed_stage;  // first failing stage, empty when pass

  std::string to_json() const;
};

/// Runs the full theory-vs-Monte-Carlo pipeline, writes the CSV/JSON artifacts
/// into config.out_dir, and returns the machine-readable report. Numerical
/// errors propagate as exceptions naming the stage.
VerifyReport run_verify(const RunConfig& config);

}  // namespace oscwell
