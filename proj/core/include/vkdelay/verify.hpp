#pragma once

#include <string>
#include <vector>

#include "vkdelay/config.hpp"

namespace vkd {

struct VerifyCheck {
  std::string suite;
  std::string name;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it was compared against
  bool pass = false;
};

const std::vector<std::string>& verify_suite_names();

// Runs one named suite ("stencils", "airy", "bracket", "tstar", "energy",
// "qbounds"); all reference values are recomputed on the spot.
std::vector<VerifyCheck> run_verify_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace vkd
