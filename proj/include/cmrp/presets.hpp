#ifndef CMRP_PRESETS_HPP
#define CMRP_PRESETS_HPP

#include <string>
#include <vector>

#include "cmrp/model.hpp"
#include "cmrp/tilt.hpp"

namespace cmrp {

/// A shipped model + tilt pair with default experiment budgets.
struct Preset {
  std::string name;
  RiskModel model;
  Tilt tilt;
  std::vector<double> martingale_times{1.0, 5.0, 10.0};
  std::size_t martingale_n = 100'000;
  double pathlaw_t = 5.0;
  std::size_t pathlaw_n = 20'000;
  std::vector<double> drift_times{5.0, 10.0};
  std::size_t drift_n = 100'000;
  std::vector<double> ruin_u;
  std::size_t ruin_n = 100'000;
  std::size_t ruin_max_claims = 100'000;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
Preset make_preset(const std::string& name);

}  // namespace cmrp

#endif  // CMRP_PRESETS_HPP
