#include "cmrp/presets.hpp"

#include "cmrp/errors.hpp"

namespace cmrp {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "example1", "example2", "example2-cou", "example3", "exp-exp-ruin"};
  return names;
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

Preset make_preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "example1") {
    // two-point mixing on (1,inf)^2; the mixing law itself is a default
    // choice (shifted gammas), the kernel/claims/tilt are pinned
    p.model.mixing1 = Law::gamma(2.0, 2.0, 1.0);
    p.model.mixing2 = Law::gamma(2.0, 2.0, 1.0);
    p.model.kernel = Kernel::hyper_exp_half();
    p.model.claims = Law::gamma(1.0, 2.0);
    p.tilt = example1_tilt(p.model, /*zeta=*/1.0, /*c=*/2.5);
  } else if (name == "example2") {
    p.model.mixing1 = Law::gamma(2.0, 12.0);
    p.model.kernel = Kernel::gamma_theta(1.1);
    p.model.claims = Law::exponential(1.0);
    p.tilt = example2_tilt(p.model, /*k=*/1.1, /*eta=*/1.0, /*c=*/0.1,
                           /*d=*/1.0, /*b1=*/2.0, /*b2=*/1.5, /*a=*/12.0);
  } else if (name == "example2-cou") {
    p.model.mixing1 = Law::gamma(2.0, 12.0);
    p.model.kernel = Kernel::gamma_theta(1.1);
    p.model.claims = Law::exponential(1.0);
    // reversal region: b2 > b1 k / d = 2.2
    p.tilt = example2_cou_tilt(p.model, /*k=*/1.1, /*eta=*/1.0, /*d=*/1.0,
                               /*b1=*/2.0, /*b2=*/4.4, /*a=*/12.0);
  } else if (name == "example3") {
    p.model.mixing1 = Law::gamma(3.0, 2.0);
    p.model.kernel = Kernel::exp_theta();
    p.model.claims = Law::uniform(0.0, 1.0);
    p.tilt = with_exp_mixing_xi(p.model, wang_tilt(p.model, /*c=*/2.0),
                                /*r=*/0.5);
  } else if (name == "exp-exp-ruin") {
    p.model.mixing1 = Law::gamma(2.0, 2.0);
    p.model.kernel = Kernel::exp_theta();
    p.model.claims = Law::exponential(1.0);
    p.tilt = example2_tilt(p.model, /*k=*/1.0, /*eta=*/1.0, /*c=*/0.5,
                           /*d=*/0.5, /*b1=*/2.0, /*b2=*/1.5, /*a=*/2.0);
    p.ruin_u = {0.5, 1.0, 2.0, 5.0};
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  p.model.validate();
  return p;
}

}  // namespace cmrp
