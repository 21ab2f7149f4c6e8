#ifndef HRRIS_PARAMS_HPP
#define HRRIS_PARAMS_HPP

#include <cmath>

#include "hrris/channel.hpp"

namespace hrris {

enum class ActivePlacement { first, random };

/// Full system description: covertness target, power budgets, scene and
/// fading configuration, and which surface elements act as relays.
struct SystemParams {
    double epsilon = 0.01; // covertness level; constraint is D_01 <= 2 epsilon^2
    int l = 100;           // channel uses
    double pa_max_w = 0.0;
    double pr_max_w = 0.0;
    double noise_dbm = -80.0;
    // Per-receiver overrides; NaN means "same as noise_dbm". Using them
    // requires allow_unequal_noise.
    double noise_r_dbm = std::nan("");
    double noise_w_dbm = std::nan("");
    bool allow_unequal_noise = false;

    SceneGeometry geometry;
    ArraySpec arrays;
    FadingSpec fading;

    int active_count = 0;
    ActivePlacement active_placement = ActivePlacement::first;
};

void validate_system_params(const SystemParams &params);

} // namespace hrris

#endif
