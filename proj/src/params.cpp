#include "hrris/params.hpp"

#include <stdexcept>

namespace hrris {

void validate_system_params(const SystemParams &params) {
    if (!(params.epsilon > 0.0))
        throw std::invalid_argument("epsilon must be > 0");
    if (params.l < 1)
        throw std::invalid_argument("l must be >= 1");
    if (!(params.pa_max_w > 0.0))
        throw std::invalid_argument("pa_max must be > 0");
    if (!(params.pr_max_w > 0.0))
        throw std::invalid_argument("pr_max must be > 0");
    validate_geometry(params.geometry);
    validate_arrays(params.arrays);
    if (params.active_count < 0 || params.active_count > params.arrays.ris_elements())
        throw std::invalid_argument("active_count must lie in [0, N]");
    bool unequal = (!std::isnan(params.noise_r_dbm) && params.noise_r_dbm != params.noise_dbm) ||
                   (!std::isnan(params.noise_w_dbm) && params.noise_w_dbm != params.noise_dbm);
    if (unequal && !params.allow_unequal_noise)
        throw std::invalid_argument("unequal noise powers require allow_unequal_noise");
}

} // namespace hrris
