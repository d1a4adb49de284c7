#pragma once

#include <stdexcept>

namespace epkit {

// Relative tolerances used by the float backend. The exact backend ignores
// all of them: equality there means equality.
struct Tolerance {
    double rank_rel = 1e-10;     // singular values kept if > rank_rel * sigma_max * max(m, n)
    double residual_rel = 1e-10; // matrix identities hold if residual <= residual_rel * scale
    double psd_rel = 1e-10;      // eigenvalues >= -psd_rel * ||M||_2 count as nonnegative

    void validate() const {
        if (!(rank_rel > 0.0) || !(residual_rel > 0.0) || !(psd_rel > 0.0)) {
            throw std::invalid_argument("Tolerance: all fields must be strictly positive");
        }
    }
};

} // namespace epkit
