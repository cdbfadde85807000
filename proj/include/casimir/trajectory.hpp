// trajectory.hpp — one recorded point of an open-system trajectory

#pragma once

namespace casimir {

struct TrajectoryRecord {
    double t_kappa0{0.0};  // time in units of 1/kappa0
    double n_wall{0.0};
    double n_mode1{0.0};
    double n_mode2{0.0};
    double J_w{0.0};
    double J_c{0.0};
    double S{0.0};
    double Sigma_dot{0.0};
    double trace{0.0};
    double min_eig{0.0};
};

} // namespace casimir
