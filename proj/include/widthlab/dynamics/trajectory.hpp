#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "widthlab/errors.hpp"

namespace widthlab::dynamics {

// Time series of the network map on the train set plus tracked kernel
// entries. Row 0 always holds the initial state exactly.
struct Trajectory {
    std::string kind;  // "emp", "lo", "nlo"
    std::vector<double> times;
    Eigen::MatrixXd f;                        // times x M
    std::vector<std::pair<int, int>> tracked; // kernel entries
    Eigen::MatrixXd theta;                    // times x tracked.size()
};

struct CompareMetrics {
    double f_max_abs = 0.0;
    double f_rms = 0.0;        // absolute RMS over (time, point)
    double f_rms_rel = 0.0;    // relative to the reference's deviation scale
    double theta_max_abs = 0.0;
    double theta_rms = 0.0;
    double theta_rms_rel = 0.0;
};

// per-time errors of `predicted` against `reference`; GridMismatch if the
// time grids or tracked entries differ
CompareMetrics compare(const Trajectory& reference, const Trajectory& predicted);

}  // namespace widthlab::dynamics
