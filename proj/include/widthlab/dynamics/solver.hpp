#pragma once

#include "widthlab/dynamics/kernel.hpp"
#include "widthlab/dynamics/tables.hpp"
#include "widthlab/dynamics/trajectory.hpp"

namespace widthlab::dynamics {

// ---- leading order -------------------------------------------------------

// gradient flow: f(t) = y + e^{-t Theta0} (f0 - y), kernel constant
Trajectory lo_solution(const KernelState& state, const std::vector<double>& times,
                       const std::vector<std::pair<int, int>>& tracked);

// discrete steps: residual evolves by (1 - eta Theta0)^t.
// StabilityError if eta * lambda_max >= 2.
Trajectory lo_solution_discrete(const KernelState& state, double eta, int steps, int record_every,
                                const std::vector<std::pair<int, int>>& tracked);

// ---- first width correction, continuous time ------------------------------

// Kernel correction at time t for the train pair (a, b), evaluated in the
// eigenbasis with series fallbacks near zero rates.
double nlo_theta(const KernelState& state, const NLOTables& tables, int a, int b, double t);

// t -> infinity limit; DegenerateKernel when an eigenvalue is (numerically)
// zero, since the limit then diverges
double theta1_infinity(const KernelState& state, const NLOTables& tables, int a, int b);

// independent oracle: iterated composite-Simpson quadrature of the defining
// double integral (o3 term plus o4 double integral)
double nlo_theta_quadrature(const KernelState& state, const NLOTables& tables, int a, int b,
                            double t, int panels = 256);

// full corrected trajectory: f = LO + f1, theta = Theta0 + Theta1(t)
Trajectory nlo_solution(const KernelState& state, const NLOTables& tables,
                        const std::vector<double>& times,
                        const std::vector<std::pair<int, int>>& tracked);

// quadrature oracle for the f correction at one time (test cross-check)
Eigen::VectorXd nlo_f_quadrature(const KernelState& state, const NLOTables& tables, double t,
                                 int panels = 512);

// ---- first width correction, discrete time --------------------------------

// Sums the step recursions for the corrected kernel and map, including the
// second- and third-derivative step terms that vanish in continuous time.
Trajectory nlo_discrete(const KernelState& state, const NLOTables& tables, double eta, int steps,
                        int record_every, const std::vector<std::pair<int, int>>& tracked);

}  // namespace widthlab::dynamics
