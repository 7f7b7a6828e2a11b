#pragma once

#include <string>

#include "widthlab/ensemble/stats.hpp"
#include "widthlab/spectrum/duality.hpp"

namespace widthlab::spectrum {

struct SpectrumConfig {
    std::vector<int> widths = {32, 64, 128, 256};
    int seeds_per_width = 20;
    std::uint64_t master_seed = 1;
    int input_dim = 16;
    int hidden_layers = 2;
    net::Activation activation = net::Activation::relu;
    int trainset_size = 20;
    int hutchinson_probes = 64;
    int workers = 1;
};

struct SpectrumReport {
    SpectrumConfig config;
    // per width: mean |lambda_1(H) - lambda_1(Theta)| and rms B eigenvalue
    std::vector<double> widths;
    std::vector<double> top_gap_mean;
    std::vector<double> b_rms_mean;
    std::vector<std::array<double, 4>> h_moments_mean;      // tr H^m / dim-free, m=1..4
    std::vector<std::array<double, 4>> theta_moments_mean;  // tr Theta^m
    ensemble::SlopeFit top_gap_fit;
    ensemble::SlopeFit b_rms_fit;
};

// Width scan of the Hessian/kernel spectral relations: top-eigenvalue gap and
// the rms eigenvalue of B, both slope-fitted against width.
SpectrumReport eig_scaling(const SpectrumConfig& config);

std::string to_json(const SpectrumReport& report);
std::string to_csv(const SpectrumReport& report);

}  // namespace widthlab::spectrum
