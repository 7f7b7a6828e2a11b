#include "widthlab/dynamics/trainset.hpp"

#include "widthlab/rng.hpp"

namespace widthlab::dynamics {

void TrainSet::validate() const {
    if (size() < 2) throw Error("train set needs at least 2 samples");
    if (inputs.cols() != labels.size()) throw Error("inputs/labels size mismatch");
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if ((inputs.col(i) - inputs.col(j)).norm() == 0.0)
                throw Error("duplicate train inputs " + std::to_string(i) + "," + std::to_string(j));
}

TrainSet synthetic_two_class(int size, int input_dim, std::uint64_t seed, double center_scale,
                             double noise) {
    if (size < 2 || size % 2 != 0) throw Error("two-class set size must be even and >= 2");
    SplitMix64 rng(seed);
    Eigen::VectorXd center(input_dim);
    for (int i = 0; i < input_dim; ++i) center(i) = rng.next_gaussian();
    center *= center_scale / center.norm();

    TrainSet set;
    set.inputs.resize(input_dim, size);
    set.labels.resize(size);
    for (int s = 0; s < size; ++s) {
        const double sign = s < size / 2 ? 1.0 : -1.0;
        for (int i = 0; i < input_dim; ++i)
            set.inputs(i, s) = sign * center(i) + noise * rng.next_gaussian();
        set.labels(s) = sign;
    }
    set.validate();
    return set;
}

}  // namespace widthlab::dynamics
