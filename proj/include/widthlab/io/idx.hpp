#pragma once

#include <string>

#include "widthlab/dynamics/trainset.hpp"

namespace widthlab::io {

// Two classes of an IDX image/label pair mapped to a +-1 train set: pixels
// scaled to [0,1], the first `per_class` samples of each class in file order.
// Expects magics 0x00000803 (images) / 0x00000801 (labels), big-endian dims.
// Throws FormatError (with byte offset) and MissingClass.
dynamics::TrainSet load_mnist(const std::string& images_path, const std::string& labels_path,
                              int class_a, int class_b, int per_class);

}  // namespace widthlab::io
