#include "widthlab/io/idx.hpp"

#include <fstream>
#include <vector>

namespace widthlab::io {

namespace {

std::uint32_t read_be32(std::istream& is, std::size_t offset, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw FormatError("unexpected end of file in '" + path + "'", offset);
    return std::uint32_t(b[0]) << 24 | std::uint32_t(b[1]) << 16 | std::uint32_t(b[2]) << 8 |
           std::uint32_t(b[3]);
}

}  // namespace

dynamics::TrainSet load_mnist(const std::string& images_path, const std::string& labels_path,
                              int class_a, int class_b, int per_class) {
    if (per_class < 1) throw Error("per_class must be >= 1");

    std::ifstream labels_in(labels_path, std::ios::binary);
    if (!labels_in) throw IoError("cannot open '" + labels_path + "'");
    if (read_be32(labels_in, 0, labels_path) != 0x00000801u)
        throw FormatError("bad label magic in '" + labels_path + "'", 0);
    const std::uint32_t n_labels = read_be32(labels_in, 4, labels_path);
    std::vector<unsigned char> labels(n_labels);
    labels_in.read(reinterpret_cast<char*>(labels.data()), n_labels);
    if (!labels_in) throw FormatError("truncated label data in '" + labels_path + "'", 8);

    std::ifstream images_in(images_path, std::ios::binary);
    if (!images_in) throw IoError("cannot open '" + images_path + "'");
    if (read_be32(images_in, 0, images_path) != 0x00000803u)
        throw FormatError("bad image magic in '" + images_path + "'", 0);
    const std::uint32_t n_images = read_be32(images_in, 4, images_path);
    const std::uint32_t rows = read_be32(images_in, 8, images_path);
    const std::uint32_t cols = read_be32(images_in, 12, images_path);
    if (n_images != n_labels)
        throw FormatError("image/label count mismatch in '" + images_path + "'", 4);
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;

    // first per_class samples of each class, in file order
    std::vector<int> idx_a, idx_b;
    for (std::uint32_t i = 0; i < n_labels; ++i) {
        if (labels[i] == class_a && static_cast<int>(idx_a.size()) < per_class)
            idx_a.push_back(static_cast<int>(i));
        else if (labels[i] == class_b && static_cast<int>(idx_b.size()) < per_class)
            idx_b.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(idx_a.size()) < per_class)
        throw MissingClass("class " + std::to_string(class_a) + " has only " +
                           std::to_string(idx_a.size()) + " samples");
    if (static_cast<int>(idx_b.size()) < per_class)
        throw MissingClass("class " + std::to_string(class_b) + " has only " +
                           std::to_string(idx_b.size()) + " samples");

    dynamics::TrainSet set;
    set.inputs.resize(pixels, 2 * per_class);
    set.labels.resize(2 * per_class);
    std::vector<unsigned char> buffer(pixels);
    auto load_image = [&](int file_index, int column, double label) {
        images_in.seekg(16 + static_cast<std::streamoff>(file_index) * pixels);
        images_in.read(reinterpret_cast<char*>(buffer.data()), pixels);
        if (!images_in)
            throw FormatError("truncated image data in '" + images_path + "'",
                              16 + static_cast<std::size_t>(file_index) * pixels);
        for (std::size_t p = 0; p < pixels; ++p)
            set.inputs(p, column) = buffer[p] / 255.0;
        set.labels(column) = label;
    };
    for (int k = 0; k < per_class; ++k) load_image(idx_a[k], k, +1.0);
    for (int k = 0; k < per_class; ++k) load_image(idx_b[k], per_class + k, -1.0);
    set.validate();
    return set;
}

}  // namespace widthlab::io
