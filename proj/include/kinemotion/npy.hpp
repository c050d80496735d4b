#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kinemotion::npy {

/// NPY format 1.0, little-endian float32, C order.
std::string encode_float32(std::span<const std::size_t> shape, std::span<const float> data);

struct Float32Array {
    std::vector<std::size_t> shape;
    std::vector<float> data;
};

/// Reads what encode_float32 writes; throws FormatError otherwise.
Float32Array decode_float32(std::string_view bytes);

}  // namespace kinemotion::npy
