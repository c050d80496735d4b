#include "kinemotion/npy.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>

#include "kinemotion/errors.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion::npy {

static_assert(std::endian::native == std::endian::little, "NPY export assumes a little-endian host");

namespace {
constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kPreamble = kMagicLen + 2 + 2;  // magic, version, header length
}  // namespace

std::string encode_float32(std::span<const std::size_t> shape, std::span<const float> data) {
    const std::size_t count = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    if (count != data.size()) throw FormatError("NPY shape does not match data length");

    std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        dict += std::to_string(shape[i]);
        if (shape.size() == 1 || i + 1 < shape.size()) dict += ',';
        if (i + 1 < shape.size()) dict += ' ';
    }
    dict += "), }";
    // pad so that preamble + header is a multiple of 64, header ends in '\n'
    std::size_t total = kPreamble + dict.size() + 1;
    dict.append((64 - total % 64) % 64, ' ');
    dict += '\n';
    if (dict.size() > 0xffff) throw FormatError("NPY header too long for format 1.0");

    std::string out;
    out.reserve(kPreamble + dict.size() + data.size() * sizeof(float));
    out.append(kMagic, kMagicLen);
    out += '\x01';
    out += '\x00';
    const auto hlen = static_cast<std::uint16_t>(dict.size());
    out += static_cast<char>(hlen & 0xff);
    out += static_cast<char>(hlen >> 8);
    out += dict;
    const auto* bytes = reinterpret_cast<const char*>(data.data());
    out.append(bytes, data.size() * sizeof(float));
    return out;
}

Float32Array decode_float32(std::string_view bytes) {
    if (bytes.size() < kPreamble || bytes.substr(0, kMagicLen) != std::string_view(kMagic, kMagicLen)) {
        throw FormatError("not an NPY file");
    }
    if (bytes[6] != '\x01') throw FormatError("unsupported NPY version");
    const std::size_t hlen = static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
    if (bytes.size() < kPreamble + hlen) throw FormatError("truncated NPY header");
    auto header = bytes.substr(kPreamble, hlen);
    if (header.find("'descr': '<f4'") == std::string_view::npos) throw FormatError("NPY dtype is not <f4");
    if (header.find("'fortran_order': False") == std::string_view::npos) throw FormatError("NPY must be C order");

    Float32Array arr;
    auto open = header.find("'shape': (");
    auto close = header.find(')', open);
    if (open == std::string_view::npos || close == std::string_view::npos) throw FormatError("NPY shape missing");
    auto dims = header.substr(open + 10, close - open - 10);
    for (auto part : split(dims, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        auto v = parse_int(part);
        if (!v || *v < 0) throw FormatError("bad NPY shape");
        arr.shape.push_back(static_cast<std::size_t>(*v));
    }
    const std::size_t count =
        std::accumulate(arr.shape.begin(), arr.shape.end(), std::size_t{1}, std::multiplies<>());
    auto payload = bytes.substr(kPreamble + hlen);
    if (payload.size() != count * sizeof(float)) throw FormatError("NPY payload size mismatch");
    arr.data.resize(count);
    std::memcpy(arr.data.data(), payload.data(), payload.size());
    return arr;
}

}  // namespace kinemotion::npy
