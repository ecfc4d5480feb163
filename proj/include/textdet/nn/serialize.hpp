#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "textdet/textcnn/model.hpp"

namespace textdet {

// "TCNN1" model file: 5 magic bytes, then one record per layer in fixed
// order (conv1..conv3, fc1, fc2, head_binary, head_label, deconv1, deconv2).
// A record is: u32 layer-kind tag, then weights and biases each as u32 ndim,
// u32 dims[], raw float32 data. All integers and reals little-endian.
// Round-trips are bit-exact.

namespace detail {

constexpr char kTcnnMagic[5] = {'T', 'C', 'N', 'N', '1'};
enum class LayerKind : std::uint32_t { conv = 1, linear = 2, deconv = 3 };

inline void write_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    os.write(b, 4);
}

inline std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("TCNN1: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_tensor(std::ostream& os, const Tensor& t, bool matrix_rank) {
    if (matrix_rank && t.h == 1 && t.w == 1 && t.n > 1) {
        write_u32(os, 2);
        write_u32(os, static_cast<std::uint32_t>(t.n));
        write_u32(os, static_cast<std::uint32_t>(t.c));
    } else if (t.n == 1 && t.h == 1 && t.w == 1) {
        write_u32(os, 1);
        write_u32(os, static_cast<std::uint32_t>(t.c));
    } else {
        write_u32(os, 4);
        write_u32(os, static_cast<std::uint32_t>(t.n));
        write_u32(os, static_cast<std::uint32_t>(t.c));
        write_u32(os, static_cast<std::uint32_t>(t.h));
        write_u32(os, static_cast<std::uint32_t>(t.w));
    }
    for (float v : t.data) write_u32(os, std::bit_cast<std::uint32_t>(v));
}

inline Tensor read_tensor(std::istream& is) {
    std::uint32_t ndim = read_u32(is);
    if (ndim < 1 || ndim > 4) throw std::runtime_error("TCNN1: bad tensor rank");
    std::uint32_t dims[4] = {1, 1, 1, 1};
    for (std::uint32_t i = 0; i < ndim; ++i) {
        dims[i] = read_u32(is);
        if (dims[i] == 0 || dims[i] > (1u << 24)) throw std::runtime_error("TCNN1: bad dimension");
    }
    Tensor t;
    if (ndim == 1)
        t = Tensor::vec(static_cast<int>(dims[0]));
    else if (ndim == 2)
        t = Tensor::matrix(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
    else
        t = Tensor(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
                   static_cast<int>(dims[3]));
    for (float& v : t.data) v = std::bit_cast<float>(read_u32(is));
    return t;
}

inline void write_record(std::ostream& os, LayerKind kind, const LayerParams& p) {
    write_u32(os, static_cast<std::uint32_t>(kind));
    write_tensor(os, p.weights, kind == LayerKind::linear);
    write_tensor(os, p.biases, false);
}

inline void read_record(std::istream& is, LayerKind expected, LayerParams& p) {
    auto kind = static_cast<LayerKind>(read_u32(is));
    if (kind != expected) throw std::runtime_error("TCNN1: unexpected layer kind");
    Tensor w = read_tensor(is);
    Tensor b = read_tensor(is);
    if (!w.same_shape(p.weights) || !b.same_shape(p.biases)) {
        // geometry differs (e.g. another class count): adopt the stored shape
        p.weights = Tensor(w.n, w.c, w.h, w.w);
        p.biases = Tensor(b.n, b.c, b.h, b.w);
        p.grad_weights = p.vel_weights = p.weights;
        p.grad_biases = p.vel_biases = p.biases;
    }
    p.weights = std::move(w);
    p.biases = std::move(b);
}

}  // namespace detail

inline void save_model(const TextCnnModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write model file: " + path);
    os.write(detail::kTcnnMagic, 5);
    using detail::LayerKind;
    detail::write_record(os, LayerKind::conv, model.conv1.p);
    detail::write_record(os, LayerKind::conv, model.conv2.p);
    detail::write_record(os, LayerKind::conv, model.conv3.p);
    detail::write_record(os, LayerKind::linear, model.fc1.p);
    detail::write_record(os, LayerKind::linear, model.fc2.p);
    detail::write_record(os, LayerKind::linear, model.head_binary.p);
    detail::write_record(os, LayerKind::linear, model.head_label.p);
    detail::write_record(os, LayerKind::deconv, model.deconv1.p);
    detail::write_record(os, LayerKind::deconv, model.deconv2.p);
    if (!os) throw std::runtime_error("failed while writing model file: " + path);
}

inline TextCnnModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file: " + path);
    char magic[5];
    is.read(magic, 5);
    if (!is || !std::equal(magic, magic + 5, detail::kTcnnMagic))
        throw std::runtime_error("not a TCNN1 model file: " + path);
    TextCnnModel model;
    using detail::LayerKind;
    detail::read_record(is, LayerKind::conv, model.conv1.p);
    detail::read_record(is, LayerKind::conv, model.conv2.p);
    detail::read_record(is, LayerKind::conv, model.conv3.p);
    detail::read_record(is, LayerKind::linear, model.fc1.p);
    detail::read_record(is, LayerKind::linear, model.fc2.p);
    detail::read_record(is, LayerKind::linear, model.head_binary.p);
    detail::read_record(is, LayerKind::linear, model.head_label.p);
    detail::read_record(is, LayerKind::deconv, model.deconv1.p);
    detail::read_record(is, LayerKind::deconv, model.deconv2.p);
    model.class_count = model.head_label.p.weights.n;
    model.head_label.in_features = model.head_label.p.weights.c;
    model.head_label.out_features = model.head_label.p.weights.n;
    return model;
}

}  // namespace textdet
