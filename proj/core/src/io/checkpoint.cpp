#include "hysop/io/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "binary.hpp"

namespace hysop::io {

using detail::put_f64;
using detail::put_string;
using detail::put_uint;

namespace {

constexpr char magic[4] = {'H', 'Y', 'C', 'K'};
constexpr std::uint32_t max_rank = 8;

std::string config_text(const models::KeyValues& kv) {
    std::string s;
    for (const auto& [k, v] : kv.items()) s += k + "=" + v + "\n";
    return s;
}

models::KeyValues parse_config_text(const std::string& text) {
    models::KeyValues kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) throw FormatError("checkpoint config line '" + line + "' is malformed");
        kv.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

}  // namespace

void write_checkpoint(std::ostream& out, const train::Checkpoint& ckpt) {
    out.write(magic, 4);
    put_uint<std::uint16_t>(out, hyck_version);
    put_uint<std::uint16_t>(out, 0);
    put_string(out, models::to_string(ckpt.arch));
    put_string(out, config_text(ckpt.config));
    put_f64(out, ckpt.scaler.h.min);
    put_f64(out, ckpt.scaler.h.max);
    put_f64(out, ckpt.scaler.b.min);
    put_f64(out, ckpt.scaler.b.max);
    put_uint<std::uint64_t>(out, ckpt.seed);
    put_uint<std::uint64_t>(out, ckpt.epochs);
    put_f64(out, ckpt.final_loss);
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.params.size()));
    for (const auto& e : ckpt.params.entries()) {
        put_string(out, e.name);
        put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.rank()));
        for (auto d : e.value.shape()) put_uint<std::uint64_t>(out, d);
        for (double v : e.value.values()) put_f64(out, v);
    }
    if (!out) throw IoError("failed writing checkpoint");
}

train::Checkpoint read_checkpoint(std::istream& in) {
    detail::Reader r(in, "checkpoint");
    char m[4];
    r.bytes(m, 4);
    if (!std::equal(m, m + 4, magic)) throw FormatError("not a HYCK checkpoint (bad magic)");
    const auto version = r.uint<std::uint16_t>();
    if (version != hyck_version)
        throw FormatError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(hyck_version) + ")");
    r.uint<std::uint16_t>();
    train::Checkpoint ckpt;
    try {
        ckpt.arch = models::arch_from_string(r.string());
    } catch (const ParameterError& e) {
        throw FormatError(std::string("checkpoint: ") + e.what());
    }
    ckpt.config = parse_config_text(r.string());
    ckpt.scaler.h.min = r.f64();
    ckpt.scaler.h.max = r.f64();
    ckpt.scaler.b.min = r.f64();
    ckpt.scaler.b.max = r.f64();
    ckpt.seed = r.uint<std::uint64_t>();
    ckpt.epochs = r.uint<std::uint64_t>();
    ckpt.final_loss = r.f64();

    std::unique_ptr<models::Model> model;
    try {
        model = ckpt.model();
    } catch (const Error& e) {
        throw FormatError(std::string("checkpoint config does not describe a valid ") + models::to_string(ckpt.arch) +
                          " model: " + e.what());
    }
    // Expected inventory bounds every allocation below.
    const auto expected = model->init(0);
    const auto count = r.uint<std::uint32_t>();
    if (count != expected.size())
        throw FormatError("checkpoint holds " + std::to_string(count) + " parameters, " + models::to_string(ckpt.arch) +
                          " needs " + std::to_string(expected.size()));
    for (std::uint32_t p = 0; p < count; ++p) {
        auto name = r.string(4096);
        if (!expected.contains(name)) throw FormatError("checkpoint has unknown parameter '" + name + "'");
        const auto& want = expected.at(name).shape();
        const auto rank = r.uint<std::uint32_t>();
        if (rank > max_rank) throw FormatError("parameter '" + name + "' has rank " + std::to_string(rank));
        nd::Shape shape(rank);
        for (auto& d : shape) d = r.uint<std::uint64_t>();
        if (shape != want)
            throw FormatError("parameter '" + name + "' has shape " + nd::shape_string(shape) + ", expected " +
                              nd::shape_string(want));
        nd::Tensor value(shape);
        for (auto& v : value.values()) v = r.f64();
        ckpt.params.add(std::move(name), std::move(value));
    }
    r.expect_end();
    model->validate(ckpt.params);
    return ckpt;
}

void save_checkpoint(const std::string& path, const train::Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_checkpoint(out, ckpt);
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

train::Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_checkpoint(in);
}

}  // namespace hysop::io
