#include "hysop/io/hysd.hpp"

#include <fstream>
#include <limits>

#include "binary.hpp"

namespace hysop::io {

using detail::put_f64;
using detail::put_uint;

namespace {

constexpr char magic[4] = {'H', 'Y', 'S', 'D'};
constexpr std::uint16_t flag_split = 1;
constexpr std::uint16_t flag_scaler = 2;

// Element counts beyond this are rejected before any allocation.
constexpr std::uint64_t max_elements = std::uint64_t{1} << 32;

}  // namespace

void write_hysd(std::ostream& out, const data::HysteresisDataset& ds) {
    ds.validate();
    const std::uint64_t n = ds.sample_count(), t = ds.sample_length();
    std::uint16_t flags = 0;
    if (ds.split) flags |= flag_split;
    if (ds.scaler) flags |= flag_scaler;
    out.write(magic, 4);
    put_uint<std::uint16_t>(out, hysd_version);
    put_uint<std::uint16_t>(out, flags);
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ds.kind));
    put_uint<std::uint32_t>(out, 0);
    put_uint<std::uint64_t>(out, n);
    put_uint<std::uint64_t>(out, t);
    put_uint<std::uint64_t>(out, ds.split ? ds.split->train.size() : 0);
    for (double v : ds.t) put_f64(out, v);
    for (double v : ds.h.values()) put_f64(out, v);
    for (double v : ds.b.values()) put_f64(out, v);
    if (ds.split) {
        for (auto i : ds.split->train) put_uint<std::uint64_t>(out, i);
        for (auto i : ds.split->test) put_uint<std::uint64_t>(out, i);
    }
    if (ds.scaler) {
        put_f64(out, ds.scaler->h.min);
        put_f64(out, ds.scaler->h.max);
        put_f64(out, ds.scaler->b.min);
        put_f64(out, ds.scaler->b.max);
    }
    if (!out) throw IoError("failed writing dataset");
}

data::HysteresisDataset read_hysd(std::istream& in) {
    detail::Reader r(in, "HYSD file");
    char m[4];
    r.bytes(m, 4);
    if (!std::equal(m, m + 4, magic)) throw FormatError("not a HYSD file (bad magic)");
    const auto version = r.uint<std::uint16_t>();
    if (version != hysd_version)
        throw FormatError("HYSD version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(hysd_version) + ")");
    const auto flags = r.uint<std::uint16_t>();
    if (flags & ~(flag_split | flag_scaler)) throw FormatError("HYSD header has unknown flags");
    const auto kind = r.uint<std::uint32_t>();
    if (kind > static_cast<std::uint32_t>(data::ExcitationKind::minor_loop))
        throw FormatError("HYSD header has unknown excitation kind " + std::to_string(kind));
    r.uint<std::uint32_t>();
    const auto n = r.uint<std::uint64_t>();
    const auto t = r.uint<std::uint64_t>();
    const auto n_train = r.uint<std::uint64_t>();
    if (t == 0 || n == 0 || t > max_elements || n > max_elements / t)
        throw FormatError("HYSD header has implausible sizes N=" + std::to_string(n) + ", T=" + std::to_string(t));
    if (n_train > n || ((flags & flag_split) == 0 && n_train != 0))
        throw FormatError("HYSD header has an inconsistent train count");

    data::HysteresisDataset ds;
    ds.kind = static_cast<data::ExcitationKind>(kind);
    ds.t.resize(t);
    for (auto& v : ds.t) v = r.f64();
    ds.h = data::SampleMatrix(n, t);
    for (auto& v : ds.h.values()) v = r.f64();
    ds.b = data::SampleMatrix(n, t);
    for (auto& v : ds.b.values()) v = r.f64();
    if (flags & flag_split) {
        data::DatasetSplit split;
        split.train.resize(n_train);
        split.test.resize(n - n_train);
        for (auto& i : split.train) i = r.uint<std::uint64_t>();
        for (auto& i : split.test) i = r.uint<std::uint64_t>();
        ds.split = std::move(split);
    }
    if (flags & flag_scaler) {
        data::MinMaxScaler s;
        s.h.min = r.f64();
        s.h.max = r.f64();
        s.b.min = r.f64();
        s.b.max = r.f64();
        ds.scaler = s;
    }
    r.expect_end();
    try {
        ds.validate();
    } catch (const Error& e) {
        throw FormatError(std::string("HYSD content is inconsistent: ") + e.what());
    }
    return ds;
}

void save_hysd(const std::string& path, const data::HysteresisDataset& dataset) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_hysd(out, dataset);
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

data::HysteresisDataset load_hysd(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_hysd(in);
}

}  // namespace hysop::io
