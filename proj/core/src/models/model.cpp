#include "hysop/models/model.hpp"

#include <charconv>

#include "hysop/error.hpp"
#include "hysop/models/operators.hpp"
#include "hysop/models/recurrent.hpp"

namespace hysop::models {

std::string to_string(Arch arch) {
    switch (arch) {
        case Arch::deeponet: return "deeponet";
        case Arch::fno: return "fno";
        case Arch::rifno: return "rifno";
        case Arch::wno: return "wno";
        case Arch::rnn: return "rnn";
        case Arch::lstm: return "lstm";
        case Arch::gru: return "gru";
        case Arch::edlstm: return "edlstm";
    }
    return "unknown";
}

const std::vector<Arch>& all_archs() {
    static const std::vector<Arch> archs = {Arch::deeponet, Arch::fno, Arch::rifno, Arch::wno,
                                            Arch::rnn,      Arch::lstm, Arch::gru,  Arch::edlstm};
    return archs;
}

Arch arch_from_string(const std::string& name) {
    for (Arch a : all_archs())
        if (to_string(a) == name) return a;
    throw ParameterError("unknown architecture '" + name + "'");
}

bool is_operator(Arch arch) noexcept {
    return arch == Arch::deeponet || arch == Arch::fno || arch == Arch::rifno || arch == Arch::wno;
}

void KeyValues::set(const std::string& key, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    map_[key] = std::string(buf, res.ptr);
}

const std::string& KeyValues::get(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw FormatError("configuration lacks key '" + key + "'");
    return it->second;
}

std::uint64_t KeyValues::get_u64(const std::string& key) const {
    const auto& s = get(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError("configuration key '" + key + "' is not an unsigned integer: '" + s + "'");
    return v;
}

std::size_t KeyValues::get_size(const std::string& key) const {
    return static_cast<std::size_t>(get_u64(key));
}

double KeyValues::get_double(const std::string& key) const {
    const auto& s = get(key);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError("configuration key '" + key + "' is not a number: '" + s + "'");
    return v;
}

void Model::validate(const nd::ParameterSet& params) const {
    const auto ref = init(0);
    for (const auto& e : params.entries()) {
        if (!ref.contains(e.name))
            throw FormatError("unexpected parameter '" + e.name + "' for " + to_string(arch()));
        const auto& want = ref.at(e.name).shape();
        if (e.value.shape() != want)
            throw FormatError("parameter '" + e.name + "' has shape " + nd::shape_string(e.value.shape()) +
                              ", expected " + nd::shape_string(want));
    }
    for (const auto& e : ref.entries())
        if (!params.contains(e.name)) throw FormatError("missing parameter '" + e.name + "'");
    if (params.size() != ref.size()) throw FormatError("parameter inventory mismatch");
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (params[i].name != ref[i].name) throw FormatError("parameter order mismatch at '" + params[i].name + "'");
}

nd::Tensor OperatorModel::predict(const nd::ParameterSet& params, const nd::Tensor& h,
                                  const std::vector<double>& t) const {
    nd::Tape tape;
    nd::BoundParameters bound(tape, params, false);
    return forward(tape, bound, h, t).value();
}

nd::Tensor RecurrentModel::predict(const nd::ParameterSet& params, const nd::Tensor& h_seq) const {
    nd::Tape tape;
    nd::BoundParameters bound(tape, params, false);
    return forward(tape, bound, h_seq, nullptr).value();
}

std::unique_ptr<Model> make_model(Arch arch, const KeyValues& config) {
    switch (arch) {
        case Arch::deeponet: return std::make_unique<DeepONet>(DeepONetConfig::from_kv(config));
        case Arch::fno:
        case Arch::rifno: {
            auto cfg = FnoConfig::from_kv(config);
            if ((arch == Arch::rifno) != (cfg.in_channels == 1))
                throw FormatError("in_channels " + std::to_string(cfg.in_channels) + " does not match " +
                                  to_string(arch));
            return std::make_unique<Fno>(cfg);
        }
        case Arch::wno: return std::make_unique<Wno>(WnoConfig::from_kv(config));
        case Arch::rnn:
        case Arch::lstm:
        case Arch::gru: {
            auto model = std::make_unique<RecurrentNet>(RecurrentConfig::from_kv(config));
            if (model->arch() != arch) throw FormatError("cell kind does not match " + to_string(arch));
            return model;
        }
        case Arch::edlstm: return std::make_unique<EdLstm>(RecurrentConfig::from_kv(config));
    }
    throw ParameterError("unknown architecture");
}

KeyValues default_config(Arch arch, std::size_t samples, std::size_t features) {
    switch (arch) {
        case Arch::deeponet: {
            DeepONetConfig c;
            c.samples = samples;
            return c.to_kv();
        }
        case Arch::fno:
        case Arch::rifno: {
            FnoConfig c;
            c.samples = samples;
            c.in_channels = arch == Arch::fno ? 2 : 1;
            return c.to_kv();
        }
        case Arch::wno: {
            WnoConfig c;
            c.samples = samples;
            return c.to_kv();
        }
        case Arch::rnn:
        case Arch::lstm:
        case Arch::gru:
        case Arch::edlstm: {
            RecurrentConfig c;
            c.cell = arch == Arch::rnn ? CellKind::rnn : arch == Arch::gru ? CellKind::gru : CellKind::lstm;
            c.features = features;
            c.samples = samples;
            auto kv = c.to_kv();
            if (arch == Arch::edlstm) kv.set("decoder", std::string("lstm"));
            return kv;
        }
    }
    throw ParameterError("unknown architecture");
}

}  // namespace hysop::models
