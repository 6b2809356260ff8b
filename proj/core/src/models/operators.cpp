#include "hysop/models/operators.hpp"

#include "hysop/error.hpp"
#include "hysop/util/random.hpp"

namespace hysop::models {

using nd::Activation;
using nd::Shape;
using nd::Tensor;
using nd::Var;

namespace {

constexpr std::uint64_t init_stream = 0x1417;

void check_positive(std::size_t v, const char* what) {
    if (v == 0) throw ParameterError(std::string(what) + " must be positive");
}

void check_batch(const Tensor& h, std::size_t samples, const char* who) {
    if (h.rank() != 2 || h.dim(1) != samples)
        throw ShapeError(std::string(who) + " expects h of shape [batch, " + std::to_string(samples) + "], got " +
                         nd::shape_string(h.shape()));
}

void check_grid(const std::vector<double>& t, std::size_t samples, const char* who) {
    if (t.size() != samples)
        throw ShapeError(std::string(who) + " expects a time grid of " + std::to_string(samples) +
                         " points, got " + std::to_string(t.size()));
}

// Xavier weight plus zero bias for a dense map in -> out.
void add_dense(nd::ParameterSet& p, const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
    p.add(name + ".w", nd::xavier_uniform(Shape{out, in}, rng));
    p.add(name + ".b", Tensor(Shape{out}, 0.0));
}

Var mlp(const nd::BoundParameters& p, const std::string& prefix, Var x, std::size_t layers, Activation act) {
    for (std::size_t l = 0; l < layers; ++l) {
        const auto name = prefix + "." + std::to_string(l);
        x = nd::activate(nd::linear(x, p[name + ".w"], p[name + ".b"]), act);
    }
    return nd::linear(x, p[prefix + ".out.w"], p[prefix + ".out.b"]);
}

std::size_t dense_count(std::size_t in, std::size_t out) { return in * out + out; }

void put_activation(KeyValues& kv, Activation a) { kv.set("activation", nd::to_string(a)); }

Activation get_activation(const KeyValues& kv, Activation fallback) {
    return kv.has("activation") ? nd::activation_from_string(kv.get("activation")) : fallback;
}

}  // namespace

Tensor operator_input(const Tensor& h, const std::vector<double>& t, std::size_t channels) {
    if (h.rank() != 2) throw ShapeError("operator input expects h of shape [batch, T]");
    const std::size_t nb = h.dim(0), len = h.dim(1);
    if (channels != 1 && channels != 2) throw ParameterError("operator input has 1 or 2 channels");
    if (channels == 2 && t.size() != len)
        throw ShapeError("time grid of " + std::to_string(t.size()) + " points for curves of " +
                         std::to_string(len));
    Tensor x(Shape{nb, channels, len});
    for (std::size_t b = 0; b < nb; ++b) {
        std::copy_n(h.data() + b * len, len, x.data() + b * channels * len);
        if (channels == 2) std::copy(t.begin(), t.end(), x.data() + (b * 2 + 1) * len);
    }
    return x;
}

// ---- DeepONet -------------------------------------------------------------

KeyValues DeepONetConfig::to_kv() const {
    KeyValues kv;
    kv.set("samples", samples);
    kv.set("branch_layers", branch_layers);
    kv.set("branch_width", branch_width);
    kv.set("trunk_layers", trunk_layers);
    kv.set("trunk_width", trunk_width);
    kv.set("basis", basis);
    put_activation(kv, activation);
    return kv;
}

DeepONetConfig DeepONetConfig::from_kv(const KeyValues& kv) {
    DeepONetConfig c;
    c.samples = kv.get_size("samples");
    c.branch_layers = kv.get_size("branch_layers");
    c.branch_width = kv.get_size("branch_width");
    c.trunk_layers = kv.get_size("trunk_layers");
    c.trunk_width = kv.get_size("trunk_width");
    c.basis = kv.get_size("basis");
    c.activation = get_activation(kv, Activation::tanh);
    return c;
}

DeepONet::DeepONet(DeepONetConfig config) : cfg_(config) {
    check_positive(cfg_.samples, "samples");
    check_positive(cfg_.branch_layers, "branch_layers");
    check_positive(cfg_.branch_width, "branch_width");
    check_positive(cfg_.trunk_layers, "trunk_layers");
    check_positive(cfg_.trunk_width, "trunk_width");
    check_positive(cfg_.basis, "basis");
}

std::size_t DeepONet::parameter_count() const {
    auto net = [&](std::size_t in, std::size_t layers, std::size_t width) {
        return dense_count(in, width) + (layers - 1) * dense_count(width, width) + dense_count(width, cfg_.basis);
    };
    return net(cfg_.samples, cfg_.branch_layers, cfg_.branch_width) +
           net(1, cfg_.trunk_layers, cfg_.trunk_width);
}

nd::ParameterSet DeepONet::init(std::uint64_t seed) const {
    auto rng = make_rng(seed, init_stream);
    nd::ParameterSet p;
    auto net = [&](const std::string& prefix, std::size_t in, std::size_t layers, std::size_t width) {
        for (std::size_t l = 0; l < layers; ++l)
            add_dense(p, prefix + "." + std::to_string(l), l == 0 ? in : width, width, rng);
        add_dense(p, prefix + ".out", width, cfg_.basis, rng);
    };
    net("branch", cfg_.samples, cfg_.branch_layers, cfg_.branch_width);
    net("trunk", 1, cfg_.trunk_layers, cfg_.trunk_width);
    return p;
}

Var DeepONet::forward(nd::Tape& tape, const nd::BoundParameters& p, const Tensor& h,
                      const std::vector<double>& t) const {
    check_batch(h, cfg_.samples, "deeponet");
    const std::size_t len = t.size();
    if (len == 0) throw ShapeError("deeponet needs a non-empty time grid");
    auto coeffs = mlp(p, "branch", tape.constant(h), cfg_.branch_layers, cfg_.activation);
    auto basis = mlp(p, "trunk", tape.constant(Tensor(Shape{len, 1}, t)), cfg_.trunk_layers, cfg_.activation);
    return nd::matmul(coeffs, basis, false, true);
}

// ---- Fourier neural operator ------------------------------------------------

KeyValues FnoConfig::to_kv() const {
    KeyValues kv;
    kv.set("samples", samples);
    kv.set("in_channels", in_channels);
    kv.set("width", width);
    kv.set("blocks", blocks);
    kv.set("modes", modes);
    kv.set("head_width", head_width);
    put_activation(kv, activation);
    return kv;
}

FnoConfig FnoConfig::from_kv(const KeyValues& kv) {
    FnoConfig c;
    c.samples = kv.get_size("samples");
    c.in_channels = kv.get_size("in_channels");
    c.width = kv.get_size("width");
    c.blocks = kv.get_size("blocks");
    c.modes = kv.get_size("modes");
    c.head_width = kv.get_size("head_width");
    c.activation = get_activation(kv, Activation::relu);
    return c;
}

Fno::Fno(FnoConfig config) : cfg_(config) {
    check_positive(cfg_.samples, "samples");
    check_positive(cfg_.width, "width");
    check_positive(cfg_.modes, "modes");
    check_positive(cfg_.head_width, "head_width");
    if (cfg_.in_channels != 1 && cfg_.in_channels != 2) throw ParameterError("in_channels must be 1 or 2");
    if (cfg_.modes > cfg_.samples / 2 + 1)
        throw ParameterError("modes " + std::to_string(cfg_.modes) + " exceed the " +
                             std::to_string(cfg_.samples / 2 + 1) + " available for " +
                             std::to_string(cfg_.samples) + " samples");
}

std::size_t Fno::parameter_count() const {
    const std::size_t n = cfg_.width;
    return dense_count(cfg_.in_channels, n) + cfg_.blocks * (dense_count(n, n) + 2 * cfg_.modes * n * n) +
           dense_count(n, cfg_.head_width) + dense_count(cfg_.head_width, 1);
}

nd::ParameterSet Fno::init(std::uint64_t seed) const {
    auto rng = make_rng(seed, init_stream);
    nd::ParameterSet p;
    const std::size_t n = cfg_.width;
    add_dense(p, "lift", cfg_.in_channels, n, rng);
    const double r_scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t l = 0; l < cfg_.blocks; ++l) {
        const auto name = "block" + std::to_string(l);
        add_dense(p, name, n, n, rng);
        p.add(name + ".r", nd::uniform(Shape{cfg_.modes, n, n, 2}, 0.0, r_scale, rng));
    }
    add_dense(p, "head", n, cfg_.head_width, rng);
    add_dense(p, "out", cfg_.head_width, 1, rng);
    return p;
}

Var Fno::forward(nd::Tape& tape, const nd::BoundParameters& p, const Tensor& h,
                 const std::vector<double>& t) const {
    const char* who = cfg_.in_channels == 1 ? "rifno" : "fno";
    check_batch(h, cfg_.samples, who);
    if (cfg_.in_channels == 2) check_grid(t, cfg_.samples, who);
    const std::size_t nb = h.dim(0);
    auto z = nd::channel_affine(tape.constant(operator_input(h, t, cfg_.in_channels)), p["lift.w"], p["lift.b"]);
    for (std::size_t l = 0; l < cfg_.blocks; ++l) {
        const auto name = "block" + std::to_string(l);
        auto local = nd::channel_affine(z, p[name + ".w"], p[name + ".b"]);
        auto spectral = nd::irfft_modes(nd::spectral_mode_mix(nd::rfft_modes(z, cfg_.modes), p[name + ".r"], cfg_.modes), cfg_.samples);
        z = nd::activate(nd::add(local, spectral), cfg_.activation);
    }
    auto y = nd::activate(nd::channel_affine(z, p["head.w"], p["head.b"]), cfg_.activation);
    y = nd::channel_affine(y, p["out.w"], p["out.b"]);
    return nd::reshape(y, Shape{nb, cfg_.samples});
}

// ---- Wavelet neural operator ------------------------------------------------

KeyValues WnoConfig::to_kv() const {
    KeyValues kv;
    kv.set("samples", samples);
    kv.set("in_channels", in_channels);
    kv.set("width", width);
    kv.set("blocks", blocks);
    kv.set("levels", levels);
    kv.set("wavelet", std::string("db6"));
    kv.set("head_width", head_width);
    put_activation(kv, activation);
    return kv;
}

WnoConfig WnoConfig::from_kv(const KeyValues& kv) {
    WnoConfig c;
    c.samples = kv.get_size("samples");
    c.in_channels = kv.get_size("in_channels");
    c.width = kv.get_size("width");
    c.blocks = kv.get_size("blocks");
    c.levels = kv.get_size("levels");
    c.head_width = kv.get_size("head_width");
    if (kv.has("wavelet") && kv.get("wavelet") != "db6")
        throw FormatError("unsupported wavelet '" + kv.get("wavelet") + "'");
    c.activation = get_activation(kv, Activation::gelu);
    return c;
}

Wno::Wno(WnoConfig config) : cfg_(config), plan_(config.samples, config.levels) {
    check_positive(cfg_.width, "width");
    check_positive(cfg_.head_width, "head_width");
    if (cfg_.in_channels != 1 && cfg_.in_channels != 2) throw ParameterError("in_channels must be 1 or 2");
}

std::size_t Wno::parameter_count() const {
    const std::size_t n = cfg_.width;
    return dense_count(cfg_.in_channels, n) + cfg_.blocks * (dense_count(n, n) + plan_.approx_size() * n * n) +
           dense_count(n, cfg_.head_width) + dense_count(cfg_.head_width, 1);
}

nd::ParameterSet Wno::init(std::uint64_t seed) const {
    auto rng = make_rng(seed, init_stream);
    nd::ParameterSet p;
    const std::size_t n = cfg_.width;
    add_dense(p, "lift", cfg_.in_channels, n, rng);
    const double r_scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t l = 0; l < cfg_.blocks; ++l) {
        const auto name = "block" + std::to_string(l);
        add_dense(p, name, n, n, rng);
        p.add(name + ".r", nd::uniform(Shape{plan_.approx_size(), n, n}, 0.0, r_scale, rng));
    }
    add_dense(p, "head", n, cfg_.head_width, rng);
    add_dense(p, "out", cfg_.head_width, 1, rng);
    return p;
}

Var Wno::forward(nd::Tape& tape, const nd::BoundParameters& p, const Tensor& h,
                 const std::vector<double>& t) const {
    check_batch(h, cfg_.samples, "wno");
    if (cfg_.in_channels == 2) check_grid(t, cfg_.samples, "wno");
    const std::size_t nb = h.dim(0);
    auto z = nd::channel_affine(tape.constant(operator_input(h, t, cfg_.in_channels)), p["lift.w"], p["lift.b"]);
    for (std::size_t l = 0; l < cfg_.blocks; ++l) {
        const auto name = "block" + std::to_string(l);
        auto local = nd::channel_affine(z, p[name + ".w"], p[name + ".b"]);
        auto wavelet = nd::wavelet_mix(z, p[name + ".r"], plan_);
        z = nd::activate(nd::add(local, wavelet), cfg_.activation);
    }
    auto y = nd::activate(nd::channel_affine(z, p["head.w"], p["head.b"]), cfg_.activation);
    y = nd::channel_affine(y, p["out.w"], p["out.b"]);
    return nd::reshape(y, Shape{nb, cfg_.samples});
}

}  // namespace hysop::models
