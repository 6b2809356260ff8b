#pragma once

#include "hysop/models/model.hpp"
#include "hysop/nd/wavelet.hpp"

namespace hysop::models {

struct DeepONetConfig {
    std::size_t samples = 198;  // branch input width
    std::size_t branch_layers = 8;
    std::size_t branch_width = 200;
    std::size_t trunk_layers = 8;
    std::size_t trunk_width = 200;
    std::size_t basis = 25;  // p
    nd::Activation activation = nd::Activation::tanh;

    KeyValues to_kv() const;
    static DeepONetConfig from_kv(const KeyValues& kv);
};

// Branch: hidden tanh layers then a linear map to p coefficients. Trunk: the
// same on the scalar time t. Output b[i, j] = sum_k c_k(h_i) phi_k(t_j),
// without an output bias.
class DeepONet final : public OperatorModel {
public:
    explicit DeepONet(DeepONetConfig config);
    Arch arch() const override { return Arch::deeponet; }
    KeyValues config() const override { return cfg_.to_kv(); }
    std::size_t parameter_count() const override;
    nd::ParameterSet init(std::uint64_t seed) const override;
    nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h,
                    const std::vector<double>& t) const override;
    std::size_t samples() const override { return cfg_.samples; }
    const DeepONetConfig& settings() const noexcept { return cfg_; }

private:
    DeepONetConfig cfg_;
};

struct FnoConfig {
    std::size_t samples = 198;
    std::size_t in_channels = 2;  // 1 drops the time channel (rate-independent variant)
    std::size_t width = 8;        // N_f
    std::size_t blocks = 4;       // L
    std::size_t modes = 4;        // n_m
    std::size_t head_width = 128;
    nd::Activation activation = nd::Activation::relu;

    KeyValues to_kv() const;
    static FnoConfig from_kv(const KeyValues& kv);
};

// z0 = P x; z_{l+1} = act(W_l z_l + irfft(R_l . rfft(z_l)[:n_m])); y = Qh act(Q z_L).
class Fno final : public OperatorModel {
public:
    explicit Fno(FnoConfig config);
    Arch arch() const override { return cfg_.in_channels == 1 ? Arch::rifno : Arch::fno; }
    KeyValues config() const override { return cfg_.to_kv(); }
    std::size_t parameter_count() const override;
    nd::ParameterSet init(std::uint64_t seed) const override;
    nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h,
                    const std::vector<double>& t) const override;
    std::size_t samples() const override { return cfg_.samples; }
    const FnoConfig& settings() const noexcept { return cfg_; }

private:
    FnoConfig cfg_;
};

struct WnoConfig {
    std::size_t samples = 198;
    std::size_t in_channels = 2;
    std::size_t width = 64;
    std::size_t blocks = 8;
    std::size_t levels = 4;  // n_l, db6
    std::size_t head_width = 128;
    nd::Activation activation = nd::Activation::gelu;

    KeyValues to_kv() const;
    static WnoConfig from_kv(const KeyValues& kv);
};

// Like the Fourier variant with the spectral kernel replaced by
// idwt(R_l mixes the approximation band of dwt(z_l))).
class Wno final : public OperatorModel {
public:
    explicit Wno(WnoConfig config);
    Arch arch() const override { return Arch::wno; }
    KeyValues config() const override { return cfg_.to_kv(); }
    std::size_t parameter_count() const override;
    nd::ParameterSet init(std::uint64_t seed) const override;
    nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h,
                    const std::vector<double>& t) const override;
    std::size_t samples() const override { return cfg_.samples; }
    const WnoConfig& settings() const noexcept { return cfg_; }
    const nd::WaveletPlan& plan() const noexcept { return plan_; }

private:
    WnoConfig cfg_;
    nd::WaveletPlan plan_;
};

// Stacks h [batch, T] with the time grid into the channel-first input
// [batch, channels, T]; a single channel omits t.
nd::Tensor operator_input(const nd::Tensor& h, const std::vector<double>& t, std::size_t channels);

}  // namespace hysop::models
