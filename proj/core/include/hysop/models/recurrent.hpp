#pragma once

#include "hysop/models/model.hpp"

namespace hysop::models {

enum class CellKind { rnn, lstm, gru };

struct RecurrentConfig {
    CellKind cell = CellKind::lstm;
    std::size_t features = 1000;  // curves on the feature axis
    std::size_t hidden = 128;
    std::size_t samples = 198;    // sequence length T

    KeyValues to_kv() const;
    static RecurrentConfig from_kv(const KeyValues& kv);
};

std::size_t gate_count(CellKind cell) noexcept;

// Fused sequence kernels with PyTorch gate conventions. Weights are
// w_ih [G*H, F], w_hh [G*H, H], biases [G*H]; gate order i,f,g,o (LSTM) and
// r,z,n (GRU).
// rnn/gru: x [T, F], h0 [H] -> hidden states [T, H].
nd::Var rnn_sequence(nd::Var x, nd::Var w_ih, nd::Var w_hh, nd::Var b_ih, nd::Var b_hh, nd::Var h0);
nd::Var gru_sequence(nd::Var x, nd::Var w_ih, nd::Var w_hh, nd::Var b_ih, nd::Var b_hh, nd::Var h0);
// lstm: x [T, F], init [2, H] = (h0, c0) -> states [T, 2, H] holding (h_t, c_t).
nd::Var lstm_sequence(nd::Var x, nd::Var w_ih, nd::Var w_hh, nd::Var b_ih, nd::Var b_hh, nd::Var init);

// Single-layer cell over time followed by a per-step linear readout H -> F.
class RecurrentNet final : public RecurrentModel {
public:
    explicit RecurrentNet(RecurrentConfig config);
    Arch arch() const override;
    KeyValues config() const override { return cfg_.to_kv(); }
    std::size_t parameter_count() const override;
    nd::ParameterSet init(std::uint64_t seed) const override;
    nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h_seq,
                    const nd::Tensor* targets) const override;
    std::size_t features() const override { return cfg_.features; }
    std::size_t samples() const override { return cfg_.samples; }

private:
    RecurrentConfig cfg_;
};

enum class DecodeMode { teacher_forced, autoregressive };

// LSTM encoder over H whose final (h, c) seeds an LSTM decoder emitting B.
// The decoder's first input is a zero token; later inputs are the previous
// target (teacher forcing) or the previous prediction (autoregressive).
class EdLstm final : public RecurrentModel {
public:
    explicit EdLstm(RecurrentConfig config);
    Arch arch() const override { return Arch::edlstm; }
    KeyValues config() const override;
    std::size_t parameter_count() const override;
    nd::ParameterSet init(std::uint64_t seed) const override;
    // Teacher-forced; throws ParameterError without targets.
    nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h_seq,
                    const nd::Tensor* targets) const override;
    nd::Tensor predict(const nd::ParameterSet& params, const nd::Tensor& h_seq) const override;
    nd::Tensor decode(const nd::ParameterSet& params, const nd::Tensor& h_seq, DecodeMode mode,
                      const nd::Tensor* targets) const;
    std::size_t features() const override { return cfg_.features; }
    std::size_t samples() const override { return cfg_.samples; }

private:
    RecurrentConfig cfg_;
};

}  // namespace hysop::models
