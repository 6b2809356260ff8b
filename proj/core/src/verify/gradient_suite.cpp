#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "common.hpp"
#include "hysop/models/recurrent.hpp"
#include "hysop/nd/gradcheck.hpp"
#include "hysop/nd/ops.hpp"
#include "hysop/nd/params.hpp"
#include "hysop/nd/wavelet.hpp"

namespace hysop::verify {

using namespace detail;
using nd::Shape;
using nd::Tape;
using nd::Tensor;
using nd::Var;

namespace {

constexpr double op_limit = 1e-5;
constexpr double model_limit = 1e-4;
constexpr std::size_t curve_length = 198;
// Near cbrt(machine epsilon); below it the quotient is dominated by
// rounding in the loss.
constexpr double op_step = 1e-5;

// Contracts every output entry with fixed random weights.
Var probe(Tape& tape, Var v) { return nd::sum(nd::mul(v, tape.constant(random_tensor(v.shape(), 77)))); }

using UnaryOp = std::function<Var(Tape&, const std::vector<Var>&)>;

void op(SuiteResult& out, const std::string& name, const UnaryOp& f, const std::vector<Tensor>& inputs) {
    nd::GradcheckOptions opt;
    opt.step = op_step;
    const auto res =
        nd::gradcheck([&](Tape& t, const std::vector<Var>& v) { return probe(t, f(t, v)); }, inputs, opt);
    out.checks.push_back(below("op " + name, res.max_rel_error, op_limit));
}

void elementwise_ops(SuiteResult& out) {
    const auto a = random_tensor({5, 4}, 1), b = random_tensor({5, 4}, 2), row = random_tensor({4}, 3);
    op(out, "add", [](Tape&, const auto& v) { return nd::add(v[0], v[1]); }, {a, b});
    op(out, "add (row broadcast)", [](Tape&, const auto& v) { return nd::add(v[0], v[1]); }, {a, row});
    op(out, "sub", [](Tape&, const auto& v) { return nd::sub(v[0], v[1]); }, {a, b});
    op(out, "sub (row broadcast)", [](Tape&, const auto& v) { return nd::sub(v[0], v[1]); }, {a, row});
    op(out, "mul", [](Tape&, const auto& v) { return nd::mul(v[0], v[1]); }, {a, b});
    op(out, "mul (row broadcast)", [](Tape&, const auto& v) { return nd::mul(v[0], v[1]); }, {a, row});
    op(out, "scale", [](Tape&, const auto& v) { return nd::scale(v[0], -1.7); }, {a});
    op(out, "add_scalar", [](Tape&, const auto& v) { return nd::add_scalar(v[0], 0.3); }, {a});
    const auto wide = random_tensor({5, 4}, 11, -3.0, 3.0);
    op(out, "tanh", [](Tape&, const auto& v) { return nd::tanh(v[0]); }, {wide});
    op(out, "relu", [](Tape&, const auto& v) { return nd::relu(v[0]); }, {wide});
    op(out, "gelu", [](Tape&, const auto& v) { return nd::gelu(v[0]); }, {wide});
    op(out, "sigmoid", [](Tape&, const auto& v) { return nd::sigmoid(v[0]); }, {wide});
    op(out, "reshape", [](Tape&, const auto& v) { return nd::reshape(v[0], {4, 5}); }, {a});
    op(out, "slice", [](Tape&, const auto& v) { return nd::slice(v[0], 1, 1, 3); }, {a});
    op(out, "sum", [](Tape&, const auto& v) { return nd::sum(v[0]); }, {a});
    op(out, "mean", [](Tape&, const auto& v) { return nd::mean(v[0]); }, {a});
    op(out, "mse", [](Tape&, const auto& v) { return nd::mse(v[0], v[1]); }, {a, b});
}

void linear_ops(SuiteResult& out) {
    for (bool ta : {false, true})
        for (bool tb : {false, true}) {
            const auto x = random_tensor(ta ? Shape{4, 5} : Shape{5, 4}, 5);
            const auto y = random_tensor(tb ? Shape{3, 4} : Shape{4, 3}, 6);
            op(out, std::string("matmul") + (ta ? " A^T" : "") + (tb ? " B^T" : ""),
               [ta, tb](Tape&, const auto& v) { return nd::matmul(v[0], v[1], ta, tb); }, {x, y});
        }
    const auto w = random_tensor({3, 4}, 7), bias = random_tensor({3}, 8);
    op(out, "linear", [](Tape&, const auto& v) { return nd::linear(v[0], v[1], v[2]); },
       {random_tensor({2, 5, 4}, 9), w, bias});
    op(out, "linear (no bias)", [](Tape&, const auto& v) { return nd::linear(v[0], v[1]); },
       {random_tensor({5, 4}, 9), w});
    op(out, "channel_affine", [](Tape&, const auto& v) { return nd::channel_affine(v[0], v[1], v[2]); },
       {random_tensor({2, 4, 5}, 10), w, bias});
}

void spectral_ops(SuiteResult& out) {
    const std::size_t n = curve_length, m = 4;
    op(out, "rfft", [](Tape&, const auto& v) { return nd::rfft(v[0]); }, {random_tensor({2, 3, n}, 20)});
    op(out, "irfft", [n](Tape&, const auto& v) { return nd::irfft(v[0], n); },
       {random_tensor({2, 3, n / 2 + 1, 2}, 21)});
    op(out, "rfft_modes", [m](Tape&, const auto& v) { return nd::rfft_modes(v[0], m); },
       {random_tensor({2, 3, n}, 22)});
    op(out, "irfft_modes", [n](Tape&, const auto& v) { return nd::irfft_modes(v[0], n); },
       {random_tensor({2, 3, m, 2}, 23)});
    op(out, "spectral_mode_mix", [m](Tape&, const auto& v) { return nd::spectral_mode_mix(v[0], v[1], m); },
       {random_tensor({2, 3, 6, 2}, 24), random_tensor({m, 5, 3, 2}, 25)});

    const nd::WaveletPlan plan(n, 4);
    op(out, "dwt", [&plan](Tape&, const auto& v) { return nd::dwt(v[0], plan); }, {random_tensor({2, 2, n}, 26)});
    op(out, "idwt", [&plan](Tape&, const auto& v) { return nd::idwt(v[0], plan); },
       {random_tensor({2, 2, plan.packed_size()}, 27)});
    op(out, "band_mix", [&plan](Tape&, const auto& v) { return nd::band_mix(v[0], v[1], plan); },
       {random_tensor({2, 2, plan.packed_size()}, 28), random_tensor({plan.approx_size(), 2, 2}, 29)});
    op(out, "wavelet_mix", [&plan](Tape&, const auto& v) { return nd::wavelet_mix(v[0], v[1], plan); },
       {random_tensor({2, 2, n}, 30), random_tensor({plan.approx_size(), 2, 2}, 31)});
}

void sequence_ops(SuiteResult& out) {
    const std::size_t T = 5, F = 3, H = 4;
    auto inputs = [&](std::size_t gates, Shape init, std::uint64_t seed) {
        return std::vector<Tensor>{random_tensor({T, F}, seed),          random_tensor({gates * H, F}, seed + 1),
                                   random_tensor({gates * H, H}, seed + 2), random_tensor({gates * H}, seed + 3),
                                   random_tensor({gates * H}, seed + 4),    random_tensor(std::move(init), seed + 5)};
    };
    op(out, "rnn_sequence",
       [](Tape&, const auto& v) { return models::rnn_sequence(v[0], v[1], v[2], v[3], v[4], v[5]); },
       inputs(1, {H}, 40));
    op(out, "lstm_sequence",
       [](Tape&, const auto& v) { return models::lstm_sequence(v[0], v[1], v[2], v[3], v[4], v[5]); },
       inputs(4, {2, H}, 50));
    op(out, "gru_sequence",
       [](Tape&, const auto& v) { return models::gru_sequence(v[0], v[1], v[2], v[3], v[4], v[5]); },
       inputs(3, {H}, 60));
}

// Five-point differences over a ladder of steps; returns the middle
// estimate of the three consecutive steps that agree best. Large steps
// straddle ReLU kinks, small ones drown in rounding, and where the stable
// middle lies depends on the parameter.
template <class Loss>
double plateau_slope(const Loss& loss_at) {
    constexpr double steps[] = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
    double est[std::size(steps)];
    for (std::size_t i = 0; i < std::size(steps); ++i) {
        const double h = steps[i];
        est[i] = (loss_at(-2.0 * h) - 8.0 * loss_at(-h) + 8.0 * loss_at(h) - loss_at(2.0 * h)) / (12.0 * h);
    }
    std::size_t best = 1;
    double best_spread = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < std::size(steps); ++i) {
        const double spread = std::max({est[i - 1], est[i], est[i + 1]}) - std::min({est[i - 1], est[i], est[i + 1]});
        if (spread < best_spread) {
            best_spread = spread;
            best = i;
        }
    }
    return est[best];
}

// Perturbs 5 scalar parameters drawn in proportion to tensor size and
// compares the loss slope with the tape gradient.
double spot_check(const models::Model& model, const nd::ParameterSet& params,
                  const std::function<Var(Tape&, const nd::BoundParameters&)>& loss, std::uint64_t seed) {
    std::vector<Tensor> grads;
    {
        Tape tape;
        nd::BoundParameters bound(tape, params, true);
        tape.backward(loss(tape, bound));
        grads = bound.grads();
    }
    auto eval = [&](const nd::ParameterSet& p) {
        Tape tape;
        nd::BoundParameters bound(tape, p, false);
        return loss(tape, bound).value().item();
    };
    auto rng = make_rng(seed, 0x5a3);
    std::uniform_int_distribution<std::size_t> pick(0, model.parameter_count() - 1);
    double worst = 0.0;
    const auto& entries = params.entries();
    for (int k = 0; k < 5; ++k) {
        std::size_t flat = pick(rng), which = 0;
        while (flat >= entries[which].value.size()) flat -= entries[which++].value.size();
        const double numeric = plateau_slope([&](double shift) {
            auto moved = params;
            moved[which].value[flat] += shift;
            return eval(moved);
        });
        const double analytic = grads[which][flat];
        worst = std::max(worst, std::abs(numeric - analytic) /
                                    std::max({std::abs(numeric), std::abs(analytic), 1e-6}));
    }
    return worst;
}

void architectures(SuiteResult& out) {
    const std::size_t T = curve_length, rows = 2, features = 200;
    std::vector<double> t(T);
    for (std::size_t i = 0; i < T; ++i) t[i] = static_cast<double>(i) / static_cast<double>(T - 1);
    const auto h = random_tensor({rows, T}, 70), b = random_tensor({rows, T}, 71);
    const auto h_seq = random_tensor({T, features}, 72), b_seq = random_tensor({T, features}, 73);
    std::uint64_t seed = 80;
    for (auto arch : {models::Arch::deeponet, models::Arch::fno, models::Arch::rifno, models::Arch::wno,
                      models::Arch::rnn, models::Arch::lstm, models::Arch::gru, models::Arch::edlstm}) {
        const auto model = models::make_model(arch, models::default_config(arch, T, features));
        std::function<Var(Tape&, const nd::BoundParameters&)> loss;
        if (models::is_operator(arch)) {
            const auto& m = dynamic_cast<const models::OperatorModel&>(*model);
            loss = [&m, &h, &b, &t](Tape& tape, const nd::BoundParameters& p) {
                return nd::mse(m.forward(tape, p, h, t), tape.constant(b));
            };
        } else {
            const auto& m = dynamic_cast<const models::RecurrentModel&>(*model);
            loss = [&m, &h_seq, &b_seq](Tape& tape, const nd::BoundParameters& p) {
                return nd::mse(m.forward(tape, p, h_seq, &b_seq), tape.constant(b_seq));
            };
        }
        out.checks.push_back(
            below("model " + models::to_string(arch), spot_check(*model, model->init(seed), loss, seed), model_limit));
        ++seed;
    }
}

}  // namespace

SuiteResult gradient_suite() {
    Stopwatch clock;
    SuiteResult out;
    out.name = "gradient";
    elementwise_ops(out);
    linear_ops(out);
    spectral_ops(out);
    sequence_ops(out);
    architectures(out);
    out.seconds = clock.seconds();
    return out;
}

}  // namespace hysop::verify
