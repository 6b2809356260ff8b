#include "hysop/train/trainer.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "hysop/error.hpp"
#include "hysop/models/recurrent.hpp"
#include "hysop/train/metrics.hpp"
#include "hysop/util/random.hpp"

namespace hysop::train {

using data::SampleMatrix;
using models::Arch;
using nd::Shape;
using nd::Tensor;

namespace {

constexpr std::uint64_t shuffle_stream = 0x5f11;
constexpr std::size_t eval_block = 100;

Tensor rows_tensor(const SampleMatrix& m, std::span<const std::size_t> rows) {
    Tensor out(Shape{rows.size(), m.cols()});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = m.row(rows[i]);
        std::copy(r.begin(), r.end(), out.data() + i * m.cols());
    }
    return out;
}

// [N, T] rows -> time-major [T, N].
Tensor time_major(const SampleMatrix& m, std::span<const std::size_t> rows, std::size_t width) {
    Tensor out(Shape{m.cols(), width}, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t t = 0; t < m.cols(); ++t) out[t * width + i] = m(rows[i], t);
    return out;
}

SampleMatrix scaled(const SampleMatrix& m, const data::MinMax& s) {
    SampleMatrix out = m;
    s.transform_inplace(out.values());
    return out;
}

void check_model_fits(const models::Model& model, std::size_t samples, std::size_t train_rows) {
    if (models::is_operator(model.arch())) {
        const auto& op = dynamic_cast<const models::OperatorModel&>(model);
        if (op.samples() != samples)
            throw ParameterError("model expects " + std::to_string(op.samples()) + " samples per curve, dataset has " +
                                 std::to_string(samples));
        return;
    }
    const auto& rec = dynamic_cast<const models::RecurrentModel&>(model);
    if (rec.samples() != samples || rec.features() != train_rows)
        throw ParameterError("recurrent model is configured for [" + std::to_string(rec.samples()) + ", " +
                             std::to_string(rec.features()) + "] sequences, train partition is [" +
                             std::to_string(samples) + ", " + std::to_string(train_rows) + "]");
}

}  // namespace

TrainConfig default_train_config(Arch arch) {
    TrainConfig c;
    c.arch = arch;
    switch (arch) {
        case Arch::deeponet:
            c.lr = 5e-5;
            c.batch = 0;
            break;
        case Arch::fno:
        case Arch::rifno:
            c.lr = 1e-4;
            c.batch = 100;
            break;
        case Arch::wno:
            c.lr = 1e-3;
            c.batch = 100;
            break;
        default:
            c.lr = 1e-4;
            c.batch = 0;
            break;
    }
    return c;
}

std::unique_ptr<models::Model> Checkpoint::model() const { return models::make_model(arch, config); }

Checkpoint train(const TrainConfig& config, const data::HysteresisDataset& dataset, const ProgressFn& progress) {
    dataset.validate();
    const auto& split = dataset.require_split();
    const auto& scaler = dataset.require_scaler();
    if (split.train.empty()) throw ParameterError("train partition is empty");
    if (!(config.lr > 0.0) || !std::isfinite(config.lr)) throw ParameterError("learning rate must be positive");
    const std::size_t T = dataset.sample_length();
    const std::size_t n = split.train.size();

    Checkpoint ckpt;
    ckpt.arch = config.arch;
    ckpt.config = config.model_config.items().empty() ? models::default_config(config.arch, T, n) : config.model_config;
    ckpt.scaler = scaler;
    ckpt.seed = config.seed;
    auto model = ckpt.model();
    check_model_fits(*model, T, n);
    ckpt.params = model->init(config.seed);

    const SampleMatrix hs = scaled(dataset.h, scaler.h);
    const SampleMatrix bs = scaled(dataset.b, scaler.b);
    nd::Adam adam(nd::AdamOptions{config.lr});
    auto rng = make_rng(config.seed, shuffle_stream);
    std::vector<std::size_t> order = split.train;

    const bool recurrent = !models::is_operator(config.arch);
    const std::size_t batch = recurrent || config.batch == 0 || config.batch >= n ? n : config.batch;
    Tensor seq_h, seq_b;
    if (recurrent) {
        seq_h = time_major(hs, split.train, n);
        seq_b = time_major(bs, split.train, n);
    }

    // One Adam update on rows [start, start + count) of the current order;
    // returns the batch loss, or a non-finite value without updating.
    auto step = [&](std::size_t start, std::size_t count) {
        nd::Tape tape;
        nd::BoundParameters bound(tape, ckpt.params, true);
        nd::Var pred, target;
        if (recurrent) {
            const auto& rec = dynamic_cast<const models::RecurrentModel&>(*model);
            pred = rec.forward(tape, bound, seq_h, &seq_b);
            target = tape.constant(seq_b);
        } else {
            const auto& op = dynamic_cast<const models::OperatorModel&>(*model);
            const std::span<const std::size_t> rows(order.data() + start, count);
            pred = op.forward(tape, bound, rows_tensor(hs, rows), dataset.t);
            target = tape.constant(rows_tensor(bs, rows));
        }
        auto loss = mse_loss(pred, target);
        const double value = loss.value().item();
        if (!std::isfinite(value)) return value;
        tape.backward(loss);
        adam.step(ckpt.params, bound.grads());
        return value;
    };

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        if (batch < n) {
            // Fisher-Yates with an explicit draw so the order is library independent
            for (std::size_t i = n - 1; i > 0; --i) {
                const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
                std::swap(order[i], order[j]);
            }
        }
        double weighted = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t count = std::min(batch, n - start);
            double value = 0.0;
            try {
                value = step(start, count);
            } catch (const NumericError& e) {
                throw TrainingError("loss became non-finite at epoch " + std::to_string(epoch) + " (" + e.what() + ")");
            }
            if (!std::isfinite(value))
                throw TrainingError("loss became non-finite at epoch " + std::to_string(epoch));
            weighted += value * static_cast<double>(count);
        }
        ckpt.epochs = epoch;
        const double epoch_loss = weighted / static_cast<double>(n);
        if (progress && (epoch == 1 || epoch == config.epochs || (config.log_every && epoch % config.log_every == 0)))
            progress(epoch, epoch_loss);
    }
    ckpt.final_loss = train_loss(ckpt, dataset);
    return ckpt;
}

SampleMatrix predict_scaled(const Checkpoint& ckpt, const SampleMatrix& h, const std::vector<double>& t) {
    auto model = ckpt.model();
    model->validate(ckpt.params);
    const std::size_t rows = h.rows(), T = h.cols();
    if (t.size() != T) throw ShapeError("time grid has " + std::to_string(t.size()) + " points, curves have " + std::to_string(T));
    SampleMatrix out(rows, T);
    std::vector<std::size_t> all(rows);
    std::iota(all.begin(), all.end(), 0);
    if (models::is_operator(ckpt.arch)) {
        const auto& op = dynamic_cast<const models::OperatorModel&>(*model);
        for (std::size_t start = 0; start < rows; start += eval_block) {
            const std::size_t count = std::min(eval_block, rows - start);
            const std::span<const std::size_t> idx(all.data() + start, count);
            auto y = op.predict(ckpt.params, rows_tensor(h, idx), t);
            std::copy_n(y.data(), count * T, out.values().data() + start * T);
        }
        return out;
    }
    const auto& rec = dynamic_cast<const models::RecurrentModel&>(*model);
    const std::size_t width = rec.features();
    if (rec.samples() != T)
        throw ShapeError("recurrent model expects " + std::to_string(rec.samples()) + " samples per curve, got " +
                         std::to_string(T));
    for (std::size_t start = 0; start < rows; start += width) {
        const std::size_t count = std::min(width, rows - start);
        const std::span<const std::size_t> idx(all.data() + start, count);
        auto y = rec.predict(ckpt.params, time_major(h, idx, width));
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t s = 0; s < T; ++s) out(start + i, s) = y[s * width + i];
    }
    return out;
}

SampleMatrix predict(const Checkpoint& ckpt, const SampleMatrix& h, const std::vector<double>& t) {
    auto out = predict_scaled(ckpt, scaled(h, ckpt.scaler.h), t);
    ckpt.scaler.b.inverse_inplace(out.values());
    return out;
}

double train_loss(const Checkpoint& ckpt, const data::HysteresisDataset& dataset) {
    const auto& split = dataset.require_split();
    const SampleMatrix h = scaled(dataset.h.gather_rows(split.train), ckpt.scaler.h);
    const SampleMatrix b = scaled(dataset.b.gather_rows(split.train), ckpt.scaler.b);
    const SampleMatrix p = predict_scaled(ckpt, h, dataset.t);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.values().size(); ++i) {
        const double d = p.values()[i] - b.values()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(p.values().size());
}

}  // namespace hysop::train
