#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hysop/data/dataset.hpp"
#include "hysop/models/model.hpp"

namespace hysop::train {

struct TrainConfig {
    models::Arch arch = models::Arch::fno;
    // Empty means default_config() for the dataset's T and train size.
    models::KeyValues model_config;
    std::size_t epochs = 10000;
    double lr = 1e-4;
    std::size_t batch = 100;  // 0 = full batch; recurrent models always use the full batch
    std::uint64_t seed = 0;
    std::size_t log_every = 100;
};

// Learning rate and batch size used for each architecture by default.
TrainConfig default_train_config(models::Arch arch);

struct Checkpoint {
    models::Arch arch = models::Arch::fno;
    models::KeyValues config;
    data::MinMaxScaler scaler;
    nd::ParameterSet params;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    double final_loss = 0.0;

    std::unique_ptr<models::Model> model() const;
    bool operator==(const Checkpoint&) const = default;
};

// Called with (epoch, mean training loss) after epoch 1, every log_every
// epochs and after the last one.
using ProgressFn = std::function<void(std::size_t, double)>;

// Adam on the scaled mean-square loss over shuffled minibatches of the
// train partition. Throws TrainingError naming the epoch if the loss stops
// being finite.
Checkpoint train(const TrainConfig& config, const data::HysteresisDataset& dataset,
                 const ProgressFn& progress = {});

// Model output in scaled units for scaled inputs h [N, T] on grid t.
// Operators run in fixed blocks of 100 rows; recurrent models consume the
// rows in groups of their feature width, zero-padding the last group.
data::SampleMatrix predict_scaled(const Checkpoint& ckpt, const data::SampleMatrix& h_scaled,
                                  const std::vector<double>& t);

// Physical-unit prediction for physical inputs.
data::SampleMatrix predict(const Checkpoint& ckpt, const data::SampleMatrix& h, const std::vector<double>& t);

// Inference-mode scaled MSE over the train partition; the value stored as
// final_loss.
double train_loss(const Checkpoint& ckpt, const data::HysteresisDataset& dataset);

}  // namespace hysop::train
