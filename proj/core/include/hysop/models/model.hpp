#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hysop/nd/ops.hpp"
#include "hysop/nd/params.hpp"

namespace hysop::models {

enum class Arch { deeponet, fno, rifno, wno, rnn, lstm, gru, edlstm };

std::string to_string(Arch arch);
Arch arch_from_string(const std::string& name);
bool is_operator(Arch arch) noexcept;
const std::vector<Arch>& all_archs();

// Flat key/value configuration as stored in checkpoints.
class KeyValues {
public:
    void set(const std::string& key, const std::string& value) { map_[key] = value; }
    void set(const std::string& key, std::size_t value) { map_[key] = std::to_string(value); }
    void set(const std::string& key, double value);
    bool has(const std::string& key) const { return map_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    const std::map<std::string, std::string>& items() const noexcept { return map_; }
    bool operator==(const KeyValues&) const = default;

private:
    std::map<std::string, std::string> map_;
};

class Model {
public:
    virtual ~Model() = default;
    virtual Arch arch() const = 0;
    virtual KeyValues config() const = 0;
    // Closed-form parameter count of the configuration.
    virtual std::size_t parameter_count() const = 0;
    // Deterministic initialization from a seed.
    virtual nd::ParameterSet init(std::uint64_t seed) const = 0;
    // Throws FormatError unless names and shapes match init() exactly.
    void validate(const nd::ParameterSet& params) const;
};

// Operators map a batch of H curves [batch, T] on a time grid to B curves.
class OperatorModel : public Model {
public:
    virtual nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h,
                            const std::vector<double>& t) const = 0;
    virtual std::size_t samples() const = 0;
    nd::Tensor predict(const nd::ParameterSet& params, const nd::Tensor& h,
                       const std::vector<double>& t) const;
};

// Recurrent baselines map a time-major sequence [T, features] to [T, features]
// where the feature axis is the set of curves.
class RecurrentModel : public Model {
public:
    // Training-mode forward. `targets` is required only by models that
    // use teacher forcing.
    virtual nd::Var forward(nd::Tape& tape, const nd::BoundParameters& p, const nd::Tensor& h_seq,
                            const nd::Tensor* targets) const = 0;
    // Inference-mode prediction (autoregressive where applicable).
    virtual nd::Tensor predict(const nd::ParameterSet& params, const nd::Tensor& h_seq) const;
    virtual std::size_t features() const = 0;
    virtual std::size_t samples() const = 0;
};

// Builds a model from a stored configuration.
std::unique_ptr<Model> make_model(Arch arch, const KeyValues& config);
// Default configuration for curves of length `samples`; recurrent
// models use `features` as their input/output width.
KeyValues default_config(Arch arch, std::size_t samples, std::size_t features);

}  // namespace hysop::models
