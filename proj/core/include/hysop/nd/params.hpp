#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hysop/nd/tape.hpp"
#include "hysop/util/random.hpp"

namespace hysop::nd {

// Ordered, named collection of trainable tensors.
class ParameterSet {
public:
    struct Entry {
        std::string name;
        Tensor value;
        bool operator==(const Entry&) const = default;
    };

    void add(std::string name, Tensor value);
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    Entry& operator[](std::size_t i) { return entries_[i]; }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    std::size_t index_of(const std::string& name) const;
    const Tensor& at(const std::string& name) const { return entries_[index_of(name)].value; }
    Tensor& at(const std::string& name) { return entries_[index_of(name)].value; }

    // Total number of scalars.
    std::size_t scalar_count() const;

    bool operator==(const ParameterSet& o) const { return entries_ == o.entries_; }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Parameters placed on a tape as leaves, addressed by name.
class BoundParameters {
public:
    BoundParameters(Tape& tape, const ParameterSet& params, bool requires_grad = true);
    Var operator[](const std::string& name) const { return vars_[set_->index_of(name)]; }
    const std::vector<Var>& vars() const noexcept { return vars_; }
    // Gradients in parameter order (zeros for unused parameters).
    std::vector<Tensor> grads() const;

private:
    const ParameterSet* set_;
    std::vector<Var> vars_;
};

// Uniform on +-sqrt(6 / (fan_in + fan_out)) with fan_in = shape[1] * r and
// fan_out = shape[0] * r, r the product of the remaining dimensions.
// Throws ParameterError for rank < 2 or a zero dimension.
Tensor xavier_uniform(const Shape& shape, Rng& rng);
Tensor xavier_init(const Shape& shape, std::uint64_t seed);

// Uniform on [lo, hi).
Tensor uniform(const Shape& shape, double lo, double hi, Rng& rng);

struct AdamOptions {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam with per-parameter moment buffers.
class Adam {
public:
    explicit Adam(AdamOptions options = {});
    void step(ParameterSet& params, const std::vector<Tensor>& grads);
    std::uint64_t steps() const noexcept { return step_; }
    const AdamOptions& options() const noexcept { return opt_; }

private:
    AdamOptions opt_;
    std::uint64_t step_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

}  // namespace hysop::nd
