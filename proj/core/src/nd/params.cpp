#include "hysop/nd/params.hpp"

#include <cmath>
#include <random>

#include "hysop/error.hpp"

namespace hysop::nd {

void ParameterSet::add(std::string name, Tensor value) {
    if (index_.count(name)) throw ParameterError("duplicate parameter '" + name + "'");
    index_.emplace(name, entries_.size());
    entries_.push_back({std::move(name), std::move(value)});
}

std::size_t ParameterSet::index_of(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw ParameterError("unknown parameter '" + name + "'");
    return it->second;
}

std::size_t ParameterSet::scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.value.size();
    return n;
}

BoundParameters::BoundParameters(Tape& tape, const ParameterSet& params, bool requires_grad)
    : set_(&params) {
    vars_.reserve(params.size());
    for (const auto& e : params.entries()) vars_.push_back(tape.leaf(e.value, requires_grad));
}

std::vector<Tensor> BoundParameters::grads() const {
    std::vector<Tensor> g;
    g.reserve(vars_.size());
    for (const auto& v : vars_) g.push_back(v.grad());
    return g;
}

Tensor xavier_uniform(const Shape& shape, Rng& rng) {
    if (shape.size() < 2) throw ParameterError("xavier init needs rank >= 2, got " + shape_string(shape));
    for (std::size_t d : shape)
        if (d == 0) throw ParameterError("xavier init of degenerate shape " + shape_string(shape));
    std::size_t receptive = 1;
    for (std::size_t i = 2; i < shape.size(); ++i) receptive *= shape[i];
    const double fan_in = static_cast<double>(shape[1] * receptive);
    const double fan_out = static_cast<double>(shape[0] * receptive);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    return uniform(shape, -bound, bound, rng);
}

Tensor xavier_init(const Shape& shape, std::uint64_t seed) {
    auto rng = make_rng(seed, 0);
    return xavier_uniform(shape, rng);
}

Tensor uniform(const Shape& shape, double lo, double hi, Rng& rng) {
    Tensor t(shape);
    std::uniform_real_distribution<double> u(lo, hi);
    for (auto& v : t.values()) v = u(rng);
    return t;
}

Adam::Adam(AdamOptions options) : opt_(options) {
    if (!(opt_.lr > 0.0) || !(opt_.beta1 >= 0.0 && opt_.beta1 < 1.0) ||
        !(opt_.beta2 >= 0.0 && opt_.beta2 < 1.0) || !(opt_.eps > 0.0))
        throw ParameterError("invalid Adam hyperparameters");
}

void Adam::step(ParameterSet& params, const std::vector<Tensor>& grads) {
    if (grads.size() != params.size()) throw ShapeError("Adam: gradient count does not match parameters");
    if (m_.empty()) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_.emplace_back(params[i].value.shape(), 0.0);
            v_.emplace_back(params[i].value.shape(), 0.0);
        }
    } else if (m_.size() != params.size()) {
        throw ShapeError("Adam: parameter set changed between steps");
    }
    ++step_;
    const double t = static_cast<double>(step_);
    const double bc1 = 1.0 - std::pow(opt_.beta1, t);
    const double bc2 = 1.0 - std::pow(opt_.beta2, t);
    const double step_size = opt_.lr / bc1;
    const double sqrt_bc2 = std::sqrt(bc2);
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i].value;
        const auto& g = grads[i];
        if (g.shape() != p.shape() || m_[i].shape() != p.shape())
            throw ShapeError("Adam: gradient shape " + shape_string(g.shape()) + " for parameter '" +
                             params[i].name + "' of shape " + shape_string(p.shape()));
        auto& m = m_[i];
        auto& v = v_[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = opt_.beta1 * m[j] + (1.0 - opt_.beta1) * g[j];
            v[j] = opt_.beta2 * v[j] + (1.0 - opt_.beta2) * g[j] * g[j];
            p[j] -= step_size * m[j] / (std::sqrt(v[j]) / sqrt_bc2 + opt_.eps);
        }
    }
}

}  // namespace hysop::nd
