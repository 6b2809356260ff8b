#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "hysop/nd/tensor.hpp"

namespace hysop::nd {

class Tape;

// Handle to a value recorded on a tape.
struct Var {
    Tape* tape = nullptr;
    std::size_t id = 0;

    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }
    // Gradient after Tape::backward; zeros if the loss does not depend on it.
    const Tensor& grad() const;
    bool requires_grad() const;
};

// Receives the node's forward value, its gradient and one accumulation
// buffer per input (nullptr when that input does not need a gradient).
// Buffers are zero-initialized and must be added to, never overwritten.
using BackwardFn = std::function<void(const Tensor& out, const Tensor& grad_out,
                                      std::vector<Tensor*>& grad_in)>;

// Reverse-mode recording of one forward pass. Nodes live in a deque so
// references to values stay valid while the tape grows. A tape supports a
// single backward pass.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Tensor value, bool requires_grad = true);
    Var constant(Tensor value) { return leaf(std::move(value), false); }

    // Records an op output. The node only keeps `backward` if some input
    // requires a gradient.
    Var record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

    // Seeds d loss / d loss = 1 and propagates in reverse creation order.
    // Throws TapeError for a non-scalar loss or a second call.
    void backward(Var loss);

    const Tensor& value(std::size_t id) const { return nodes_[id].value; }
    const Tensor& grad(std::size_t id);
    bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool finished() const noexcept { return finished_; }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        bool requires_grad = false;
        std::vector<std::size_t> inputs;
        BackwardFn backward;
    };
    Tensor& grad_buffer(std::size_t id);
    void check_owned(const Var& v) const;

    std::deque<Node> nodes_;
    bool finished_ = false;
};

}  // namespace hysop::nd
