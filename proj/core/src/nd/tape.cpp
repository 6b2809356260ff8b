#include "hysop/nd/tape.hpp"

#include "hysop/error.hpp"

namespace hysop::nd {

const Tensor& Var::value() const {
    if (!tape) throw TapeError("unbound variable");
    return tape->value(id);
}

const Tensor& Var::grad() const {
    if (!tape) throw TapeError("unbound variable");
    return tape->grad(id);
}

bool Var::requires_grad() const { return tape && tape->requires_grad(id); }

void Tape::check_owned(const Var& v) const {
    if (v.tape != this || v.id >= nodes_.size()) throw TapeError("variable belongs to another tape");
}

Var Tape::leaf(Tensor value, bool requires_grad) {
    if (finished_) throw TapeError("tape already consumed by backward");
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var{this, nodes_.size() - 1};
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
    if (finished_) throw TapeError("tape already consumed by backward");
    Node n;
    n.value = std::move(value);
    for (const auto& v : inputs) {
        check_owned(v);
        n.inputs.push_back(v.id);
        n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
    }
    if (n.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{this, nodes_.size() - 1};
}

Tensor& Tape::grad_buffer(std::size_t id) {
    auto& n = nodes_[id];
    if (n.grad.size() != n.value.size() || n.grad.shape() != n.value.shape())
        n.grad = Tensor(n.value.shape(), 0.0);
    return n.grad;
}

const Tensor& Tape::grad(std::size_t id) { return grad_buffer(id); }

void Tape::backward(Var loss) {
    check_owned(loss);
    if (finished_) throw TapeError("backward called twice on the same tape");
    if (nodes_[loss.id].value.size() != 1)
        throw TapeError("backward needs a scalar loss, got shape " +
                        shape_string(nodes_[loss.id].value.shape()));
    finished_ = true;
    grad_buffer(loss.id)[0] = 1.0;
    std::vector<Tensor*> grad_in;
    for (std::size_t k = loss.id + 1; k-- > 0;) {
        auto& n = nodes_[k];
        if (!n.backward || n.grad.size() == 0) continue;
        grad_in.assign(n.inputs.size(), nullptr);
        for (std::size_t j = 0; j < n.inputs.size(); ++j)
            if (nodes_[n.inputs[j]].requires_grad) grad_in[j] = &grad_buffer(n.inputs[j]);
        n.backward(n.value, n.grad, grad_in);
    }
}

}  // namespace hysop::nd
