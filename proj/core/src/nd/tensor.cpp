#include "hysop/nd/tensor.hpp"

#include <algorithm>

#include "hysop/error.hpp"

namespace hysop::nd {

std::size_t shape_size(const Shape& shape) noexcept {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), values_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(values.begin(), values.end()) {
    if (values_.size() != shape_size(shape_))
        throw ShapeError("tensor of shape " + shape_string(shape_) + " given " +
                         std::to_string(values_.size()) + " values");
}

Tensor Tensor::vector(std::vector<double> v) {
    const std::size_t n = v.size();
    return Tensor(Shape{n}, std::move(v));
}

std::size_t Tensor::dim(std::size_t axis) const {
    if (axis >= shape_.size())
        throw ShapeError("axis " + std::to_string(axis) + " out of range for shape " +
                         shape_string(shape_));
    return shape_[axis];
}

double Tensor::item() const {
    if (values_.size() != 1)
        throw ShapeError("item() needs a one-element tensor, got shape " + shape_string(shape_));
    return values_[0];
}

Tensor Tensor::reshaped(Shape shape) const {
    if (shape_size(shape) != values_.size())
        throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    Tensor out = *this;
    out.shape_ = std::move(shape);
    return out;
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool is_complex(const Tensor& t) noexcept { return t.rank() >= 1 && t.shape().back() == 2; }

}  // namespace hysop::nd
