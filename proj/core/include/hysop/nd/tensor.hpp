#pragma once

#include <cstddef>
#include <initializer_list>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace hysop::nd {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape) noexcept;
std::string shape_string(const Shape& shape);

// Storage starts on a cache line so vectorized reductions see the same
// alignment, and hence the same summation order, on every run.
template <class T>
struct CacheAligned {
    using value_type = T;
    static constexpr std::align_val_t alignment{64};

    CacheAligned() = default;
    template <class U>
    CacheAligned(const CacheAligned<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

    template <class U>
    bool operator==(const CacheAligned<U>&) const noexcept { return true; }
};

using Buffer = std::vector<double, CacheAligned<double>>;

// Dense row-major block of doubles. Complex data is stored with a trailing
// dimension of 2 holding (re, im) pairs.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> values);

    static Tensor scalar(double v) { return Tensor(Shape{}, std::vector<double>{v}); }
    static Tensor vector(std::vector<double> v);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const;
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    // Value of a one-element tensor.
    double item() const;
    // Same values under a new shape with the same element count.
    Tensor reshaped(Shape shape) const;
    void fill(double v);

    bool operator==(const Tensor&) const = default;

private:
    Shape shape_;
    Buffer values_;
};

// Complex views over a tensor whose last dimension is 2.
bool is_complex(const Tensor& t) noexcept;

}  // namespace hysop::nd
