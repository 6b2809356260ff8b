#include "hysop/nd/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <algorithm>
#include <complex>
#include <memory>
#include <numbers>

#include "hysop/error.hpp"
#include "hysop/nd/fft.hpp"

namespace hysop::nd {

namespace {

using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RMat>;
using MapM = Eigen::Map<RMat>;
using Eigen::Index;

MapC mat(const Tensor& t, std::size_t rows, std::size_t cols) {
    return MapC(t.data(), static_cast<Index>(rows), static_cast<Index>(cols));
}
MapM mat(Tensor& t, std::size_t rows, std::size_t cols) {
    return MapM(t.data(), static_cast<Index>(rows), static_cast<Index>(cols));
}

[[noreturn]] void shape_mismatch(const char* op, const Shape& a, const Shape& b) {
    throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a) + " and " +
                     shape_string(b));
}

bool is_suffix(const Shape& small, const Shape& big) {
    if (small.size() > big.size()) return false;
    return std::equal(small.begin(), small.end(), big.end() - static_cast<std::ptrdiff_t>(small.size()));
}

Tape& tape_of(const Var& a) {
    if (!a.tape) throw TapeError("unbound variable");
    return *a.tape;
}

Tape& tape_of(const Var& a, const Var& b) {
    if (a.tape != b.tape || !a.tape) throw TapeError("operands live on different tapes");
    return *a.tape;
}

void check_finite(const Tensor& t, const char* op) {
    for (double v : t.values())
        if (!std::isfinite(v)) throw NumericError(std::string(op) + " produced a non-finite value");
}

enum class Elementwise { add, sub, mul };

Var binary(Var a, Var b, Elementwise kind, const char* name) {
    auto& tape = tape_of(a, b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (!is_suffix(bv.shape(), av.shape())) {
        if (kind != Elementwise::sub && is_suffix(av.shape(), bv.shape())) {
            std::swap(a, b);
        } else {
            shape_mismatch(name, av.shape(), bv.shape());
        }
    }
    const Tensor& x = a.value();
    const Tensor& y = b.value();
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    if (m == 0 && n != 0) shape_mismatch(name, x.shape(), y.shape());
    Tensor out(x.shape());
    for (std::size_t i = 0; i < n; ++i) {
        const double u = x[i];
        const double v = y[i % m];
        out[i] = kind == Elementwise::add ? u + v : kind == Elementwise::sub ? u - v : u * v;
    }
    check_finite(out, name);
    const Tensor* xp = &x;
    const Tensor* yp = &y;
    return tape.record(std::move(out), {a, b},
                       [kind, xp, yp, n, m](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           if (gi[0]) {
                               auto& d = *gi[0];
                               if (kind == Elementwise::mul)
                                   for (std::size_t i = 0; i < n; ++i) d[i] += g[i] * (*yp)[i % m];
                               else
                                   for (std::size_t i = 0; i < n; ++i) d[i] += g[i];
                           }
                           if (gi[1]) {
                               auto& d = *gi[1];
                               if (kind == Elementwise::mul)
                                   for (std::size_t i = 0; i < n; ++i) d[i % m] += g[i] * (*xp)[i];
                               else if (kind == Elementwise::sub)
                                   for (std::size_t i = 0; i < n; ++i) d[i % m] -= g[i];
                               else
                                   for (std::size_t i = 0; i < n; ++i) d[i % m] += g[i];
                           }
                       });
}

template <class F, class DF>
Var unary(Var x, const char* name, F f, DF df) {
    auto& tape = tape_of(x);
    const Tensor& xv = x.value();
    Tensor out(xv.shape());
    for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
    check_finite(out, name);
    const Tensor* xp = &xv;
    return tape.record(std::move(out), {x},
                       [xp, df](const Tensor& y, const Tensor& g, std::vector<Tensor*>& gi) {
                           auto& d = *gi[0];
                           for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * df((*xp)[i], y[i]);
                       });
}

std::size_t leading(const Shape& s, std::size_t trailing_axes) {
    std::size_t n = 1;
    for (std::size_t i = 0; i + trailing_axes < s.size(); ++i) n *= s[i];
    return n;
}

}  // namespace

Var add(Var a, Var b) { return binary(a, b, Elementwise::add, "add"); }
Var sub(Var a, Var b) { return binary(a, b, Elementwise::sub, "sub"); }
Var mul(Var a, Var b) { return binary(a, b, Elementwise::mul, "mul"); }

Var scale(Var a, double s) {
    return unary(a, "scale", [s](double v) { return s * v; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
    return unary(a, "add_scalar", [s](double v) { return v + s; }, [](double, double) { return 1.0; });
}

Var matmul(Var a, Var b, bool trans_a, bool trans_b) {
    auto& tape = tape_of(a, b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (av.rank() != 2 || bv.rank() != 2) shape_mismatch("matmul", av.shape(), bv.shape());
    const std::size_t ar = av.dim(0), ac = av.dim(1), br = bv.dim(0), bc = bv.dim(1);
    const std::size_t m = trans_a ? ac : ar;
    const std::size_t k = trans_a ? ar : ac;
    const std::size_t k2 = trans_b ? bc : br;
    const std::size_t n = trans_b ? br : bc;
    if (k != k2) shape_mismatch("matmul", av.shape(), bv.shape());
    Tensor out(Shape{m, n});
    {
        const auto A = mat(av, ar, ac);
        const auto B = mat(bv, br, bc);
        auto C = mat(out, m, n);
        if (trans_a && trans_b) C.noalias() = A.transpose() * B.transpose();
        else if (trans_a) C.noalias() = A.transpose() * B;
        else if (trans_b) C.noalias() = A * B.transpose();
        else C.noalias() = A * B;
    }
    check_finite(out, "matmul");
    const Tensor* ap = &av;
    const Tensor* bp = &bv;
    return tape.record(std::move(out), {a, b},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const auto G = mat(g, m, n);
                           const auto A = mat(*ap, ar, ac);
                           const auto B = mat(*bp, br, bc);
                           if (gi[0]) {
                               auto dA = mat(*gi[0], ar, ac);
                               // d op(a) = G op(b)^T
                               if (!trans_a && !trans_b) dA.noalias() += G * B.transpose();
                               else if (!trans_a && trans_b) dA.noalias() += G * B;
                               else if (trans_a && !trans_b) dA.noalias() += B * G.transpose();
                               else dA.noalias() += B.transpose() * G.transpose();
                           }
                           if (gi[1]) {
                               auto dB = mat(*gi[1], br, bc);
                               // d op(b) = op(a)^T G
                               if (!trans_a && !trans_b) dB.noalias() += A.transpose() * G;
                               else if (trans_a && !trans_b) dB.noalias() += A * G;
                               else if (!trans_a && trans_b) dB.noalias() += G.transpose() * A;
                               else dB.noalias() += G.transpose() * A.transpose();
                           }
                       });
}

Var linear(Var x, Var w, Var bias) {
    auto& tape = tape_of(x, w);
    if (bias.tape != x.tape) throw TapeError("operands live on different tapes");
    const Tensor& xv = x.value();
    const Tensor& wv = w.value();
    const Tensor& bv = bias.value();
    if (xv.rank() < 1 || wv.rank() != 2 || xv.shape().back() != wv.dim(1))
        shape_mismatch("linear", xv.shape(), wv.shape());
    const std::size_t k = wv.dim(1);
    const std::size_t n = wv.dim(0);
    if (bv.rank() != 1 || bv.dim(0) != n) shape_mismatch("linear", wv.shape(), bv.shape());
    const std::size_t rows = leading(xv.shape(), 1);
    Shape out_shape = xv.shape();
    out_shape.back() = n;
    Tensor out(out_shape);
    {
        auto Y = mat(out, rows, n);
        Y.noalias() = mat(xv, rows, k) * mat(wv, n, k).transpose();
        Y.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(bv.data(), static_cast<Index>(n));
    }
    check_finite(out, "linear");
    const Tensor* xp = &xv;
    const Tensor* wp = &wv;
    return tape.record(std::move(out), {x, w, bias},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const auto G = mat(g, rows, n);
                           if (gi[0]) mat(*gi[0], rows, k).noalias() += G * mat(*wp, n, k);
                           if (gi[1]) mat(*gi[1], n, k).noalias() += G.transpose() * mat(*xp, rows, k);
                           if (gi[2])
                               Eigen::Map<Eigen::RowVectorXd>(gi[2]->data(), static_cast<Index>(n)) +=
                                   G.colwise().sum();
                       });
}

Var linear(Var x, Var w) {
    auto& tape = tape_of(x, w);
    const std::size_t n = w.value().rank() == 2 ? w.value().dim(0) : 0;
    return linear(x, w, tape.constant(Tensor(Shape{n}, 0.0)));
}

Var channel_affine(Var z, Var w, Var bias) {
    auto& tape = tape_of(z, w);
    if (bias.tape != z.tape) throw TapeError("operands live on different tapes");
    const Tensor& zv = z.value();
    const Tensor& wv = w.value();
    const Tensor& bv = bias.value();
    if (zv.rank() != 3 || wv.rank() != 2 || wv.dim(1) != zv.dim(1))
        shape_mismatch("channel_affine", zv.shape(), wv.shape());
    const std::size_t nb = zv.dim(0), ci = zv.dim(1), len = zv.dim(2), co = wv.dim(0);
    if (bv.rank() != 1 || bv.dim(0) != co) shape_mismatch("channel_affine", wv.shape(), bv.shape());
    Tensor out(Shape{nb, co, len});
    const auto W = mat(wv, co, ci);
    const Eigen::Map<const Eigen::VectorXd> bcol(bv.data(), static_cast<Index>(co));
    for (std::size_t b = 0; b < nb; ++b) {
        MapM Y(out.data() + b * co * len, static_cast<Index>(co), static_cast<Index>(len));
        Y.noalias() = W * MapC(zv.data() + b * ci * len, static_cast<Index>(ci), static_cast<Index>(len));
        Y.colwise() += bcol;
    }
    check_finite(out, "channel_affine");
    const Tensor* zp = &zv;
    const Tensor* wp = &wv;
    return tape.record(std::move(out), {z, w, bias},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const auto W = mat(*wp, co, ci);
                           for (std::size_t b = 0; b < nb; ++b) {
                               const MapC G(g.data() + b * co * len, static_cast<Index>(co),
                                            static_cast<Index>(len));
                               if (gi[0])
                                   MapM(gi[0]->data() + b * ci * len, static_cast<Index>(ci),
                                        static_cast<Index>(len))
                                       .noalias() += W.transpose() * G;
                               if (gi[1])
                                   mat(*gi[1], co, ci).noalias() +=
                                       G * MapC(zp->data() + b * ci * len, static_cast<Index>(ci),
                                                static_cast<Index>(len))
                                               .transpose();
                               if (gi[2])
                                   Eigen::Map<Eigen::VectorXd>(gi[2]->data(), static_cast<Index>(co)) +=
                                       G.rowwise().sum();
                           }
                       });
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::gelu: return "gelu";
        case Activation::sigmoid: return "sigmoid";
    }
    return "identity";
}

Activation activation_from_string(const std::string& name) {
    for (auto a : {Activation::identity, Activation::tanh, Activation::relu, Activation::gelu,
                   Activation::sigmoid})
        if (to_string(a) == name) return a;
    throw ParameterError("unknown activation '" + name + "'");
}

Var tanh(Var x) {
    return unary(x, "tanh", [](double v) { return std::tanh(v); },
                 [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var x) {
    return unary(x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
                 [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var gelu(Var x) {
    return unary(
        x, "gelu", [](double v) { return 0.5 * v * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0)); },
        [](double v, double) {
            const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
            const double pdf = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
            return cdf + v * pdf;
        });
}

Var sigmoid(Var x) {
    return unary(x, "sigmoid",
                 [](double v) {
                     return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
                 },
                 [](double, double y) { return y * (1.0 - y); });
}

Var activate(Var x, Activation a) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::tanh: return tanh(x);
        case Activation::relu: return relu(x);
        case Activation::gelu: return gelu(x);
        case Activation::sigmoid: return sigmoid(x);
    }
    return x;
}

Var rfft(Var x) {
    auto& tape = tape_of(x);
    const Tensor& xv = x.value();
    if (xv.rank() < 1 || xv.shape().back() == 0) throw ShapeError("rfft needs a non-empty last axis");
    const std::size_t n = xv.shape().back();
    const std::size_t rows = xv.size() / n;
    auto plan = std::make_shared<FftPlan>(n);
    const std::size_t kk = plan->half_size();
    Shape out_shape = xv.shape();
    out_shape.back() = kk;
    out_shape.push_back(2);
    Tensor out(out_shape);
    std::vector<cplx> bins(kk);
    for (std::size_t r = 0; r < rows; ++r) {
        plan->rfft(std::span<const double>(xv.data() + r * n, n), bins);
        for (std::size_t k = 0; k < kk; ++k) {
            out[(r * kk + k) * 2] = bins[k].real();
            out[(r * kk + k) * 2 + 1] = bins[k].imag();
        }
    }
    return tape.record(std::move(out), {x},
                       [plan, n, kk, rows](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           // d x_j = Re sum_k G_k exp(+2 pi i jk / n)
                           std::vector<cplx> full(n), back(n);
                           auto& d = *gi[0];
                           for (std::size_t r = 0; r < rows; ++r) {
                               std::fill(full.begin(), full.end(), cplx{});
                               for (std::size_t k = 0; k < kk; ++k)
                                   full[k] = {g[(r * kk + k) * 2], g[(r * kk + k) * 2 + 1]};
                               plan->inverse(full, back);
                               for (std::size_t j = 0; j < n; ++j) d[r * n + j] += back[j].real();
                           }
                       });
}

Var irfft(Var spectrum, std::size_t length) {
    auto& tape = tape_of(spectrum);
    const Tensor& sv = spectrum.value();
    if (length == 0) throw ShapeError("irfft length must be at least 1");
    const std::size_t kk = length / 2 + 1;
    if (sv.rank() < 2 || sv.shape().back() != 2 || sv.shape()[sv.rank() - 2] != kk)
        throw ShapeError("irfft of length " + std::to_string(length) + " needs [..., " +
                         std::to_string(kk) + ", 2], got " + shape_string(sv.shape()));
    const std::size_t rows = sv.size() / (2 * kk);
    auto plan = std::make_shared<FftPlan>(length);
    Shape out_shape(sv.shape().begin(), sv.shape().end() - 2);
    out_shape.push_back(length);
    Tensor out(out_shape);
    std::vector<cplx> bins(kk);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < kk; ++k) bins[k] = {sv[(r * kk + k) * 2], sv[(r * kk + k) * 2 + 1]};
        plan->irfft(bins, std::span<double>(out.data() + r * length, length));
    }
    return tape.record(
        std::move(out), {spectrum},
        [plan, length, kk, rows](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
            // d Re X_k = (c_k / n) Re FFT(g)_k, d Im X_k = (c_k / n) Im FFT(g)_k,
            // c_k = 1 at DC and Nyquist (whose imaginary parts are unused), 2 elsewhere.
            std::vector<cplx> in(length), spec(length);
            auto& d = *gi[0];
            const double inv_n = 1.0 / static_cast<double>(length);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < length; ++j) in[j] = g[r * length + j];
                plan->forward(in, spec);
                for (std::size_t k = 0; k < kk; ++k) {
                    const bool edge = k == 0 || 2 * k == length;
                    const double c = (edge ? 1.0 : 2.0) * inv_n;
                    d[(r * kk + k) * 2] += c * spec[k].real();
                    if (!edge) d[(r * kk + k) * 2 + 1] += c * spec[k].imag();
                }
            }
        });
}

namespace {

// Columns (cos, -sin) of exp(-2 pi i k j / n) for k < m: [n, 2m].
RMat forward_basis(std::size_t n, std::size_t m) {
    RMat f(static_cast<Index>(n), static_cast<Index>(2 * m));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
            f(static_cast<Index>(j), static_cast<Index>(2 * k)) = std::cos(a);
            f(static_cast<Index>(j), static_cast<Index>(2 * k + 1)) = -std::sin(a);
        }
    return f;
}

// Rows mapping (Re X_k, Im X_k) to the signal with irfft weights: [2m, n].
RMat inverse_basis(std::size_t n, std::size_t m) {
    RMat g(static_cast<Index>(2 * m), static_cast<Index>(n));
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < m; ++k) {
        const bool edge = k == 0 || 2 * k == n;
        const double c = (edge ? 1.0 : 2.0) * inv_n;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
            g(static_cast<Index>(2 * k), static_cast<Index>(j)) = c * std::cos(a);
            g(static_cast<Index>(2 * k + 1), static_cast<Index>(j)) = edge ? 0.0 : -c * std::sin(a);
        }
    }
    return g;
}

}  // namespace

Var rfft_modes(Var x, std::size_t n_modes) {
    auto& tape = tape_of(x);
    const Tensor& xv = x.value();
    if (xv.rank() < 1 || xv.shape().back() == 0) throw ShapeError("rfft_modes needs a non-empty last axis");
    const std::size_t n = xv.shape().back();
    if (n_modes == 0 || n_modes > n / 2 + 1)
        throw ShapeError("rfft_modes: " + std::to_string(n_modes) + " modes requested, length " +
                         std::to_string(n) + " has " + std::to_string(n / 2 + 1));
    const std::size_t rows = xv.size() / n;
    auto basis = std::make_shared<RMat>(forward_basis(n, n_modes));
    Shape out_shape = xv.shape();
    out_shape.back() = n_modes;
    out_shape.push_back(2);
    Tensor out(out_shape);
    mat(out, rows, 2 * n_modes).noalias() = mat(xv, rows, n) * *basis;
    return tape.record(std::move(out), {x},
                       [basis, n, n_modes, rows](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           mat(*gi[0], rows, n).noalias() += mat(g, rows, 2 * n_modes) * basis->transpose();
                       });
}

Var irfft_modes(Var spectrum, std::size_t length) {
    auto& tape = tape_of(spectrum);
    const Tensor& sv = spectrum.value();
    if (length == 0) throw ShapeError("irfft_modes length must be at least 1");
    if (sv.rank() < 2 || sv.shape().back() != 2 || sv.shape()[sv.rank() - 2] == 0 ||
        sv.shape()[sv.rank() - 2] > length / 2 + 1)
        throw ShapeError("irfft_modes of length " + std::to_string(length) + " needs [..., m, 2] with m <= " +
                         std::to_string(length / 2 + 1) + ", got " + shape_string(sv.shape()));
    const std::size_t m = sv.shape()[sv.rank() - 2];
    const std::size_t rows = sv.size() / (2 * m);
    auto basis = std::make_shared<RMat>(inverse_basis(length, m));
    Shape out_shape(sv.shape().begin(), sv.shape().end() - 2);
    out_shape.push_back(length);
    Tensor out(out_shape);
    mat(out, rows, length).noalias() = mat(sv, rows, 2 * m) * *basis;
    return tape.record(std::move(out), {spectrum},
                       [basis, length, m, rows](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           mat(*gi[0], rows, 2 * m).noalias() += mat(g, rows, length) * basis->transpose();
                       });
}

Var spectral_mode_mix(Var z, Var r, std::size_t n_modes) {
    auto& tape = tape_of(z, r);
    const Tensor& zv = z.value();
    const Tensor& rv = r.value();
    if (zv.rank() != 4 || zv.dim(3) != 2 || rv.rank() != 4 || rv.dim(3) != 2 || rv.dim(2) != zv.dim(1))
        shape_mismatch("spectral_mode_mix", zv.shape(), rv.shape());
    const std::size_t nb = zv.dim(0), ci = zv.dim(1), kk = zv.dim(2), co = rv.dim(1);
    if (n_modes == 0 || n_modes > kk || n_modes > rv.dim(0))
        throw ShapeError("spectral_mode_mix: " + std::to_string(n_modes) + " modes requested, " +
                         std::to_string(kk) + " available in the spectrum and " +
                         std::to_string(rv.dim(0)) + " in the weights");
    Tensor out(Shape{nb, co, kk, 2});
    auto zc = [&](std::size_t b, std::size_t i, std::size_t k) {
        const std::size_t o = ((b * ci + i) * kk + k) * 2;
        return cplx(zv[o], zv[o + 1]);
    };
    auto rc = [&](std::size_t k, std::size_t o, std::size_t i) {
        const std::size_t p = ((k * co + o) * ci + i) * 2;
        return cplx(rv[p], rv[p + 1]);
    };
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t o = 0; o < co; ++o)
            for (std::size_t k = 0; k < n_modes; ++k) {
                cplx acc = 0.0;
                for (std::size_t i = 0; i < ci; ++i) acc += rc(k, o, i) * zc(b, i, k);
                const std::size_t p = ((b * co + o) * kk + k) * 2;
                out[p] = acc.real();
                out[p + 1] = acc.imag();
            }
    const Tensor* zp = &zv;
    const Tensor* rp = &rv;
    return tape.record(std::move(out), {z, r},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const Tensor& Z = *zp;
                           const Tensor& R = *rp;
                           for (std::size_t b = 0; b < nb; ++b)
                               for (std::size_t o = 0; o < co; ++o)
                                   for (std::size_t k = 0; k < n_modes; ++k) {
                                       const std::size_t gp = ((b * co + o) * kk + k) * 2;
                                       const cplx gg(g[gp], g[gp + 1]);
                                       for (std::size_t i = 0; i < ci; ++i) {
                                           const std::size_t zq = ((b * ci + i) * kk + k) * 2;
                                           const std::size_t rq = ((k * co + o) * ci + i) * 2;
                                           if (gi[0]) {
                                               const cplx d = std::conj(cplx(R[rq], R[rq + 1])) * gg;
                                               (*gi[0])[zq] += d.real();
                                               (*gi[0])[zq + 1] += d.imag();
                                           }
                                           if (gi[1]) {
                                               const cplx d = gg * std::conj(cplx(Z[zq], Z[zq + 1]));
                                               (*gi[1])[rq] += d.real();
                                               (*gi[1])[rq + 1] += d.imag();
                                           }
                                       }
                                   }
                       });
}

Var dwt(Var x, const WaveletPlan& plan) {
    auto& tape = tape_of(x);
    const Tensor& xv = x.value();
    const std::size_t n = plan.length();
    if (xv.rank() < 1 || xv.shape().back() != n)
        throw ShapeError("dwt plan for length " + std::to_string(n) + " applied to " +
                         shape_string(xv.shape()));
    const std::size_t rows = xv.size() / n;
    const std::size_t p = plan.packed_size();
    Shape out_shape = xv.shape();
    out_shape.back() = p;
    Tensor out(out_shape);
    auto shared = std::make_shared<WaveletPlan>(plan);
    for (std::size_t r = 0; r < rows; ++r)
        shared->forward(std::span<const double>(xv.data() + r * n, n), std::span<double>(out.data() + r * p, p));
    return tape.record(std::move(out), {x},
                       [shared, rows, n, p](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           std::vector<double> tmp(n);
                           for (std::size_t r = 0; r < rows; ++r) {
                               shared->forward_adjoint(std::span<const double>(g.data() + r * p, p), tmp);
                               for (std::size_t j = 0; j < n; ++j) (*gi[0])[r * n + j] += tmp[j];
                           }
                       });
}

Var idwt(Var coeffs, const WaveletPlan& plan) {
    auto& tape = tape_of(coeffs);
    const Tensor& cv = coeffs.value();
    const std::size_t n = plan.length();
    const std::size_t p = plan.packed_size();
    if (cv.rank() < 1 || cv.shape().back() != p)
        throw ShapeError("idwt plan expects " + std::to_string(p) + " packed coefficients, got " +
                         shape_string(cv.shape()));
    const std::size_t rows = cv.size() / p;
    Shape out_shape = cv.shape();
    out_shape.back() = n;
    Tensor out(out_shape);
    auto shared = std::make_shared<WaveletPlan>(plan);
    for (std::size_t r = 0; r < rows; ++r)
        shared->inverse(std::span<const double>(cv.data() + r * p, p), std::span<double>(out.data() + r * n, n));
    return tape.record(std::move(out), {coeffs},
                       [shared, rows, n, p](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           std::vector<double> tmp(p);
                           for (std::size_t r = 0; r < rows; ++r) {
                               shared->inverse_adjoint(std::span<const double>(g.data() + r * n, n), tmp);
                               for (std::size_t j = 0; j < p; ++j) (*gi[0])[r * p + j] += tmp[j];
                           }
                       });
}

Var band_mix(Var coeffs, Var r, const WaveletPlan& plan) {
    auto& tape = tape_of(coeffs, r);
    const Tensor& cv = coeffs.value();
    const Tensor& rv = r.value();
    const std::size_t na = plan.approx_size();
    const std::size_t p = plan.packed_size();
    if (cv.rank() != 3 || cv.dim(2) != p || rv.rank() != 3 || rv.dim(0) != na ||
        rv.dim(1) != cv.dim(1) || rv.dim(2) != cv.dim(1))
        shape_mismatch("band_mix", cv.shape(), rv.shape());
    const std::size_t nb = cv.dim(0), ch = cv.dim(1);
    Tensor out = cv;
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t o = 0; o < ch; ++o)
            for (std::size_t k = 0; k < na; ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i < ch; ++i) acc += rv[(k * ch + o) * ch + i] * cv[(b * ch + i) * p + k];
                out[(b * ch + o) * p + k] = acc;
            }
    const Tensor* cp = &cv;
    const Tensor* rp = &rv;
    return tape.record(std::move(out), {coeffs, r},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const Tensor& C = *cp;
                           const Tensor& R = *rp;
                           if (gi[0]) {
                               auto& d = *gi[0];
                               for (std::size_t b = 0; b < nb; ++b)
                                   for (std::size_t i = 0; i < ch; ++i) {
                                       const std::size_t row = (b * ch + i) * p;
                                       for (std::size_t k = 0; k < na; ++k) {
                                           double acc = 0.0;
                                           for (std::size_t o = 0; o < ch; ++o)
                                               acc += R[(k * ch + o) * ch + i] * g[(b * ch + o) * p + k];
                                           d[row + k] += acc;
                                       }
                                       for (std::size_t k = na; k < p; ++k) d[row + k] += g[row + k];
                                   }
                           }
                           if (gi[1]) {
                               auto& d = *gi[1];
                               for (std::size_t b = 0; b < nb; ++b)
                                   for (std::size_t k = 0; k < na; ++k)
                                       for (std::size_t o = 0; o < ch; ++o) {
                                           const double gg = g[(b * ch + o) * p + k];
                                           for (std::size_t i = 0; i < ch; ++i)
                                               d[(k * ch + o) * ch + i] += gg * C[(b * ch + i) * p + k];
                                       }
                           }
                       });
}

Var wavelet_mix(Var z, Var r, const WaveletPlan& plan) {
    auto& tape = tape_of(z, r);
    const Tensor& zv = z.value();
    const Tensor& rv = r.value();
    const std::size_t na = plan.approx_size();
    const std::size_t len = plan.length();
    if (zv.rank() != 3 || zv.dim(2) != len || rv.rank() != 3 || rv.dim(0) != na || rv.dim(1) != zv.dim(1) ||
        rv.dim(2) != zv.dim(1))
        shape_mismatch("wavelet_mix", zv.shape(), rv.shape());
    const std::size_t nb = zv.dim(0), ch = zv.dim(1), rows = nb * ch;
    const auto nbi = static_cast<Index>(nb), chi = static_cast<Index>(ch);
    const MapC A(plan.approx_analysis().data(), static_cast<Index>(na), static_cast<Index>(len));
    const MapC S(plan.approx_synthesis().data(), static_cast<Index>(len), static_cast<Index>(na));
    // coefficient k of every (batch, channel) as an [nb, ch] block: approx[k]
    const RMat a = mat(zv, rows, len) * A.transpose();
    auto approx = std::make_shared<std::vector<RMat>>(na, RMat(nbi, chi));
    for (std::size_t k = 0; k < na; ++k)
        for (std::size_t q = 0; q < rows; ++q)
            (*approx)[k](static_cast<Index>(q / ch), static_cast<Index>(q % ch)) = a(static_cast<Index>(q), static_cast<Index>(k));
    RMat delta(static_cast<Index>(rows), static_cast<Index>(na));
    for (std::size_t k = 0; k < na; ++k) {
        const MapC Rk(rv.data() + k * ch * ch, chi, chi);
        const RMat mixed = (*approx)[k] * Rk.transpose();
        for (std::size_t q = 0; q < rows; ++q)
            delta(static_cast<Index>(q), static_cast<Index>(k)) =
                mixed(static_cast<Index>(q / ch), static_cast<Index>(q % ch)) - a(static_cast<Index>(q), static_cast<Index>(k));
    }
    Tensor out = zv;
    mat(out, rows, len).noalias() += delta * S.transpose();
    const Tensor* rp = &rv;
    const WaveletPlan* pp = &plan;
    return tape.record(
        std::move(out), {z, r}, [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
            const MapC A(pp->approx_analysis().data(), static_cast<Index>(na), static_cast<Index>(len));
            const MapC S(pp->approx_synthesis().data(), static_cast<Index>(len), static_cast<Index>(na));
            const RMat gd = mat(g, rows, len) * S;
            RMat ga(static_cast<Index>(rows), static_cast<Index>(na));
            RMat gk(nbi, chi);
            for (std::size_t k = 0; k < na; ++k) {
                for (std::size_t q = 0; q < rows; ++q)
                    gk(static_cast<Index>(q / ch), static_cast<Index>(q % ch)) = gd(static_cast<Index>(q), static_cast<Index>(k));
                const MapC Rk(rp->data() + k * ch * ch, chi, chi);
                if (gi[0]) {
                    const RMat back = gk * Rk;
                    for (std::size_t q = 0; q < rows; ++q)
                        ga(static_cast<Index>(q), static_cast<Index>(k)) =
                            back(static_cast<Index>(q / ch), static_cast<Index>(q % ch)) - gd(static_cast<Index>(q), static_cast<Index>(k));
                }
                if (gi[1]) MapM(gi[1]->data() + k * ch * ch, chi, chi).noalias() += gk.transpose() * (*approx)[k];
            }
            if (gi[0]) {
                auto dz = mat(*gi[0], rows, len);
                dz += mat(g, rows, len);
                dz.noalias() += ga * A;
            }
        });
}

Var reshape(Var x, Shape shape) {
    auto& tape = tape_of(x);
    Tensor out = x.value().reshaped(std::move(shape));
    return tape.record(std::move(out), {x}, [](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
        auto& d = *gi[0];
        for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    });
}

Var slice(Var x, std::size_t axis, std::size_t begin, std::size_t end) {
    auto& tape = tape_of(x);
    const Tensor& xv = x.value();
    if (axis >= xv.rank() || begin > end || end > xv.dim(axis))
        throw ShapeError("slice [" + std::to_string(begin) + ", " + std::to_string(end) + ") on axis " +
                         std::to_string(axis) + " of " + shape_string(xv.shape()));
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= xv.dim(i);
    for (std::size_t i = axis + 1; i < xv.rank(); ++i) inner *= xv.dim(i);
    const std::size_t len = xv.dim(axis);
    const std::size_t w = end - begin;
    Shape out_shape = xv.shape();
    out_shape[axis] = w;
    Tensor out(out_shape);
    for (std::size_t o = 0; o < outer; ++o)
        std::copy_n(xv.data() + (o * len + begin) * inner, w * inner, out.data() + o * w * inner);
    return tape.record(std::move(out), {x},
                       [=](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           auto& d = *gi[0];
                           for (std::size_t o = 0; o < outer; ++o)
                               for (std::size_t q = 0; q < w * inner; ++q)
                                   d[(o * len + begin) * inner + q] += g[o * w * inner + q];
                       });
}

Var sum(Var x) {
    auto& tape = tape_of(x);
    double s = 0.0;
    for (double v : x.value().values()) s += v;
    return tape.record(Tensor::scalar(s), {x}, [](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
        for (auto& v : gi[0]->values()) v += g[0];
    });
}

Var mean(Var x) {
    const std::size_t n = x.value().size();
    if (n == 0) throw ShapeError("mean of an empty tensor");
    return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var mse(Var pred, Var target) {
    auto& tape = tape_of(pred, target);
    const Tensor& pv = pred.value();
    const Tensor& tv = target.value();
    if (pv.shape() != tv.shape()) shape_mismatch("mse", pv.shape(), tv.shape());
    if (pv.size() == 0) throw ShapeError("mse of empty tensors");
    double s = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const double d = pv[i] - tv[i];
        s += d * d;
    }
    const double inv = 1.0 / static_cast<double>(pv.size());
    const Tensor* pp = &pv;
    const Tensor* tp = &tv;
    Tensor out = Tensor::scalar(s * inv);
    check_finite(out, "mse");
    return tape.record(std::move(out), {pred, target},
                       [pp, tp, inv](const Tensor&, const Tensor& g, std::vector<Tensor*>& gi) {
                           const double c = 2.0 * inv * g[0];
                           for (std::size_t i = 0; i < pp->size(); ++i) {
                               const double d = c * ((*pp)[i] - (*tp)[i]);
                               if (gi[0]) (*gi[0])[i] += d;
                               if (gi[1]) (*gi[1])[i] -= d;
                           }
                       });
}

}  // namespace hysop::nd
