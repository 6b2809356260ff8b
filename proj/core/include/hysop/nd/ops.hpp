#pragma once

#include <cstddef>
#include <string>

#include "hysop/nd/tape.hpp"
#include "hysop/nd/wavelet.hpp"

namespace hysop::nd {

// Binary elementwise ops accept equal shapes or a right operand whose shape
// is a suffix of the left one (repeated over the leading axes).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);

// 2-D product op(a) * op(b) with optional transposes.
Var matmul(Var a, Var b, bool trans_a = false, bool trans_b = false);

// x[..., k] * w^T + bias with w[n, k] and bias[n]; leading axes of x are
// treated as rows.
Var linear(Var x, Var w, Var bias);
Var linear(Var x, Var w);

// Pointwise channel map on [batch, c_in, length]: out[b] = w * z[b] + bias
// with w[c_out, c_in] and bias[c_out].
Var channel_affine(Var z, Var w, Var bias);

enum class Activation { identity, tanh, relu, gelu, sigmoid };
std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

Var activate(Var x, Activation a);
Var tanh(Var x);
Var relu(Var x);
Var gelu(Var x);  // exact erf form
Var sigmoid(Var x);

// Unnormalized real FFT along the last axis: [..., n] -> [..., n/2 + 1, 2].
Var rfft(Var x);
// Inverse of rfft for the given signal length (1/n included).
Var irfft(Var spectrum, std::size_t length);

// The leading n_modes bins of rfft by direct summation, [..., n] ->
// [..., n_modes, 2]; cheaper than a full transform when few modes are kept.
Var rfft_modes(Var x, std::size_t n_modes);
// irfft of a spectrum [..., m, 2] whose bins from m upward are zero.
Var irfft_modes(Var spectrum, std::size_t length);

// Complex channel mixing of the first n_modes bins:
//   out[b, o, k] = sum_i R[k, o, i] * Z[b, i, k]   for k < n_modes, else 0
// Z is [batch, c_in, modes, 2], R is [m, c_out, c_in, 2] with m >= n_modes.
Var spectral_mode_mix(Var z, Var r, std::size_t n_modes);

// Wavelet transforms along the last axis using a fixed plan.
Var dwt(Var x, const WaveletPlan& plan);
Var idwt(Var coeffs, const WaveletPlan& plan);

// Real channel mixing of the approximation band of packed coefficients
// c[batch, ch, packed] with R[n_approx, ch, ch]; detail bands pass through.
Var band_mix(Var coeffs, Var r, const WaveletPlan& plan);
// idwt(band_mix(dwt(z), r)) for z [batch, ch, length] in one step, using
// perfect reconstruction: z + S (R(A z) - A z) with A, S the dense
// approximation-band maps of the plan.
Var wavelet_mix(Var z, Var r, const WaveletPlan& plan);

Var reshape(Var x, Shape shape);
// Half-open range [begin, end) along one axis.
Var slice(Var x, std::size_t axis, std::size_t begin, std::size_t end);

Var sum(Var x);
Var mean(Var x);
// mean((pred - target)^2) over all entries.
Var mse(Var pred, Var target);

}  // namespace hysop::nd
