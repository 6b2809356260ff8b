#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hysop/error.hpp"
#include "hysop/nd/fft.hpp"
#include "hysop/nd/gradcheck.hpp"
#include "hysop/nd/ops.hpp"
#include "hysop/nd/params.hpp"
#include "hysop/nd/wavelet.hpp"

using namespace hysop;
using namespace hysop::nd;

namespace {

Tensor random_tensor(const Shape& shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    auto rng = make_rng(seed, 1);
    return uniform(shape, lo, hi, rng);
}

// Contracts every output entry with fixed random weights so that each one
// reaches the loss.
Var probe(Tape& tape, Var v, std::uint64_t seed = 77) {
    return sum(mul(v, tape.constant(random_tensor(v.shape(), seed))));
}

double check(const ScalarFn& f, const std::vector<Tensor>& inputs) {
    return gradcheck(f, inputs).max_rel_error;
}

std::vector<cplx> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0, im = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const long double th = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((j * k) % n) /
                                   static_cast<long double>(n);
            re += x[j] * std::cos(th);
            im += x[j] * std::sin(th);
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

std::vector<double> test_signal(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = std::sin(0.05 * std::pow(double(j), 1.3)) + 0.01 * double(j);
    return x;
}

}  // namespace

TEST_SUITE("tensor") {
    TEST_CASE("construction and reshape") {
        Tensor t(Shape{2, 3}, 1.5);
        CHECK(t.size() == 6);
        CHECK(t.dim(1) == 3);
        CHECK_THROWS_AS(t.dim(2), ShapeError);
        CHECK_THROWS_AS(Tensor(Shape{2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
        CHECK(t.reshaped(Shape{3, 2}).shape() == Shape{3, 2});
        CHECK_THROWS_AS(t.reshaped(Shape{4}), ShapeError);
        CHECK_THROWS_AS(t.item(), ShapeError);
        CHECK(Tensor::scalar(4.0).item() == 4.0);
    }
}

TEST_SUITE("tape") {
    TEST_CASE("x^2 at 3 has gradient 6") {
        Tape tape;
        auto x = tape.leaf(Tensor::scalar(3.0));
        tape.backward(mul(x, x));
        CHECK(x.grad().item() == 6.0);
    }

    TEST_CASE("fan-out accumulates: y = x + x") {
        Tape tape;
        auto x = tape.leaf(Tensor::scalar(0.7));
        tape.backward(add(x, x));
        CHECK(x.grad().item() == 2.0);
    }

    TEST_CASE("non-scalar loss and double backward are rejected") {
        Tape tape;
        auto x = tape.leaf(Tensor(Shape{3}, 1.0));
        CHECK_THROWS_AS(tape.backward(x), TapeError);
        auto s = sum(x);
        tape.backward(s);
        CHECK_THROWS_AS(tape.backward(s), TapeError);
        CHECK_THROWS_AS(tape.leaf(Tensor::scalar(1.0)), TapeError);
    }

    TEST_CASE("constants receive no gradient record") {
        Tape tape;
        auto c = tape.constant(Tensor::scalar(2.0));
        auto x = tape.leaf(Tensor::scalar(5.0));
        auto y = mul(c, x);
        CHECK_FALSE(c.requires_grad());
        CHECK(y.requires_grad());
        tape.backward(y);
        CHECK(x.grad().item() == 2.0);
        CHECK(c.grad().item() == 0.0);
    }

    TEST_CASE("variables from another tape are rejected") {
        Tape a;
        Tape b;
        auto x = a.leaf(Tensor::scalar(1.0));
        auto y = b.leaf(Tensor::scalar(1.0));
        CHECK_THROWS_AS(add(x, y), TapeError);
    }
}

TEST_SUITE("ops") {
    TEST_CASE("trivial values") {
        Tape tape;
        Tensor eye(Shape{3, 3}, 0.0);
        for (int i = 0; i < 3; ++i) eye[i * 4] = 1.0;
        const auto xv = random_tensor({3, 2}, 4);
        CHECK(matmul(tape.constant(eye), tape.constant(xv)).value() == xv);
        CHECK(tanh(tape.constant(Tensor::scalar(0.0))).value().item() == 0.0);
        CHECK(relu(tape.constant(Tensor::scalar(-1.0))).value().item() == 0.0);
        CHECK(gelu(tape.constant(Tensor::scalar(1.0))).value().item() ==
              doctest::Approx(0.8413447460685429).epsilon(1e-15));
        CHECK(sigmoid(tape.constant(Tensor::scalar(0.0))).value().item() == 0.5);
    }

    TEST_CASE("shape errors name both shapes") {
        Tape tape;
        auto a = tape.constant(Tensor(Shape{5, 4}));
        auto b = tape.constant(Tensor(Shape{3, 4}));
        try {
            matmul(a, b);
            FAIL("expected ShapeError");
        } catch (const ShapeError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("[5, 4]") != std::string::npos);
            CHECK(msg.find("[3, 4]") != std::string::npos);
        }
        CHECK_THROWS_AS(add(a, b), ShapeError);
        CHECK_THROWS_AS(mse(a, b), ShapeError);
    }

    TEST_CASE("suffix broadcasting in add") {
        Tape tape;
        auto a = tape.constant(Tensor(Shape{2, 3}, 1.0));
        auto b = tape.constant(Tensor(Shape{3}, std::vector<double>{1, 2, 3}));
        const auto y = add(a, b).value();
        CHECK(y == Tensor(Shape{2, 3}, std::vector<double>{2, 3, 4, 2, 3, 4}));
        CHECK(add(b, a).value() == y);
    }

    TEST_CASE("mse hand value") {
        Tape tape;
        auto p = tape.constant(Tensor::vector({1.0, 2.0}));
        auto t = tape.constant(Tensor::vector({0.0, 2.0}));
        CHECK(mse(p, t).value().item() == 0.5);
    }

    TEST_CASE("finite-difference checks of every op on random 5x4 inputs") {
        const auto a = random_tensor({5, 4}, 1);
        const auto b = random_tensor({5, 4}, 2);
        const auto row = random_tensor({4}, 3);
        const double tol = 1e-5;
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, add(v[0], v[1])); }, {a, b}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, sub(v[0], v[1])); }, {a, b}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, mul(v[0], v[1])); }, {a, b}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, add(v[0], v[1])); }, {a, row}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, mul(v[0], v[1])); }, {a, row}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, sub(v[0], v[1])); }, {a, row}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, scale(v[0], -1.7)); }, {a}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, add_scalar(v[0], 0.3)); }, {a}) < tol);
        for (bool ta : {false, true})
            for (bool tb : {false, true}) {
                const auto x = random_tensor(ta ? Shape{4, 5} : Shape{5, 4}, 5);
                const auto y = random_tensor(tb ? Shape{3, 4} : Shape{4, 3}, 6);
                CHECK(check([ta, tb](Tape& t, const std::vector<Var>& v) {
                          return probe(t, matmul(v[0], v[1], ta, tb));
                      },
                            {x, y}) < tol);
            }
        const auto w = random_tensor({3, 4}, 7);
        const auto bias = random_tensor({3}, 8);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, linear(v[0], v[1], v[2])); },
                    {a, w, bias}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, linear(v[0], v[1], v[2])); },
                    {random_tensor({2, 5, 4}, 9), w, bias}) < tol);
        const auto z = random_tensor({2, 4, 5}, 10);
        CHECK(check([](Tape& t, const std::vector<Var>& v) {
                  return probe(t, channel_affine(v[0], v[1], v[2]));
              },
                    {z, w, bias}) < tol);
        for (auto act : {Activation::tanh, Activation::relu, Activation::gelu, Activation::sigmoid}) {
            CAPTURE(to_string(act));
            CHECK(check([act](Tape& t, const std::vector<Var>& v) { return probe(t, activate(v[0], act)); },
                        {random_tensor({5, 4}, 11, -3.0, 3.0)}) < tol);
        }
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, reshape(v[0], {4, 5})); }, {a}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, slice(v[0], 1, 1, 3)); }, {a}) < tol);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, slice(v[0], 0, 2, 5)); }, {a}) < tol);
        CHECK(check([](Tape&, const std::vector<Var>& v) { return mean(v[0]); }, {a}) < tol);
        CHECK(check([](Tape&, const std::vector<Var>& v) { return mse(v[0], v[1]); }, {a, b}) < tol);
    }

    TEST_CASE("finite-difference checks of the transform ops") {
        const double tol = 1e-5;
        for (std::size_t n : {198u, 8u, 7u}) {
            CAPTURE(n);
            const auto x = random_tensor({2, 3, n}, 20 + n);
            CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, rfft(v[0])); }, {x}) < tol);
            const auto spec = random_tensor({2, 3, n / 2 + 1, 2}, 30 + n);
            CHECK(check([n](Tape& t, const std::vector<Var>& v) { return probe(t, irfft(v[0], n)); }, {spec}) <
                  tol);
        }
        for (auto [n, m] : {std::pair<std::size_t, std::size_t>{198, 4}, {8, 5}, {7, 3}}) {
            CAPTURE(n);
            const auto x = random_tensor({2, 3, n}, 50 + n);
            CHECK(check([m](Tape& t, const std::vector<Var>& v) { return probe(t, rfft_modes(v[0], m)); }, {x}) <
                  tol);
            const auto spec = random_tensor({2, 3, m, 2}, 60 + n);
            CHECK(check([n](Tape& t, const std::vector<Var>& v) { return probe(t, irfft_modes(v[0], n)); },
                        {spec}) < tol);
        }
        const auto zs = random_tensor({2, 3, 6, 2}, 40);
        const auto r = random_tensor({4, 5, 3, 2}, 41);
        CHECK(check([](Tape& t, const std::vector<Var>& v) { return probe(t, spectral_mode_mix(v[0], v[1], 4)); },
                    {zs, r}) < tol);
        const WaveletPlan plan(198, 4);
        const auto sig = random_tensor({2, 2, 198}, 42);
        CHECK(check([&plan](Tape& t, const std::vector<Var>& v) { return probe(t, dwt(v[0], plan)); }, {sig}) < tol);
        const auto coeffs = random_tensor({2, 2, plan.packed_size()}, 43);
        CHECK(check([&plan](Tape& t, const std::vector<Var>& v) { return probe(t, idwt(v[0], plan)); }, {coeffs}) <
              tol);
        const auto rw = random_tensor({plan.approx_size(), 2, 2}, 44);
        CHECK(check([&plan](Tape& t, const std::vector<Var>& v) { return probe(t, band_mix(v[0], v[1], plan)); },
                    {coeffs, rw}) < tol);
        CHECK(check([&plan](Tape& t, const std::vector<Var>& v) { return probe(t, wavelet_mix(v[0], v[1], plan)); },
                    {sig, rw}) < tol);
    }
}

TEST_SUITE("fft") {
    TEST_CASE("truncated transforms agree with the full ones") {
        for (auto [n, m] : {std::pair<std::size_t, std::size_t>{198, 4}, {198, 100}, {8, 5}, {7, 4}}) {
            CAPTURE(n);
            CAPTURE(m);
            Tape tape;
            auto x = tape.constant(random_tensor({3, n}, 70 + n));
            auto full = slice(rfft(x), 1, 0, m);
            auto part = rfft_modes(x, m);
            double err = 0.0;
            for (std::size_t i = 0; i < part.value().size(); ++i)
                err = std::max(err, std::abs(part.value()[i] - full.value()[i]));
            CHECK(err < 1e-12);

            auto spec = random_tensor({3, m, 2}, 80 + n);
            Tensor padded({3, n / 2 + 1, 2}, 0.0);
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t k = 0; k < 2 * m; ++k) padded[r * (n / 2 + 1) * 2 + k] = spec[r * 2 * m + k];
            auto a = irfft_modes(tape.constant(spec), n);
            auto b = irfft(tape.constant(padded), n);
            err = 0.0;
            for (std::size_t i = 0; i < a.value().size(); ++i) err = std::max(err, std::abs(a.value()[i] - b.value()[i]));
            CHECK(err < 1e-12);
        }
        Tape tape;
        CHECK_THROWS_AS(rfft_modes(tape.constant(Tensor({2, 8}, 0.0)), 6), ShapeError);
        CHECK_THROWS_AS(irfft_modes(tape.constant(Tensor({2, 6, 2}, 0.0)), 8), ShapeError);
    }

    TEST_CASE("constant signal is DC only") {
        FftPlan plan(8);
        std::vector<double> x(8, 2.5);
        std::vector<cplx> out(5);
        plan.rfft(x, out);
        CHECK(out[0] == cplx(20.0, 0.0));
        for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(out[k]) < 1e-15);
    }

    TEST_CASE("length 198 factorization and mode count") {
        FftPlan plan(198);
        CHECK(plan.half_size() == 100);
        std::size_t prod = 1;
        for (auto f : plan.factors()) prod *= f;
        CHECK(prod == 198);
    }

    TEST_CASE("agreement with the direct DFT") {
        for (std::size_t n : {1u, 2u, 3u, 7u, 12u, 64u, 121u, 143u, 198u, 210u}) {
            CAPTURE(n);
            std::mt19937_64 rng(n);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> x(n);
            for (auto& v : x) v = u(rng);
            const auto ref = naive_dft(x);
            FftPlan plan(n);
            std::vector<cplx> in(x.begin(), x.end()), out(n);
            plan.forward(in, out);
            double worst = 0.0;
            for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(out[k] - ref[k]));
            CHECK(worst < 1e-9);
            std::vector<cplx> back(n);
            plan.inverse(out, back);
            for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(back[j] / double(n) - in[j]) < 1e-12);
        }
    }

    TEST_CASE("rfft / irfft round trip and Parseval on length 198") {
        for (std::size_t n : {198u, 197u, 8u}) {
            FftPlan plan(n);
            std::mt19937_64 rng(5);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> x(n);
            for (auto& v : x) v = u(rng);
            std::vector<cplx> spec(plan.half_size());
            plan.rfft(x, spec);
            std::vector<double> back(n);
            plan.irfft(spec, back);
            double worst = 0.0;
            double energy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                worst = std::max(worst, std::abs(back[j] - x[j]));
                energy += x[j] * x[j];
            }
            CHECK(worst < 1e-12);
            double spec_energy = 0.0;
            for (std::size_t k = 0; k < spec.size(); ++k) {
                const bool edge = k == 0 || 2 * k == n;
                spec_energy += (edge ? 1.0 : 2.0) * std::norm(spec[k]);
            }
            CHECK(std::abs(energy - spec_energy / double(n)) < 1e-9);
        }
    }

    TEST_CASE("irfft rejects a spectrum of the wrong length") {
        Tape tape;
        auto s = tape.constant(Tensor(Shape{3, 50, 2}));
        CHECK_THROWS_AS(irfft(s, 198), ShapeError);
        CHECK_NOTHROW(irfft(s, 98));
        CHECK_NOTHROW(irfft(s, 99));
    }
}

TEST_SUITE("wavelet") {
    TEST_CASE("fused approximation mixing equals the transform composition") {
        for (auto [n, levels] : {std::pair<std::size_t, std::size_t>{198, 4}, {301, 3}, {64, 2}}) {
            CAPTURE(n);
            const WaveletPlan plan(n, levels);
            const std::size_t ch = 3;
            Tape tape;
            auto z = tape.constant(random_tensor({2, ch, n}, 90 + n));
            auto r = tape.constant(random_tensor({plan.approx_size(), ch, ch}, 91 + n));
            auto fused = wavelet_mix(z, r, plan);
            auto composed = idwt(band_mix(dwt(z, plan), r, plan), plan);
            double err = 0.0;
            for (std::size_t i = 0; i < fused.value().size(); ++i)
                err = std::max(err, std::abs(fused.value()[i] - composed.value()[i]));
            CHECK(err < 1e-12);
        }
    }

    TEST_CASE("db6 filters are orthonormal") {
        const auto& lo = db6_dec_lo();
        const auto& hi = db6_dec_hi();
        double ll = 0, hh = 0, lh = 0, sum_lo = 0;
        for (std::size_t j = 0; j < 12; ++j) {
            ll += lo[j] * lo[j];
            hh += hi[j] * hi[j];
            lh += lo[j] * hi[j];
            sum_lo += lo[j];
        }
        CHECK(ll == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hh == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(lh) < 1e-14);
        CHECK(sum_lo == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
    }

    TEST_CASE("band layout for 198 samples at four levels") {
        WaveletPlan plan(198, 4);
        CHECK(plan.band_lengths() == std::vector<std::size_t>{13, 13, 25, 50, 99});
        CHECK(plan.packed_size() == 200);
        CHECK(WaveletPlan::max_levels(198) == 4);
        CHECK(WaveletPlan::max_levels(1000) == 6);
    }

    TEST_CASE("coefficients match the reference periodized transform") {
        // reference values from an independent periodization implementation
        WaveletPlan plan(198, 4);
        const auto x = test_signal(198);
        std::vector<double> c(plan.packed_size());
        plan.forward(x, c);
        CHECK(c[0] == doctest::Approx(5.566133754839367).epsilon(1e-13));
        CHECK(c[1] == doctest::Approx(8.457973994942826).epsilon(1e-13));
        CHECK(c[2] == doctest::Approx(8.324811384928168).epsilon(1e-13));
        CHECK(c[13] == doctest::Approx(2.026928163374467).epsilon(1e-13));
        CHECK(c[14] == doctest::Approx(-1.1939876797759452).epsilon(1e-13));
        CHECK(c[101] == doctest::Approx(0.06800892880754986).epsilon(1e-12));
        CHECK(c[102] == doctest::Approx(-0.00785221802863283).epsilon(1e-11));
        CHECK(c[103] == doctest::Approx(-0.00139570477908632).epsilon(1e-10));
        CHECK(c[199] == doctest::Approx(-0.2011941470592581).epsilon(1e-12));
    }

    TEST_CASE("perfect reconstruction at four levels") {
        for (std::size_t n : {198u, 208u, 301u}) {
            WaveletPlan plan(n, 4);
            std::mt19937_64 rng(n);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> x(n), c(plan.packed_size()), back(n);
            for (auto& v : x) v = u(rng);
            plan.forward(x, c);
            plan.inverse(c, back);
            double worst = 0.0;
            for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back[j] - x[j]));
            CHECK(worst < 1e-10);
        }
    }

    TEST_CASE("constant signal has vanishing details") {
        WaveletPlan plan(198, 4);
        std::vector<double> x(198, 3.0), c(plan.packed_size());
        plan.forward(x, c);
        for (std::size_t k = plan.approx_size(); k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-10);
    }

    TEST_CASE("energy is preserved when every level halves an even length") {
        WaveletPlan plan(208, 4);
        const auto x = test_signal(208);
        std::vector<double> c(plan.packed_size());
        plan.forward(x, c);
        double ex = 0.0, ec = 0.0;
        for (double v : x) ex += v * v;
        for (double v : c) ec += v * v;
        CHECK(std::abs(ex - ec) < 1e-9);
    }

    TEST_CASE("adjoints satisfy <Ax, y> = <x, A^T y>") {
        WaveletPlan plan(198, 4);
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(198), y(plan.packed_size()), ax(plan.packed_size()), aty(198);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        plan.forward(x, ax);
        plan.forward_adjoint(y, aty);
        double l = 0, r = 0;
        for (std::size_t k = 0; k < y.size(); ++k) l += ax[k] * y[k];
        for (std::size_t j = 0; j < x.size(); ++j) r += x[j] * aty[j];
        CHECK(l == doctest::Approx(r).epsilon(1e-12));
        plan.inverse(y, aty);
        plan.inverse_adjoint(x, ax);
        l = r = 0;
        for (std::size_t j = 0; j < x.size(); ++j) l += aty[j] * x[j];
        for (std::size_t k = 0; k < y.size(); ++k) r += y[k] * ax[k];
        CHECK(l == doctest::Approx(r).epsilon(1e-12));
    }

    TEST_CASE("too-short signals name the failing level") {
        try {
            WaveletPlan plan(40, 4);
            FAIL("expected ShapeError");
        } catch (const ShapeError& e) {
            CHECK(std::string(e.what()).find("level 3") != std::string::npos);
        }
        CHECK_THROWS_AS(WaveletPlan(198, 0), ParameterError);
    }
}

TEST_SUITE("spectral mixing") {
    TEST_CASE("identity weights keep retained modes") {
        Tape tape;
        const auto z = random_tensor({2, 3, 5, 2}, 50);
        Tensor eye(Shape{5, 3, 3, 2}, 0.0);
        for (std::size_t k = 0; k < 5; ++k)
            for (std::size_t i = 0; i < 3; ++i) eye[((k * 3 + i) * 3 + i) * 2] = 1.0;
        const auto out = spectral_mode_mix(tape.constant(z), tape.constant(eye), 5).value();
        CHECK(out == z);
    }

    TEST_CASE("one retained mode zeroes the rest") {
        Tape tape;
        const auto z = random_tensor({2, 3, 5, 2}, 51);
        const auto r = random_tensor({1, 4, 3, 2}, 52);
        const auto out = spectral_mode_mix(tape.constant(z), tape.constant(r), 1).value();
        CHECK(out.shape() == Shape{2, 4, 5, 2});
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t o = 0; o < 4; ++o)
                for (std::size_t k = 1; k < 5; ++k)
                    for (std::size_t c = 0; c < 2; ++c) CHECK(out[((b * 4 + o) * 5 + k) * 2 + c] == 0.0);
        CHECK_THROWS_AS(spectral_mode_mix(tape.constant(z), tape.constant(r), 2), ShapeError);
        CHECK_THROWS_AS(spectral_mode_mix(tape.constant(z), tape.constant(r), 0), ShapeError);
    }
}

TEST_SUITE("optim") {
    TEST_CASE("Adam minimizes x^2 from 1 with lr 0.1") {
        ParameterSet p;
        p.add("x", Tensor::scalar(1.0));
        Adam adam(AdamOptions{0.1});
        for (int step = 0; step < 200; ++step) {
            Tape tape;
            BoundParameters bound(tape, p);
            auto x = bound["x"];
            tape.backward(mul(x, x));
            adam.step(p, bound.grads());
        }
        CHECK(std::abs(p.at("x").item()) < 1e-3);
        CHECK(adam.steps() == 200);
    }

    TEST_CASE("Adam first step moves by lr against the gradient sign") {
        ParameterSet p;
        p.add("w", Tensor::vector({0.5, -2.0}));
        Adam adam(AdamOptions{0.01});
        adam.step(p, {Tensor::vector({3.0, -1e-3})});
        CHECK(p.at("w")[0] == doctest::Approx(0.49).epsilon(1e-9));
        CHECK(p.at("w")[1] == doctest::Approx(-1.99).epsilon(1e-6));
        CHECK_THROWS_AS(adam.step(p, {Tensor::scalar(1.0)}), ShapeError);
    }

    TEST_CASE("Xavier bound, determinism and variance") {
        const auto w = xavier_init({200, 200}, 3);
        const double bound = std::sqrt(6.0 / 400.0);
        for (double v : w.values()) CHECK(std::abs(v) <= bound);
        CHECK(xavier_init({200, 200}, 3) == w);
        CHECK_FALSE(xavier_init({200, 200}, 4) == w);
        const auto big = xavier_init({400, 250}, 9);
        double mean = 0.0, var = 0.0;
        for (double v : big.values()) mean += v;
        mean /= double(big.size());
        for (double v : big.values()) var += (v - mean) * (v - mean);
        var /= double(big.size());
        CHECK(std::abs(var / (2.0 / 650.0) - 1.0) < 0.1);
        CHECK_THROWS_AS(xavier_init({5}, 1), ParameterError);
        CHECK_THROWS_AS(xavier_init({0, 5}, 1), ParameterError);
    }

    TEST_CASE("parameter set lookups") {
        ParameterSet p;
        p.add("a", Tensor(Shape{2, 3}));
        p.add("b", Tensor(Shape{4}));
        CHECK(p.scalar_count() == 10);
        CHECK(p.index_of("b") == 1);
        CHECK_THROWS_AS(p.add("a", Tensor(Shape{1})), ParameterError);
        CHECK_THROWS_AS(p.at("zz"), ParameterError);
    }
}

TEST_CASE("repeated forward/backward passes are bit-identical") {
    auto run = [] {
        const WaveletPlan plan(198, 4);
        Tape tape;
        auto x = tape.leaf(random_tensor({2, 3, 198}, 60));
        auto w = tape.leaf(random_tensor({3, 3}, 61));
        auto b = tape.leaf(random_tensor({3}, 62));
        auto r = tape.leaf(random_tensor({4, 3, 3, 2}, 63));
        auto y = add(channel_affine(x, w, b), irfft(spectral_mode_mix(rfft(x), r, 4), 198));
        auto loss = mean(mul(gelu(idwt(dwt(y, plan), plan)), y));
        tape.backward(loss);
        return std::make_pair(loss.value().item(), r.grad());
    };
    const auto first = run();
    const auto second = run();
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);
}
