#include <benchmark/benchmark.h>
#include <malloc.h>

#include <cmath>

#include "hysop/data/excitation.hpp"
#include "hysop/io/oracle_config.hpp"
#include "hysop/models/model.hpp"
#include "hysop/nd/fft.hpp"
#include "hysop/nd/wavelet.hpp"
#include "hysop/train/metrics.hpp"
#include "hysop/util/random.hpp"

using namespace hysop;

namespace {

constexpr std::size_t T = 198;

std::vector<double> grid(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = double(i) / double(n - 1);
    return t;
}

nd::Tensor field(std::size_t rows, std::size_t cols) {
    nd::Tensor x(nd::Shape{rows, cols});
    auto v = x.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * double(i)) * std::cos(0.011 * double(i));
    return x;
}

void BM_Rfft(benchmark::State& state) {
    const nd::FftPlan plan(T);
    std::vector<double> x(T);
    for (std::size_t i = 0; i < T; ++i) x[i] = std::sin(0.1 * double(i));
    std::vector<nd::cplx> spec(plan.half_size());
    for (auto _ : state) {
        plan.rfft(x, spec);
        benchmark::DoNotOptimize(spec.data());
    }
}
BENCHMARK(BM_Rfft);

void BM_Db6Forward(benchmark::State& state) {
    const nd::WaveletPlan plan(T, 4);
    std::vector<double> x(T), c(plan.packed_size());
    for (std::size_t i = 0; i < T; ++i) x[i] = std::sin(0.1 * double(i));
    for (auto _ : state) {
        plan.forward(x, c);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_Db6Forward);

void BM_PreisachForward(benchmark::State& state) {
    const auto oracle = io::OracleConfig{}.build();
    std::vector<double> h(T);
    for (std::size_t i = 0; i < T; ++i) h[i] = 900.0 * std::sin(6.0 * M_PI * double(i) / double(T - 1));
    for (auto _ : state) benchmark::DoNotOptimize(oracle.forward_sequence(h));
}
BENCHMARK(BM_PreisachForward);

void BM_PreisachInverse(benchmark::State& state) {
    const auto oracle = io::OracleConfig{}.build();
    std::vector<double> b(T);
    for (std::size_t i = 0; i < T; ++i) b[i] = 1.1 * std::sin(M_PI * double(i) / double(T - 1));
    for (auto _ : state) benchmark::DoNotOptimize(oracle.inverse_sequence(b));
}
BENCHMARK(BM_PreisachInverse);

void BM_SampleMinor(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(data::sample_minor_b(100, T, 3));
}
BENCHMARK(BM_SampleMinor)->Unit(benchmark::kMillisecond);

// One forward + backward pass over a batch of 100 curves.
void operator_step(benchmark::State& state, models::Arch arch, std::size_t width) {
    auto cfg = models::default_config(arch, T, 200);
    if (width) cfg.set("width", width);
    const auto model = models::make_model(arch, cfg);
    const auto& op = dynamic_cast<const models::OperatorModel&>(*model);
    const auto params = model->init(1);
    const auto h = field(100, T);
    const auto target = field(100, T);
    const auto t = grid(T);
    for (auto _ : state) {
        nd::Tape tape;
        nd::BoundParameters p(tape, params);
        const auto loss = train::mse_loss(op.forward(tape, p, h, t), tape.constant(target));
        tape.backward(loss);
        benchmark::DoNotOptimize(p.grads());
    }
}
BENCHMARK_CAPTURE(operator_step, deeponet, models::Arch::deeponet, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(operator_step, fno, models::Arch::fno, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(operator_step, rifno, models::Arch::rifno, 0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(operator_step, wno_w16, models::Arch::wno, 16)->Unit(benchmark::kMillisecond);

// Full-batch step on the [T, 200] sequence layout.
void recurrent_step(benchmark::State& state, models::Arch arch) {
    const auto model = models::make_model(arch, models::default_config(arch, T, 200));
    const auto& rec = dynamic_cast<const models::RecurrentModel&>(*model);
    const auto params = model->init(1);
    const auto h = field(T, 200);
    const auto target = field(T, 200);
    for (auto _ : state) {
        nd::Tape tape;
        nd::BoundParameters p(tape, params);
        const auto loss = train::mse_loss(rec.forward(tape, p, h, &target), tape.constant(target));
        tape.backward(loss);
        benchmark::DoNotOptimize(p.grads());
    }
}
BENCHMARK_CAPTURE(recurrent_step, rnn, models::Arch::rnn)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(recurrent_step, lstm, models::Arch::lstm)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(recurrent_step, gru, models::Arch::gru)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(recurrent_step, edlstm, models::Arch::edlstm)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_TOP_PAD, 64 << 20);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
