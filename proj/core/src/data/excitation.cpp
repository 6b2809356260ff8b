#include "hysop/data/excitation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hysop/error.hpp"
#include "hysop/util/random.hpp"

namespace hysop::data {

std::vector<Waveform> sample_forc_b(std::size_t n, std::size_t samples, std::uint64_t seed,
                                    const ForcOptions& options) {
    if (samples < 2) throw ParameterError("FORC excitation needs at least 2 samples");
    if (!(options.amp_lo > 0.0) || !(options.amp_lo < options.amp_hi) ||
        !(options.amp_hi <= options.b_sat)) {
        std::ostringstream msg;
        msg << "FORC amplitudes need 0 < amp_lo < amp_hi <= b_sat, got (" << options.amp_lo
            << ", " << options.amp_hi << ") with b_sat " << options.b_sat;
        throw ParameterError(msg.str());
    }
    const auto t = linspace(0.0, 1.0, samples);
    std::vector<Waveform> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = make_rng(seed, i);
        std::uniform_real_distribution<double> amplitude(options.amp_lo, options.amp_hi);
        const double a = amplitude(rng);
        out[i].t = t;
        out[i].values.resize(samples);
        for (std::size_t j = 0; j < samples; ++j)
            out[i].values[j] = a * std::sin(std::numbers::pi * t[j]);
    }
    return out;
}

std::vector<double> cosine_kernel(const std::vector<double>& t, double jitter) {
    const std::size_t n = t.size();
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k[i * n + j] = std::cos(t[i] - t[j]) + (i == j ? jitter : 0.0);
    return k;
}

std::vector<Waveform> sample_minor_b(std::size_t n, std::size_t samples, std::uint64_t seed,
                                     const MinorLoopOptions& options) {
    if (samples < 2) throw ParameterError("minor-loop excitation needs at least 2 samples");
    if (!(options.peak > 0.0)) throw ParameterError("minor-loop peak must be positive");
    if (!(options.jitter > 0.0)) throw ParameterError("kernel jitter must be positive");

    const auto t = linspace(0.0, options.domain_end, samples);
    using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::LLT<Matrix> llt;
    double jitter = options.jitter;
    bool factored = false;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt, jitter *= 10.0) {
        const auto k = cosine_kernel(t, jitter);
        llt.compute(Eigen::Map<const Matrix>(k.data(), samples, samples));
        if (llt.info() == Eigen::Success) {
            factored = true;
            break;
        }
    }
    if (!factored)
        throw NumericError("cosine-kernel covariance is not positive definite after jitter retries");
    const Matrix lower = llt.matrixL();

    std::vector<Waveform> out(n);
    Eigen::VectorXd z(samples);
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = make_rng(seed, i);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t j = 0; j < samples; ++j) z[static_cast<Eigen::Index>(j)] = normal(rng);
        const Eigen::VectorXd draw = lower * z;
        double peak = 0.0;
        for (Eigen::Index j = 0; j < draw.size(); ++j) peak = std::max(peak, std::abs(draw[j]));
        const double scale = peak > options.peak ? options.peak / peak : 1.0;
        out[i].t = t;
        out[i].values.resize(samples);
        for (std::size_t j = 0; j < samples; ++j)
            out[i].values[j] = std::clamp(scale * draw[static_cast<Eigen::Index>(j)],
                                          -options.peak, options.peak);
    }
    return out;
}

}  // namespace hysop::data
