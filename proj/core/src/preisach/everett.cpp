#include "hysop/preisach/everett.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hysop/error.hpp"

namespace hysop::preisach {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

EverettMap::EverettMap(PreisachDensity density, std::size_t n_grid)
    : density_(std::move(density)), n_grid_(n_grid) {
    const double hs = density_.h_sat();
    switch (density_.kind()) {
        case DensityKind::uniform:
            total_ = 0.5 * density_.uniform_weight() * (2.0 * hs) * (2.0 * hs);
            break;
        case DensityKind::relay_list:
            total_ = 0.0;
            for (const auto& r : density_.relay_list()) total_ += r.weight;
            break;
        case DensityKind::gaussian: {
            if (n_grid_ < 2) throw ParameterError("n_grid must be at least 2");
            const auto& g = density_.gaussian_params();
            erf_lo_alpha_ = std::erf((-hs - g.mean_alpha) / (g.stddev_alpha * std::numbers::sqrt2));
            erf_lo_beta_ = std::erf((-hs - g.mean_beta) / (g.stddev_beta * std::numbers::sqrt2));
            step_ = 2.0 * hs / static_cast<double>(n_grid_);
            phi_nodes_.assign(n_grid_ + 1, 0.0);
            dphi_nodes_.assign(n_grid_ + 1, 0.0);
            auto integrand = [&](double s) { return gauss_pdf_alpha(s) * gauss_cdf_beta(s); };
            for (std::size_t i = 0; i <= n_grid_; ++i) {
                const double x = -hs + step_ * static_cast<double>(i);
                dphi_nodes_[i] = integrand(x);
                if (i == 0) continue;
                const double mid = x - 0.5 * step_;
                double acc = 0.0;
                for (std::size_t q = 0; q < kGlNodes.size(); ++q)
                    acc += kGlWeights[q] * integrand(mid + 0.5 * step_ * kGlNodes[q]);
                phi_nodes_[i] = phi_nodes_[i - 1] + 0.5 * step_ * acc;
            }
            const double raw_total = phi_nodes_.back();
            if (!(raw_total > 0.0))
                throw ParameterError("gaussian density has no mass on the Preisach triangle");
            gauss_scale_ = (1.0 - g.ridge_fraction) / raw_total;
            total_ = eval_unchecked(hs, -hs);
            break;
        }
    }
    if (!(total_ > 0.0) || !std::isfinite(total_))
        throw ParameterError("Preisach density has no finite positive weight");
}

double EverettMap::gauss_cdf_alpha(double x) const {
    const auto& g = density_.gaussian_params();
    return 0.5 * (std::erf((x - g.mean_alpha) / (g.stddev_alpha * std::numbers::sqrt2)) -
                  erf_lo_alpha_);
}

double EverettMap::gauss_cdf_beta(double x) const {
    const auto& g = density_.gaussian_params();
    return 0.5 * (std::erf((x - g.mean_beta) / (g.stddev_beta * std::numbers::sqrt2)) -
                  erf_lo_beta_);
}

double EverettMap::gauss_pdf_alpha(double x) const {
    const auto& g = density_.gaussian_params();
    const double z = (x - g.mean_alpha) / g.stddev_alpha;
    return std::exp(-0.5 * z * z) / (g.stddev_alpha * std::sqrt(2.0 * std::numbers::pi));
}

double EverettMap::phi(double x) const {
    const double hs = density_.h_sat();
    const double pos = (x + hs) / step_;
    auto cell = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
    cell = std::min(cell, n_grid_ - 1);
    const double s = pos - static_cast<double>(cell);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * phi_nodes_[cell] + h10 * step_ * dphi_nodes_[cell] +
           h01 * phi_nodes_[cell + 1] + h11 * step_ * dphi_nodes_[cell + 1];
}

double EverettMap::eval_unchecked(double alpha, double beta) const {
    if (alpha == beta) return 0.0;
    switch (density_.kind()) {
        case DensityKind::uniform: {
            const double d = alpha - beta;
            return 0.5 * density_.uniform_weight() * d * d;
        }
        case DensityKind::relay_list: {
            double acc = 0.0;
            for (const auto& r : density_.relay_list())
                if (r.beta >= beta && r.alpha <= alpha) acc += r.weight;
            return acc;
        }
        case DensityKind::gaussian: {
            const auto& g = density_.gaussian_params();
            const double raw = phi(alpha) - phi(beta) -
                               gauss_cdf_beta(beta) * (gauss_cdf_alpha(alpha) - gauss_cdf_alpha(beta));
            const double ridge = g.ridge_fraction * (alpha - beta) / (2.0 * density_.h_sat());
            return gauss_scale_ * raw + ridge;
        }
    }
    return 0.0;
}

double EverettMap::operator()(double alpha, double beta) const {
    const double hs = density_.h_sat();
    if (!(alpha >= beta) || std::abs(alpha) > hs || std::abs(beta) > hs) {
        std::ostringstream msg;
        msg << "everett_eval outside the Preisach triangle: alpha=" << alpha << " beta=" << beta
            << " h_sat=" << hs;
        throw DomainError(msg.str());
    }
    return eval_unchecked(alpha, beta);
}

double everett_eval(const EverettMap& map, double alpha, double beta) { return map(alpha, beta); }

}  // namespace hysop::preisach
