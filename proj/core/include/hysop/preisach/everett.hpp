#pragma once

#include <cstddef>
#include <vector>

#include "hysop/preisach/density.hpp"

namespace hysop::preisach {

// Everett function E(alpha, beta): integral of the Preisach density over the
// triangle beta <= b' <= a' <= alpha. Immutable after construction, so one
// map can be shared across threads.
//
// uniform and relay-list densities are evaluated in closed form. The
// factorized Gaussian reduces to one-dimensional integrals,
//   E = Phi(alpha) - Phi(beta) - Gb(beta) * (Ga(alpha) - Ga(beta)),
// with Ga, Gb truncated normal CDFs (closed form via erf) and
// Phi(x) = int_{-h_sat}^{x} ga(s) Gb(s) ds cached on n_grid cells by
// Gauss-Legendre quadrature and read back with cubic Hermite interpolation
// using the exact derivative ga * Gb. The Gaussian part is normalized to
// (1 - ridge) and the uniform diagonal ridge carries the rest.
class EverettMap {
public:
    static constexpr std::size_t default_grid = 512;

    explicit EverettMap(PreisachDensity density, std::size_t n_grid = default_grid);

    // Checked evaluation; throws DomainError if alpha < beta or either
    // argument lies outside [-h_sat, h_sat].
    double operator()(double alpha, double beta) const;

    // Same as operator() without the argument checks; callers guarantee the
    // preconditions (used on the hot path of PreisachState sums).
    double eval_unchecked(double alpha, double beta) const;

    double total_weight() const noexcept { return total_; }
    double h_sat() const noexcept { return density_.h_sat(); }
    std::size_t n_grid() const noexcept { return n_grid_; }
    const PreisachDensity& density() const noexcept { return density_; }

private:
    double gauss_cdf_alpha(double x) const;
    double gauss_cdf_beta(double x) const;
    double gauss_pdf_alpha(double x) const;
    double phi(double x) const;

    PreisachDensity density_;
    std::size_t n_grid_;
    double total_ = 0.0;

    // Gaussian cache.
    std::vector<double> phi_nodes_;
    std::vector<double> dphi_nodes_;
    double step_ = 0.0;
    double gauss_scale_ = 0.0;
    double erf_lo_alpha_ = 0.0;
    double erf_lo_beta_ = 0.0;
};

double everett_eval(const EverettMap& map, double alpha, double beta);

}  // namespace hysop::preisach
