#include "hysop/preisach/density.hpp"

#include <cmath>
#include <numbers>

#include "hysop/error.hpp"

namespace hysop::preisach {

std::string to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::uniform: return "uniform";
        case DensityKind::gaussian: return "gaussian";
        case DensityKind::relay_list: return "relays";
    }
    return "unknown";
}

DensityKind density_kind_from_string(const std::string& name) {
    if (name == "uniform") return DensityKind::uniform;
    if (name == "gaussian" || name == "gaussian-factorized") return DensityKind::gaussian;
    if (name == "relays" || name == "relay_list" || name == "relay-list" || name == "single-relay-list")
        return DensityKind::relay_list;
    throw ParameterError("unknown density kind '" + name + "'");
}

GaussianParams GaussianParams::defaults_for(double h_sat) {
    GaussianParams p;
    p.mean_alpha = 0.2 * h_sat;
    p.mean_beta = -0.2 * h_sat;
    p.stddev_alpha = 0.15 * h_sat;
    p.stddev_beta = 0.15 * h_sat;
    p.ridge_fraction = 0.1;
    return p;
}

namespace {

void check_h_sat(double h_sat) {
    if (!(h_sat > 0.0) || !std::isfinite(h_sat))
        throw ParameterError("h_sat must be positive and finite");
}

}  // namespace

PreisachDensity PreisachDensity::uniform(double h_sat, double weight) {
    check_h_sat(h_sat);
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw ParameterError("uniform density weight must be positive");
    PreisachDensity d;
    d.kind_ = DensityKind::uniform;
    d.h_sat_ = h_sat;
    d.uniform_weight_ = weight;
    return d;
}

PreisachDensity PreisachDensity::gaussian(double h_sat, const GaussianParams& params) {
    check_h_sat(h_sat);
    if (!(params.stddev_alpha > 0.0) || !(params.stddev_beta > 0.0))
        throw ParameterError("gaussian density needs positive standard deviations");
    if (!(params.ridge_fraction >= 0.0) || !(params.ridge_fraction < 1.0))
        throw ParameterError("ridge fraction must lie in [0, 1)");
    PreisachDensity d;
    d.kind_ = DensityKind::gaussian;
    d.h_sat_ = h_sat;
    d.gaussian_ = params;
    return d;
}

PreisachDensity PreisachDensity::gaussian(double h_sat) {
    return gaussian(h_sat, GaussianParams::defaults_for(h_sat));
}

PreisachDensity PreisachDensity::relays(double h_sat, std::vector<Relay> relays) {
    check_h_sat(h_sat);
    if (relays.empty()) throw ParameterError("relay list is empty");
    double total = 0.0;
    for (const auto& r : relays) {
        if (r.alpha < r.beta)
            throw ParameterError("relay violates alpha >= beta");
        if (std::abs(r.alpha) > h_sat || std::abs(r.beta) > h_sat)
            throw ParameterError("relay switching field outside [-h_sat, h_sat]");
        if (!(r.weight >= 0.0) || !std::isfinite(r.weight))
            throw ParameterError("relay weight must be nonnegative");
        total += r.weight;
    }
    if (!(total > 0.0)) throw ParameterError("relay list has zero total weight");
    PreisachDensity d;
    d.kind_ = DensityKind::relay_list;
    d.h_sat_ = h_sat;
    d.relays_ = std::move(relays);
    return d;
}

double PreisachDensity::operator()(double alpha, double beta) const {
    if (alpha < beta || std::abs(alpha) > h_sat_ || std::abs(beta) > h_sat_) return 0.0;
    switch (kind_) {
        case DensityKind::uniform:
            return uniform_weight_;
        case DensityKind::gaussian: {
            const auto& g = gaussian_;
            const double za = (alpha - g.mean_alpha) / g.stddev_alpha;
            const double zb = (beta - g.mean_beta) / g.stddev_beta;
            const double norm = 2.0 * std::numbers::pi * g.stddev_alpha * g.stddev_beta;
            // Unnormalized; EverettMap owns the normalization to unit weight.
            return std::exp(-0.5 * (za * za + zb * zb)) / norm;
        }
        case DensityKind::relay_list:
            return 0.0;
    }
    return 0.0;
}

}  // namespace hysop::preisach
