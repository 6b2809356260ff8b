#pragma once

#include <string>
#include <vector>

namespace hysop::preisach {

enum class DensityKind { uniform, gaussian, relay_list };

std::string to_string(DensityKind kind);
DensityKind density_kind_from_string(const std::string& name);

// Elementary rectangular hysteron: switches up when h >= alpha and down
// when h <= beta.
struct Relay {
    double alpha = 0.0;
    double beta = 0.0;
    double weight = 1.0;
};

// Factorized Gaussian over the switching half-plane, plus a reversible
// ridge spread uniformly along alpha == beta. All lengths in A/m.
struct GaussianParams {
    double mean_alpha = 0.0;
    double mean_beta = 0.0;
    double stddev_alpha = 1.0;
    double stddev_beta = 1.0;
    double ridge_fraction = 0.1;  // share of total weight on the diagonal

    static GaussianParams defaults_for(double h_sat);
};

class PreisachDensity {
public:
    static PreisachDensity uniform(double h_sat, double weight = 1.0);
    static PreisachDensity gaussian(double h_sat, const GaussianParams& params);
    static PreisachDensity gaussian(double h_sat);
    static PreisachDensity relays(double h_sat, std::vector<Relay> relays);

    DensityKind kind() const noexcept { return kind_; }
    double h_sat() const noexcept { return h_sat_; }
    double uniform_weight() const noexcept { return uniform_weight_; }
    const GaussianParams& gaussian_params() const noexcept { return gaussian_; }
    const std::vector<Relay>& relay_list() const noexcept { return relays_; }

    // Pointwise density of the continuous part (zero off the triangle).
    double operator()(double alpha, double beta) const;

private:
    PreisachDensity() = default;

    DensityKind kind_ = DensityKind::uniform;
    double h_sat_ = 1.0;
    double uniform_weight_ = 1.0;
    GaussianParams gaussian_{};
    std::vector<Relay> relays_;
};

}  // namespace hysop::preisach
