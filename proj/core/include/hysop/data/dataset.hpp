#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hysop/data/scaler.hpp"
#include "hysop/data/waveform.hpp"
#include "hysop/preisach/model.hpp"

namespace hysop::data {

enum class ExcitationKind : std::uint32_t { unknown = 0, forc = 1, minor_loop = 2 };

std::string to_string(ExcitationKind kind);
ExcitationKind excitation_kind_from_string(const std::string& name);

struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    bool operator==(const DatasetSplit&) const = default;
};

// Paired (H, B) samples on a shared time grid. h and b are N x T.
struct HysteresisDataset {
    std::vector<double> t;
    SampleMatrix h;
    SampleMatrix b;
    std::optional<DatasetSplit> split;
    std::optional<MinMaxScaler> scaler;
    ExcitationKind kind = ExcitationKind::unknown;

    std::size_t sample_count() const noexcept { return h.rows(); }
    std::size_t sample_length() const noexcept { return t.size(); }

    // Throws ParameterError on inconsistent shapes, a split that is not a
    // disjoint cover of [0, N), or a degenerate scaler.
    void validate() const;

    const DatasetSplit& require_split() const;
    const MinMaxScaler& require_scaler() const;

    bool operator==(const HysteresisDataset&) const = default;
};

struct BuildOptions {
    std::size_t workers = 1;  // 0 = hardware concurrency
    preisach::InverseOptions inverse{};
};

// Inverts every B curve through the Preisach oracle (fresh negative
// saturation per curve), splits 50/50 at random and fits the scaler on the
// train partition only.
HysteresisDataset build_dataset(const std::vector<Waveform>& b_curves,
                                const preisach::PreisachModel& oracle, std::uint64_t seed,
                                ExcitationKind kind = ExcitationKind::unknown,
                                const BuildOptions& options = {});

// Random 50/50 split of [0, n); the train half gets floor(n / 2) indices.
DatasetSplit random_split(std::size_t n, std::uint64_t seed);

MinMaxScaler fit_scaler(const HysteresisDataset& dataset, const DatasetSplit& split);

// CSV with columns sample_id,t,h,b. Reading requires every sample to share
// the first sample's time grid; split and scaler are not part of the CSV.
void write_csv(std::ostream& out, const HysteresisDataset& dataset);
HysteresisDataset read_csv(std::istream& in);

}  // namespace hysop::data
