#include "hysop/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hysop/error.hpp"
#include "hysop/util/parallel.hpp"
#include "hysop/util/random.hpp"

namespace hysop::data {

std::string to_string(ExcitationKind kind) {
    switch (kind) {
        case ExcitationKind::forc: return "forc";
        case ExcitationKind::minor_loop: return "minor";
        case ExcitationKind::unknown: break;
    }
    return "unknown";
}

ExcitationKind excitation_kind_from_string(const std::string& name) {
    if (name == "forc") return ExcitationKind::forc;
    if (name == "minor") return ExcitationKind::minor_loop;
    if (name == "unknown") return ExcitationKind::unknown;
    throw ParameterError("unknown excitation kind '" + name + "'");
}

void HysteresisDataset::validate() const {
    const std::size_t n = h.rows();
    if (b.rows() != n || h.cols() != t.size() || b.cols() != t.size())
        throw ParameterError("dataset arrays disagree on N or T");
    for (std::size_t j = 1; j < t.size(); ++j)
        if (!(t[j] > t[j - 1])) throw ParameterError("dataset time grid not strictly increasing");
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(t.begin(), t.end(), finite) || !std::all_of(h.values().begin(), h.values().end(), finite) ||
        !std::all_of(b.values().begin(), b.values().end(), finite))
        throw ParameterError("dataset holds non-finite values");
    if (split) {
        std::vector<char> seen(n, 0);
        for (const auto* part : {&split->train, &split->test}) {
            for (std::size_t i : *part) {
                if (i >= n) throw ParameterError("split index out of range");
                if (seen[i]) throw ParameterError("split partitions overlap");
                seen[i] = 1;
            }
        }
        if (split->train.size() + split->test.size() != n)
            throw ParameterError("split does not cover every sample");
    }
    if (scaler && (!(scaler->h.max > scaler->h.min) || !(scaler->b.max > scaler->b.min)))
        throw ParameterError("scaler needs max > min");
}

const DatasetSplit& HysteresisDataset::require_split() const {
    if (!split) throw ParameterError("dataset has no train/test split");
    return *split;
}

const MinMaxScaler& HysteresisDataset::require_scaler() const {
    if (!scaler) throw ParameterError("dataset has no fitted scaler");
    return *scaler;
}

DatasetSplit random_split(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(seed, 0x5b1d);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_train = n / 2;
    DatasetSplit split;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return split;
}

MinMaxScaler fit_scaler(const HysteresisDataset& dataset, const DatasetSplit& split) {
    if (split.train.empty()) throw ParameterError("cannot fit a scaler on an empty train split");
    const auto h_train = dataset.h.gather_rows(split.train);
    const auto b_train = dataset.b.gather_rows(split.train);
    return MinMaxScaler{MinMax::fit(h_train.values()), MinMax::fit(b_train.values())};
}

HysteresisDataset build_dataset(const std::vector<Waveform>& b_curves,
                                const preisach::PreisachModel& oracle, std::uint64_t seed,
                                ExcitationKind kind, const BuildOptions& options) {
    if (b_curves.empty()) throw ParameterError("no excitation curves to invert");
    for (const auto& w : b_curves) w.validate();
    const auto& grid = b_curves.front().t;
    for (const auto& w : b_curves)
        if (w.t != grid) throw ParameterError("excitation curves use different time grids");

    const std::size_t n = b_curves.size();
    const std::size_t samples = grid.size();
    HysteresisDataset ds;
    ds.kind = kind;
    ds.t = grid;
    ds.h = SampleMatrix(n, samples);
    ds.b = SampleMatrix(n, samples);

    parallel_for(n, options.workers, [&](std::size_t i) {
        std::vector<double> h;
        try {
            h = oracle.inverse_sequence(b_curves[i].values, options.inverse);
        } catch (const Error& e) {
            throw Error(e.code(), "sample " + std::to_string(i) + ": " + e.what());
        }
        std::copy(h.begin(), h.end(), ds.h.row(i).begin());
        std::copy(b_curves[i].values.begin(), b_curves[i].values.end(), ds.b.row(i).begin());
    });

    ds.split = random_split(n, seed);
    ds.scaler = fit_scaler(ds, *ds.split);
    return ds;
}

namespace {

void append_double(std::string& line, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, res.ptr);
}

}  // namespace

void write_csv(std::ostream& out, const HysteresisDataset& dataset) {
    out << "sample_id,t,h,b\n";
    std::string line;
    for (std::size_t i = 0; i < dataset.sample_count(); ++i) {
        for (std::size_t j = 0; j < dataset.sample_length(); ++j) {
            line = std::to_string(i);
            line += ',';
            append_double(line, dataset.t[j]);
            line += ',';
            append_double(line, dataset.h(i, j));
            line += ',';
            append_double(line, dataset.b(i, j));
            line += '\n';
            out << line;
        }
    }
}

HysteresisDataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("sample_id,t,h,b", 0) != 0)
        throw FormatError("CSV header must be sample_id,t,h,b");
    std::vector<std::vector<double>> t_rows;
    std::vector<std::vector<double>> h_rows;
    std::vector<std::vector<double>> b_rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        double v[4];
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(fields, cell, ','))
                throw FormatError("CSV line " + std::to_string(line_no) + " has too few columns");
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v[k]);
            if (res.ec != std::errc{})
                throw FormatError("CSV line " + std::to_string(line_no) + " has a bad number");
        }
        const auto id = static_cast<std::size_t>(v[0]);
        if (static_cast<double>(id) != v[0])
            throw FormatError("CSV line " + std::to_string(line_no) + " has a bad sample_id");
        if (id > t_rows.size())
            throw FormatError("CSV sample ids must be contiguous from 0");
        if (id == t_rows.size()) {
            t_rows.emplace_back();
            h_rows.emplace_back();
            b_rows.emplace_back();
        }
        t_rows[id].push_back(v[1]);
        h_rows[id].push_back(v[2]);
        b_rows[id].push_back(v[3]);
    }
    if (t_rows.empty()) throw FormatError("CSV has no samples");
    HysteresisDataset ds;
    ds.t = t_rows.front();
    const std::size_t n = t_rows.size();
    const std::size_t samples = ds.t.size();
    ds.h = SampleMatrix(n, samples);
    ds.b = SampleMatrix(n, samples);
    for (std::size_t i = 0; i < n; ++i) {
        if (t_rows[i] != ds.t) throw FormatError("CSV samples use different time grids");
        std::copy(h_rows[i].begin(), h_rows[i].end(), ds.h.row(i).begin());
        std::copy(b_rows[i].begin(), b_rows[i].end(), ds.b.row(i).begin());
    }
    ds.validate();
    return ds;
}

}  // namespace hysop::data
