#include "hysop/train/evaluate.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "hysop/error.hpp"

namespace hysop::train {

std::string to_string(Partition p) {
    switch (p) {
        case Partition::train: return "train";
        case Partition::test: return "test";
        case Partition::all: return "all";
    }
    return "test";
}

Partition partition_from_string(const std::string& name) {
    if (name == "train") return Partition::train;
    if (name == "test") return Partition::test;
    if (name == "all") return Partition::all;
    throw ParameterError("unknown partition '" + name + "'");
}

EvalReport evaluate(const Checkpoint& ckpt, const data::HysteresisDataset& dataset, const EvalOptions& options) {
    dataset.validate();
    if (!(options.rate > 0.0) || !std::isfinite(options.rate)) throw ParameterError("rate must be positive");
    const auto start = std::chrono::steady_clock::now();
    EvalReport report;
    report.arch = ckpt.arch;
    report.partition = options.partition;
    report.rate = options.rate;
    report.units = options.scaled ? "scaled" : "physical";
    switch (options.partition) {
        case Partition::train: report.indices = dataset.require_split().train; break;
        case Partition::test: report.indices = dataset.require_split().test; break;
        case Partition::all:
            report.indices.resize(dataset.sample_count());
            std::iota(report.indices.begin(), report.indices.end(), 0);
            break;
    }
    if (report.indices.empty()) throw ParameterError(to_string(options.partition) + " partition is empty");
    report.t = dataset.t;
    for (double& v : report.t) v *= options.rate;
    report.h = dataset.h.gather_rows(report.indices);
    report.reference = dataset.b.gather_rows(report.indices);
    report.prediction = predict(ckpt, report.h, report.t);
    if (options.scaled) {
        ckpt.scaler.b.transform_inplace(report.prediction.values());
        ckpt.scaler.b.transform_inplace(report.reference.values());
    }
    report.metrics = metrics(report.prediction.values(), report.reference.values());
    report.abs_error = report.prediction;
    for (std::size_t i = 0; i < report.abs_error.values().size(); ++i)
        report.abs_error.values()[i] = std::abs(report.prediction.values()[i] - report.reference.values()[i]);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<EvalReport> rate_sweep(const Checkpoint& ckpt, const data::HysteresisDataset& dataset,
                                   const std::vector<double>& rates) {
    if (!models::is_operator(ckpt.arch))
        throw ParameterError("rate sweep needs an operator checkpoint, got " + models::to_string(ckpt.arch));
    std::vector<EvalReport> out;
    out.reserve(rates.size());
    for (double r : rates) out.push_back(evaluate(ckpt, dataset, EvalOptions{Partition::test, r, false}));
    return out;
}

}  // namespace hysop::train
