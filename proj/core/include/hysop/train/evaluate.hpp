#pragma once

#include <string>
#include <vector>

#include "hysop/train/metrics.hpp"
#include "hysop/train/trainer.hpp"

namespace hysop::train {

enum class Partition { train, test, all };
std::string to_string(Partition p);
Partition partition_from_string(const std::string& name);

struct EvalOptions {
    Partition partition = Partition::test;
    double rate = 1.0;     // test grid is rate * dataset t
    bool scaled = false;   // metrics on scaled fields instead of physical units
};

struct EvalReport {
    models::Arch arch = models::Arch::fno;
    Partition partition = Partition::test;
    double rate = 1.0;
    std::string units = "physical";
    Metrics metrics;
    std::vector<std::size_t> indices;  // dataset rows evaluated
    std::vector<double> t;
    data::SampleMatrix h;
    data::SampleMatrix reference;
    data::SampleMatrix prediction;
    data::SampleMatrix abs_error;
    double seconds = 0.0;
};

EvalReport evaluate(const Checkpoint& ckpt, const data::HysteresisDataset& dataset, const EvalOptions& options = {});

// One report per rate on the test partition.
std::vector<EvalReport> rate_sweep(const Checkpoint& ckpt, const data::HysteresisDataset& dataset,
                                   const std::vector<double>& rates);

}  // namespace hysop::train
