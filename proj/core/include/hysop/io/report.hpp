#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hysop/train/evaluate.hpp"

namespace hysop::io {

// metric,value rows: arch, partition, rate, units, R, MAE, RMSE, samples.
// Wall time is left out so that repeated runs give identical files.
void write_report_metrics(std::ostream& out, const train::EvalReport& report);
// metric -> value as written by write_report_metrics.
std::map<std::string, std::string> read_report_metrics(std::istream& in);
// sample_id,t,h,b_ref,b_pred,abs_error rows for every evaluated point.
void write_report_samples(std::ostream& out, const train::EvalReport& report);

// Curves of a report as needed for plotting.
struct ReportCurves {
    std::vector<std::size_t> sample_ids;
    std::vector<double> t;
    data::SampleMatrix h, reference, prediction, abs_error;
};
ReportCurves read_report_samples(std::istream& in);

// Writes <path> and the per-sample file samples_path(path).
void save_report(const std::string& path, const train::EvalReport& report);
std::string samples_path(const std::string& report_path);
ReportCurves load_report_curves(const std::string& report_path);

// rate,R,MAE,RMSE rows for a sweep.
void write_sweep(std::ostream& out, const std::vector<train::EvalReport>& reports);

}  // namespace hysop::io
