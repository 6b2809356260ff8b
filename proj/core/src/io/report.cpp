#include "hysop/io/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hysop/error.hpp"

namespace hysop::io {

namespace {

void append_double(std::string& s, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    s.append(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw FormatError("report samples line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
    return v;
}

}  // namespace

void write_report_metrics(std::ostream& out, const train::EvalReport& r) {
    std::string s = "metric,value\n";
    s += "arch," + models::to_string(r.arch) + "\n";
    s += "partition," + train::to_string(r.partition) + "\n";
    s += "rate,";
    append_double(s, r.rate);
    s += "\nunits," + r.units + "\n";
    s += "R,";
    append_double(s, r.metrics.r);
    s += "\nMAE,";
    append_double(s, r.metrics.mae);
    s += "\nRMSE,";
    append_double(s, r.metrics.rmse);
    s += "\nsamples," + std::to_string(r.indices.size()) + "\n";
    out << s;
    if (!out) throw IoError("failed writing report");
}

std::map<std::string, std::string> read_report_metrics(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "metric,value") throw FormatError("report file lacks the metric,value header");
    std::map<std::string, std::string> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || comma == 0) throw FormatError("report line '" + line + "' is malformed");
        out[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return out;
}

void write_report_samples(std::ostream& out, const train::EvalReport& r) {
    std::string s = "sample_id,t,h,b_ref,b_pred,abs_error\n";
    const std::size_t n = r.indices.size(), T = r.t.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = std::to_string(r.indices[i]);
        for (std::size_t j = 0; j < T; ++j) {
            s += id;
            for (double v : {r.t[j], r.h(i, j), r.reference(i, j), r.prediction(i, j), r.abs_error(i, j)}) {
                s += ',';
                append_double(s, v);
            }
            s += '\n';
        }
        out << s;
        s.clear();
    }
    if (!out) throw IoError("failed writing report samples");
}

ReportCurves read_report_samples(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "sample_id,t,h,b_ref,b_pred,abs_error")
        throw FormatError("report samples file lacks the expected header");
    std::vector<std::size_t> ids;
    std::vector<std::vector<double>> cols(5);
    std::vector<std::size_t> lengths;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::string_view rest(line);
        auto next = [&]() {
            const auto c = rest.find(',');
            auto field = rest.substr(0, c);
            rest = c == std::string_view::npos ? std::string_view{} : rest.substr(c + 1);
            return field;
        };
        const auto id_text = next();
        std::size_t id = 0;
        const auto res = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (res.ec != std::errc{} || res.ptr != id_text.data() + id_text.size())
            throw FormatError("report samples line " + std::to_string(line_no) + ": bad sample id");
        for (auto& col : cols) {
            if (rest.empty()) throw FormatError("report samples line " + std::to_string(line_no) + ": too few fields");
            col.push_back(parse_double(next(), line_no));
        }
        if (!rest.empty()) throw FormatError("report samples line " + std::to_string(line_no) + ": too many fields");
        if (ids.empty() || ids.back() != id) {
            ids.push_back(id);
            lengths.push_back(0);
        }
        ++lengths.back();
    }
    if (ids.empty()) throw FormatError("report samples file has no rows");
    const std::size_t T = lengths.front();
    for (auto l : lengths)
        if (l != T) throw FormatError("report samples have unequal lengths");

    ReportCurves c;
    c.sample_ids = ids;
    c.t.assign(cols[0].begin(), cols[0].begin() + static_cast<std::ptrdiff_t>(T));
    for (std::size_t i = 1; i < ids.size(); ++i)
        for (std::size_t j = 0; j < T; ++j)
            if (cols[0][i * T + j] != c.t[j]) throw FormatError("report samples do not share one time grid");
    c.h = data::SampleMatrix(ids.size(), T, std::move(cols[1]));
    c.reference = data::SampleMatrix(ids.size(), T, std::move(cols[2]));
    c.prediction = data::SampleMatrix(ids.size(), T, std::move(cols[3]));
    c.abs_error = data::SampleMatrix(ids.size(), T, std::move(cols[4]));
    return c;
}

std::string samples_path(const std::string& report_path) {
    const auto slash = report_path.find_last_of('/');
    const auto dot = report_path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return report_path.substr(0, dot) + ".samples" + report_path.substr(dot);
    return report_path + ".samples.csv";
}

void save_report(const std::string& path, const train::EvalReport& report) {
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        write_report_metrics(out, report);
    }
    const auto sp = samples_path(path);
    std::ofstream out(sp, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + sp + "' for writing");
    write_report_samples(out, report);
}

ReportCurves load_report_curves(const std::string& report_path) {
    const auto sp = samples_path(report_path);
    std::ifstream in(sp);
    if (!in) throw IoError("cannot open '" + sp + "'");
    return read_report_samples(in);
}

void write_sweep(std::ostream& out, const std::vector<train::EvalReport>& reports) {
    std::string s = "rate,R,MAE,RMSE\n";
    for (const auto& r : reports) {
        append_double(s, r.rate);
        for (double v : {r.metrics.r, r.metrics.mae, r.metrics.rmse}) {
            s += ',';
            append_double(s, v);
        }
        s += '\n';
    }
    out << s;
}

}  // namespace hysop::io
