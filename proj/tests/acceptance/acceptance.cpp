// Acceptance runner: one PASS/FAIL line per criterion on stdout, details on
// stderr. Artifacts (datasets, checkpoints, reports, suite dumps) go under
// the work directory and are reused by later criteria in the same run.

#include <malloc.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hysop/data/excitation.hpp"
#include "hysop/error.hpp"
#include "hysop/io/checkpoint.hpp"
#include "hysop/io/hysd.hpp"
#include "hysop/io/oracle_config.hpp"
#include "hysop/io/report.hpp"
#include "hysop/io/svg.hpp"
#include "hysop/train/evaluate.hpp"
#include "hysop/verify/suites.hpp"

namespace fs = std::filesystem;
using namespace hysop;

namespace {

constexpr std::size_t desk_t = 198;
constexpr std::size_t desk_curves = 400;  // 200 train + 200 test
constexpr std::uint64_t desk_seed = 7;
constexpr std::size_t minor_curves = 400;  // 200 train + 200 test, as for the FORC set
constexpr std::uint64_t minor_seed = 11;
constexpr std::size_t desk_epochs = 2000;
const std::vector<double> sweep_rates = {0.01, 0.1, 10.0, 100.0};

struct Outcome {
    bool pass = false;
    std::string summary;
};

struct Context {
    fs::path dir;
    std::size_t epochs = desk_epochs;
    std::ostream& log;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
}

// ---------------------------------------------------------------- suites

Outcome suite_outcome(const Context& ctx, const verify::SuiteResult& r, double max_seconds) {
    std::ostringstream dump;
    for (const auto& c : r.checks) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s %s %.17g %.17g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                      c.limit);
        dump << line;
        if (!c.pass) ctx.log << "  failed check: " << c.name << " = " << sci(c.value) << " limit " << sci(c.limit) << "\n";
    }
    write_text(ctx.dir / (r.name + "_suite.txt"), dump.str());
    const auto& w = r.worst();
    const bool fast = r.seconds < max_seconds;
    Outcome o;
    o.pass = r.passed() && fast;
    o.summary = std::to_string(r.checks.size()) + " checks, worst " + w.name + " " + sci(w.value) + " (limit " +
                sci(w.limit) + "), " + sci(r.seconds) + " s (limit " + std::to_string(int(max_seconds)) + " s)";
    return o;
}

Outcome gradient_criterion(const Context& ctx) { return suite_outcome(ctx, verify::gradient_suite(), 60.0); }
Outcome transform_criterion(const Context& ctx) { return suite_outcome(ctx, verify::transform_suite(), 10.0); }
Outcome preisach_criterion(const Context& ctx) { return suite_outcome(ctx, verify::preisach_suite(), 60.0); }

// ------------------------------------------------------ datasets and models

preisach::PreisachModel oracle() { return io::OracleConfig{}.build(); }

data::HysteresisDataset desk_dataset(const Context& ctx) {
    const auto path = ctx.dir / "desk_forc.hysd";
    if (fs::exists(path)) return io::load_hysd(path.string());
    const auto model = oracle();
    data::ForcOptions o;
    o.b_sat = model.b_sat();
    o.amp_hi = model.reachable_limit();
    auto ds = data::build_dataset(data::sample_forc_b(desk_curves, desk_t, desk_seed, o), model, desk_seed,
                                  data::ExcitationKind::forc);
    io::save_hysd(path.string(), ds);
    return ds;
}

data::HysteresisDataset minor_dataset(const Context& ctx) {
    const auto path = ctx.dir / "minor_gp.hysd";
    if (fs::exists(path)) return io::load_hysd(path.string());
    const auto model = oracle();
    data::MinorLoopOptions o;
    o.peak = model.reachable_limit();
    auto ds = data::build_dataset(data::sample_minor_b(minor_curves, desk_t, minor_seed, o), model, minor_seed,
                                  data::ExcitationKind::minor_loop);
    io::save_hysd(path.string(), ds);
    return ds;
}

train::TrainConfig desk_config(models::Arch arch, const data::HysteresisDataset& ds, std::size_t epochs) {
    auto cfg = train::default_train_config(arch);
    cfg.epochs = epochs;
    cfg.seed = 0;
    cfg.log_every = 250;
    cfg.model_config = models::default_config(arch, ds.sample_length(), ds.require_split().train.size());
    // Full-width WNO is hours per run on one core; see README.
    if (arch == models::Arch::wno) cfg.model_config.set("width", std::size_t{16});
    return cfg;
}

// Loads <name>.hyck from the work directory when it was trained with the
// same budget, otherwise trains and stores it.
train::Checkpoint checkpoint(const Context& ctx, const std::string& name, models::Arch arch,
                             const data::HysteresisDataset& ds) {
    const auto path = ctx.dir / (name + ".hyck");
    if (fs::exists(path)) {
        auto ckpt = io::load_checkpoint(path.string());
        if (ckpt.arch == arch && ckpt.epochs == ctx.epochs) return ckpt;
    }
    const auto cfg = desk_config(arch, ds, ctx.epochs);
    const auto start = std::chrono::steady_clock::now();
    ctx.log << "  training " << name << " (" << ctx.epochs << " epochs, lr " << cfg.lr << ")\n" << std::flush;
    auto ckpt = train::train(cfg, ds, [&](std::size_t epoch, double loss) {
        if (epoch % 500 == 0) ctx.log << "    epoch " << epoch << " loss " << sci(loss) << "\n" << std::flush;
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ctx.log << "  trained " << name << " in " << sci(seconds) << " s, final loss " << sci(ckpt.final_loss) << "\n";
    io::save_checkpoint(path.string(), ckpt);
    return ckpt;
}

// ----------------------------------------------------------- criteria

Outcome rifno_criterion(const Context& ctx) {
    const auto ds = desk_dataset(ctx);
    auto cfg = desk_config(models::Arch::rifno, ds, 0);
    std::vector<std::pair<std::string, train::Checkpoint>> ckpts;
    ckpts.emplace_back("untrained", train::train(cfg, ds));
    cfg.epochs = 20;
    ckpts.emplace_back("trained-20", train::train(cfg, ds));

    Outcome o{true, ""};
    std::ostringstream csv;
    csv << "model,rate,R\n";
    for (const auto& [label, ckpt] : ckpts) {
        const auto base = train::evaluate(ckpt, ds);
        csv << label << ",1," << base.metrics.r << "\n";
        std::size_t identical = 0;
        for (double rate : sweep_rates) {
            const auto r = train::evaluate(ckpt, ds, {train::Partition::test, rate, false});
            csv << label << "," << rate << "," << r.metrics.r << "\n";
            if (same_bits(r.prediction.values(), base.prediction.values())) {
                ++identical;
            } else {
                o.pass = false;
                ctx.log << "  " << label << " prediction differs at rate " << rate << "\n";
            }
        }
        o.summary += label + " " + std::to_string(identical) + "/" + std::to_string(sweep_rates.size()) +
                     " grids bit-identical (R " + sci(base.metrics.r) + "); ";
    }
    write_text(ctx.dir / "rifno_invariance.csv", csv.str());
    o.summary.resize(o.summary.size() - 2);
    return o;
}

struct Bound {
    models::Arch arch;
    bool below;  // R < limit, otherwise R > limit
    double limit;
};

Outcome generalization_criterion(const Context& ctx) {
    using models::Arch;
    const std::vector<Bound> bounds = {{Arch::fno, true, 5e-2},    {Arch::rifno, true, 5e-2},
                                       {Arch::deeponet, true, 1e-1}, {Arch::wno, true, 1e-1},
                                       {Arch::rnn, false, 5e-1},   {Arch::lstm, false, 5e-1},
                                       {Arch::gru, false, 5e-1},   {Arch::edlstm, false, 5e-1}};
    const auto ds = desk_dataset(ctx);
    Outcome o{true, ""};
    for (const auto& b : bounds) {
        const auto name = models::to_string(b.arch);
        const auto ckpt = checkpoint(ctx, "desk_" + name, b.arch, ds);
        const auto report = train::evaluate(ckpt, ds);
        io::save_report((ctx.dir / ("desk_" + name + ".csv")).string(), report);
        const double r = report.metrics.r;
        const bool ok = b.below ? r < b.limit : r > b.limit;
        o.pass = o.pass && ok;
        o.summary += name + " " + sci(r) + (b.below ? " < " : " > ") + sci(b.limit) + (ok ? "" : " [miss]") + "; ";
    }
    o.summary.resize(o.summary.size() - 2);
    return o;
}

Outcome rate_sweep_criterion(const Context& ctx) {
    const auto ds = desk_dataset(ctx);
    Outcome o{true, ""};
    for (auto arch : {models::Arch::fno, models::Arch::deeponet, models::Arch::wno}) {
        const auto name = models::to_string(arch);
        const auto ckpt = checkpoint(ctx, "desk_" + name, arch, ds);
        std::vector<double> rates = {1.0};
        rates.insert(rates.end(), sweep_rates.begin(), sweep_rates.end());
        const auto reports = train::rate_sweep(ckpt, ds, rates);
        std::ostringstream csv;
        io::write_sweep(csv, reports);
        write_text(ctx.dir / ("sweep_" + name + ".csv"), csv.str());
        const double r1 = reports.front().metrics.r;
        const double r100 = reports.back().metrics.r;
        const bool ok = r100 >= 10.0 * r1;
        o.pass = o.pass && ok;
        o.summary += name + " R(x100)/R(x1) = " + sci(r100 / r1) + (ok ? "" : " [miss]") + "; ";
    }
    o.summary.resize(o.summary.size() - 2);
    o.summary += " (need >= 10)";
    return o;
}

// Pixel x/y pairs of every polyline in an SVG.
std::vector<std::vector<std::pair<double, double>>> polylines(const std::string& svg) {
    std::vector<std::vector<std::pair<double, double>>> out;
    const std::string tag = "points=\"";
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
        const auto start = svg.find(tag, pos) + tag.size();
        std::istringstream pts(svg.substr(start, svg.find('"', start) - start));
        std::vector<std::pair<double, double>> line;
        for (std::string pair; pts >> pair;) {
            const auto comma = pair.find(',');
            line.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
        }
        out.push_back(std::move(line));
    }
    return out;
}

Outcome minor_loop_criterion(const Context& ctx) {
    const auto ds = minor_dataset(ctx);
    const auto ckpt = checkpoint(ctx, "minor_fno", models::Arch::fno, ds);
    const auto report = train::evaluate(ckpt, ds);
    const auto report_path = ctx.dir / "minor_fno.csv";
    io::save_report(report_path.string(), report);
    const auto curves = io::load_report_curves(report_path.string());

    // The plotted reference endpoints must be what the oracle produces for
    // the plotted H; the inverse tolerance bounds the round-trip gap.
    const auto model = oracle();
    double endpoint_gap = 0.0;
    for (std::size_t i = 0; i < curves.sample_ids.size(); ++i) {
        const auto b = model.forward_sequence(curves.h.row(i));
        const auto ref = curves.reference.row(i);
        endpoint_gap = std::max({endpoint_gap, std::abs(b.front() - ref.front()), std::abs(b.back() - ref.back())});
    }
    const double oracle_tol = 1e-8;

    const auto fig = io::make_figure(io::PlotKind::loop, curves.t, curves.h.row(0), curves.reference.row(0),
                                     curves.prediction.row(0), "fno minor loop, sample " +
                                                                   std::to_string(curves.sample_ids[0]));
    const auto svg = io::render_svg(fig);
    write_text(ctx.dir / "minor_loop.svg", svg);
    const auto lines = polylines(svg);
    const bool plot_ok = lines.size() == 2 && lines[0].size() == desk_t && lines[1].size() == desk_t;

    const double r = report.metrics.r;
    Outcome o;
    o.pass = r < 1e-1 && endpoint_gap <= oracle_tol && plot_ok;
    o.summary = "fno R " + sci(r) + " < 1.000e-01; reference first/last B vs oracle " + sci(endpoint_gap) +
                " <= " + sci(oracle_tol) + "; loop plot " + std::to_string(lines.size()) + " polylines" +
                (plot_ok ? "" : " [malformed]");
    return o;
}

struct Criterion {
    std::string name;
    std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria();

std::vector<fs::path> artifact_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir));
    std::sort(files.begin(), files.end());
    return files;
}

Outcome run_one(const Criterion& c, const Context& ctx) {
    try {
        return c.run(ctx);
    } catch (const Error& e) {
        return {false, std::string("error: ") + e.code() + ": " + e.what()};
    }
}

// Runs every other criterion into a fresh sibling directory and compares
// every artifact byte for byte with the primary directory.
Outcome reproducibility_criterion(const Context& ctx) {
    const auto first = ctx.dir;
    const auto second = ctx.dir.parent_path() / (ctx.dir.filename().string() + "_repeat");
    fs::remove_all(second);
    fs::create_directories(second);
    std::vector<bool> pass_first, pass_second;
    for (const auto& c : criteria()) {
        if (c.name == "reproducibility") continue;
        ctx.log << "  [first] " << c.name << "\n" << std::flush;
        pass_first.push_back(run_one(c, Context{first, ctx.epochs, ctx.log}).pass);
    }
    for (const auto& c : criteria()) {
        if (c.name == "reproducibility") continue;
        ctx.log << "  [repeat] " << c.name << "\n" << std::flush;
        pass_second.push_back(run_one(c, Context{second, ctx.epochs, ctx.log}).pass);
    }
    const auto a = artifact_files(first);
    const auto b = artifact_files(second);
    Outcome o{true, ""};
    if (a != b) {
        o.pass = false;
        o.summary = "artifact sets differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " files)";
        return o;
    }
    std::size_t differing = 0;
    std::string first_diff;
    for (const auto& f : a) {
        if (slurp(first / f) != slurp(second / f)) {
            if (differing++ == 0) first_diff = f.string();
            ctx.log << "  differs: " << f.string() << "\n";
        }
    }
    const bool verdicts = pass_first == pass_second;
    o.pass = differing == 0 && verdicts;
    o.summary = std::to_string(a.size() - differing) + "/" + std::to_string(a.size()) + " artifacts byte-identical" +
                (differing ? ", first difference " + first_diff : "") + (verdicts ? "" : ", verdicts differ");
    return o;
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {"gradient-suite", gradient_criterion},
        {"transform-suite", transform_criterion},
        {"preisach-suite", preisach_criterion},
        {"rifno-rate-invariance", rifno_criterion},
        {"desk-generalization", generalization_criterion},
        {"rate-sweep", rate_sweep_criterion},
        {"minor-loop", minor_loop_criterion},
        {"reproducibility", reproducibility_criterion},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    // Many short-lived tensors of a few hundred KB: keep them off mmap.
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_TOP_PAD, 64 << 20);

    CLI::App app{"Acceptance criteria runner"};
    std::string work = "acceptance";
    std::vector<std::string> selected;
    std::size_t epochs = desk_epochs;
    bool clean = false, list = false;
    app.add_option("--work", work, "Artifact directory")->capture_default_str();
    app.add_option("--criterion", selected, "Criterion to run (repeatable; default all)");
    app.add_option("--epochs", epochs, "Training budget override for development")->capture_default_str();
    app.add_flag("--clean", clean, "Empty the work directory first");
    app.add_flag("--list", list, "List criterion names");
    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& c : criteria()) std::cout << c.name << "\n";
        return 0;
    }
    for (const auto& s : selected) {
        if (std::none_of(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.name == s; })) {
            std::cerr << "unknown criterion '" << s << "'\n";
            return 2;
        }
    }
    const fs::path dir = fs::absolute(work);
    if (clean) {
        fs::remove_all(dir);
        fs::remove_all(dir.parent_path() / (dir.filename().string() + "_repeat"));
    }
    fs::create_directories(dir);
    if (clean && selected.empty()) return 0;

    const Context ctx{dir, epochs, std::cerr};
    int failures = 0;
    for (const auto& c : criteria()) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        const auto o = run_one(c, ctx);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << "  (" << c.name << " took " << sci(seconds) << " s)\n";
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.summary << std::endl;
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
