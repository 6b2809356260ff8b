#include "hysop/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
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

namespace hysop::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_rates(const std::string& text) {
    std::vector<double> rates;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        double v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw ParameterError("rate '" + item + "' is not a number");
        rates.push_back(v);
        start = comma + 1;
    }
    return rates;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << bytes;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

struct GenerateArgs {
    std::string kind, density_config, out, csv;
    std::size_t n = 0, t_samples = 198, workers = 1;
    std::uint64_t seed = 0;
};

void generate(const GenerateArgs& a, std::ostream& out) {
    const auto kind = data::excitation_kind_from_string(a.kind);
    const auto config = a.density_config.empty() ? io::OracleConfig{} : io::load_oracle_config(a.density_config);
    const auto oracle = config.build();
    std::vector<data::Waveform> curves;
    if (kind == data::ExcitationKind::forc) {
        data::ForcOptions o;
        o.b_sat = oracle.b_sat();
        o.amp_hi = oracle.reachable_limit();
        o.amp_lo = std::min(o.amp_lo, o.amp_hi);
        curves = data::sample_forc_b(a.n, a.t_samples, a.seed, o);
    } else if (kind == data::ExcitationKind::minor_loop) {
        data::MinorLoopOptions o;
        o.peak = oracle.reachable_limit();
        curves = data::sample_minor_b(a.n, a.t_samples, a.seed, o);
    } else {
        throw ParameterError("--kind must be forc or minor");
    }
    data::BuildOptions build;
    build.workers = a.workers;
    const auto ds = data::build_dataset(curves, oracle, a.seed, kind, build);
    io::save_hysd(a.out, ds);
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv, std::ios::trunc);
        if (!csv) throw IoError("cannot open '" + a.csv + "' for writing");
        data::write_csv(csv, ds);
    }
    out << "wrote " << a.out << ": kind=" << data::to_string(kind) << " N=" << ds.sample_count()
        << " T=" << ds.sample_length() << " train=" << ds.split->train.size() << " test=" << ds.split->test.size()
        << "\n";
}

struct TrainArgs {
    std::string arch, data, out;
    std::size_t epochs = 10000, batch = 0, log_every = 100;
    double lr = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> config;
    bool lr_set = false, batch_set = false;
};

void train_cmd(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const auto ds = io::load_hysd(a.data);
    const auto arch = models::arch_from_string(a.arch);
    auto cfg = train::default_train_config(arch);
    cfg.epochs = a.epochs;
    cfg.seed = a.seed;
    cfg.log_every = a.log_every;
    if (a.lr_set) cfg.lr = a.lr;
    if (a.batch_set) cfg.batch = a.batch;
    const auto& split = ds.require_split();
    cfg.model_config = models::default_config(arch, ds.sample_length(), split.train.size());
    for (const auto& item : a.config) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ParameterError("--config expects key=value, got '" + item + "'");
        const auto key = item.substr(0, eq);
        if (!cfg.model_config.has(key))
            throw ParameterError("unknown " + models::to_string(arch) + " config key '" + key + "'");
        cfg.model_config.set(key, item.substr(eq + 1));
    }
    const auto ckpt = train::train(cfg, ds, [&](std::size_t epoch, double loss) {
        err << "epoch " << epoch << " loss " << fmt(loss) << "\n";
        err.flush();
    });
    io::save_checkpoint(a.out, ckpt);
    out << "final_loss " << fmt(ckpt.final_loss) << "\n";
}

struct EvalArgs {
    std::string ckpt, data, report, partition = "test";
    double rate = 1.0;
    bool scaled = false;
};

void eval_cmd(const EvalArgs& a, std::ostream& out) {
    const auto ckpt = io::load_checkpoint(a.ckpt);
    const auto ds = io::load_hysd(a.data);
    train::EvalOptions opt;
    opt.partition = train::partition_from_string(a.partition);
    opt.rate = a.rate;
    opt.scaled = a.scaled;
    const auto report = train::evaluate(ckpt, ds, opt);
    // Compose both files before touching the disk.
    io::save_report(a.report, report);
    out << "R " << fmt(report.metrics.r) << "\nMAE " << fmt(report.metrics.mae) << "\nRMSE "
        << fmt(report.metrics.rmse) << "\n";
    out << "stored_final_loss " << fmt(ckpt.final_loss) << "\n";
    if (ds.split) out << "train_loss " << fmt(train::train_loss(ckpt, ds)) << "\n";
}

struct SweepArgs {
    std::string ckpt, data, rates = "0.01,0.1,10,100", out;
};

void sweep_cmd(const SweepArgs& a, std::ostream& out) {
    const auto ckpt = io::load_checkpoint(a.ckpt);
    const auto ds = io::load_hysd(a.data);
    const auto reports = train::rate_sweep(ckpt, ds, parse_rates(a.rates));
    std::ostringstream csv;
    io::write_sweep(csv, reports);
    if (!a.out.empty()) write_file(a.out, csv.str());
    out << csv.str();
}

int gradcheck_cmd(const std::string& suite, std::ostream& out, std::ostream& err) {
    std::vector<verify::SuiteResult> results;
    if (suite == "gradient" || suite == "all") results.push_back(verify::gradient_suite());
    if (suite == "transform" || suite == "all") results.push_back(verify::transform_suite());
    if (suite == "preisach" || suite == "all") results.push_back(verify::preisach_suite());
    if (results.empty()) throw ParameterError("unknown suite '" + suite + "'");
    int code = 0;
    for (const auto& r : results) {
        for (const auto& c : r.checks) {
            char line[256];
            std::snprintf(line, sizeof(line), "%-4s %-46s %.3e (limit %.0e)\n", c.pass ? "ok" : "FAIL",
                          c.name.c_str(), c.value, c.limit);
            out << line;
        }
        char line[128];
        std::snprintf(line, sizeof(line), "%s suite: %s in %.2f s\n", r.name.c_str(), r.passed() ? "pass" : "fail",
                      r.seconds);
        out << line;
        if (!r.passed()) {
            const auto& w = r.worst();
            err << "error: check: " << r.name << " suite failed at '" << w.name << "' (" << fmt(w.value)
                << " vs limit " << fmt(w.limit) << ")\n";
            code = 1;
        }
    }
    return code;
}

struct PlotArgs {
    std::string report, data, out, kind = "prediction";
    std::size_t sample = 0;
};

void plot_cmd(const PlotArgs& a, std::ostream& out) {
    const auto kind = io::plot_kind_from_string(a.kind);
    if (a.report.empty() == a.data.empty()) throw ParameterError("plot needs exactly one of --report or --data");
    io::Figure fig;
    if (!a.report.empty()) {
        std::ifstream in(a.report);
        if (!in) throw IoError("cannot open '" + a.report + "'");
        const auto meta = io::read_report_metrics(in);
        const auto curves = io::load_report_curves(a.report);
        if (a.sample >= curves.sample_ids.size())
            throw ParameterError("report holds " + std::to_string(curves.sample_ids.size()) +
                                 " samples, --sample is " + std::to_string(a.sample));
        const auto arch = meta.count("arch") ? meta.at("arch") : std::string("model");
        fig = io::make_figure(kind, curves.t, curves.h.row(a.sample), curves.reference.row(a.sample),
                              curves.prediction.row(a.sample),
                              arch + ", sample " + std::to_string(curves.sample_ids[a.sample]));
    } else {
        const auto ds = io::load_hysd(a.data);
        if (a.sample >= ds.sample_count())
            throw ParameterError("dataset holds " + std::to_string(ds.sample_count()) + " samples, --sample is " +
                                 std::to_string(a.sample));
        fig = io::make_figure(kind, ds.t, ds.h.row(a.sample), ds.b.row(a.sample), {},
                              data::to_string(ds.kind) + " sample " + std::to_string(a.sample));
    }
    const auto svg = io::render_svg(fig);
    write_file(a.out, svg);
    out << "wrote " << a.out << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hysteresis operator learning: data generation, training and evaluation", "hysop"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Build a synthetic dataset through the Preisach oracle");
    g->add_option("--kind", gen.kind, "forc or minor")->required();
    g->add_option("--n", gen.n, "Number of curves")->required()->check(CLI::PositiveNumber);
    g->add_option("--t-samples", gen.t_samples, "Samples per curve")->capture_default_str();
    g->add_option("--seed", gen.seed, "Seed for curves and split")->capture_default_str();
    g->add_option("--density-config", gen.density_config, "Oracle key=value file (default: gaussian)");
    g->add_option("--workers", gen.workers, "Inversion threads, 0 = all cores")->capture_default_str();
    g->add_option("--csv", gen.csv, "Also write sample_id,t,h,b CSV here");
    g->add_option("--out", gen.out, "Output HYSD file")->required();

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train a model on a HYSD dataset");
    t->add_option("--arch", tr.arch, "deeponet|fno|rifno|wno|rnn|lstm|gru|edlstm")->required();
    t->add_option("--data", tr.data, "HYSD dataset with split and scaler")->required();
    t->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
    auto* lr_opt = t->add_option("--lr", tr.lr, "Adam learning rate (default per architecture)");
    auto* batch_opt = t->add_option("--batch", tr.batch, "Minibatch size, 0 = full batch (default per architecture)");
    t->add_option("--seed", tr.seed, "Seed for initialization and shuffling")->capture_default_str();
    t->add_option("--log-every", tr.log_every, "Progress interval in epochs")->capture_default_str();
    t->add_option("--config", tr.config, "Model config override key=value (repeatable)");
    t->add_option("--out", tr.out, "Output checkpoint")->required();

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Evaluate a checkpoint and write a report");
    e->add_option("--ckpt", ev.ckpt, "Checkpoint")->required();
    e->add_option("--data", ev.data, "HYSD dataset")->required();
    e->add_option("--report", ev.report, "Report CSV; curves go next to it")->required();
    e->add_option("--partition", ev.partition, "train, test or all")->capture_default_str();
    e->add_option("--rate", ev.rate, "Time-grid scale")->capture_default_str();
    e->add_flag("--scaled", ev.scaled, "Metrics in scaled units");

    SweepArgs sw;
    auto* s = app.add_subcommand("rate-sweep", "Test-partition metrics at several time-grid rates");
    s->add_option("--ckpt", sw.ckpt, "Operator checkpoint")->required();
    s->add_option("--data", sw.data, "HYSD dataset")->required();
    s->add_option("--rates", sw.rates, "Comma-separated rates")->capture_default_str();
    s->add_option("--out", sw.out, "Also write the CSV here");

    std::string suite = "gradient";
    auto* gc = app.add_subcommand("gradcheck", "Run the built-in verification suites");
    gc->add_option("--suite", suite, "gradient, transform, preisach or all")->capture_default_str();

    PlotArgs pl;
    auto* p = app.add_subcommand("plot", "Render an SVG from a report or a dataset curve");
    p->add_option("--report", pl.report, "Report CSV written by eval");
    p->add_option("--data", pl.data, "HYSD dataset (reference curve only)");
    p->add_option("--out", pl.out, "Output SVG")->required();
    p->add_option("--kind", pl.kind, "prediction, loop or error")->capture_default_str();
    p->add_option("--sample", pl.sample, "Row within the report or dataset")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& ex) {
        std::string msg = ex.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: usage: " << msg << "\n";
        return 2;
    }

    try {
        if (g->parsed()) {
            generate(gen, out);
        } else if (t->parsed()) {
            tr.lr_set = lr_opt->count() > 0;
            tr.batch_set = batch_opt->count() > 0;
            train_cmd(tr, out, err);
        } else if (e->parsed()) {
            eval_cmd(ev, out);
        } else if (s->parsed()) {
            sweep_cmd(sw, out);
        } else if (gc->parsed()) {
            return gradcheck_cmd(suite, out, err);
        } else if (p->parsed()) {
            plot_cmd(pl, out);
        }
    } catch (const Error& ex) {
        std::string msg = ex.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << ex.code() << ": " << msg << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: internal: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace hysop::cli
