#include "hysop/models/recurrent.hpp"

#include <Eigen/Core>
#include <cmath>
#include <memory>

#include "hysop/error.hpp"
#include "hysop/util/random.hpp"

namespace hysop::models {

using nd::Shape;
using nd::Tensor;
using nd::Var;

namespace {

using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RMat>;
using MapM = Eigen::Map<RMat>;
using Vec = Eigen::VectorXd;
using Eigen::Index;

constexpr std::uint64_t init_stream = 0x2c3f;

MapC as_mat(const Tensor& t, std::size_t r, std::size_t c) {
    return MapC(t.data(), static_cast<Index>(r), static_cast<Index>(c));
}
MapM as_mat(Tensor& t, std::size_t r, std::size_t c) {
    return MapM(t.data(), static_cast<Index>(r), static_cast<Index>(c));
}
Eigen::Map<const Vec> as_vec(const Tensor& t) { return {t.data(), static_cast<Index>(t.size())}; }
Eigen::Map<Vec> as_vec(Tensor& t) { return {t.data(), static_cast<Index>(t.size())}; }

double sigm(double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); }

struct Dims {
    std::size_t steps, features, hidden;
};

Dims check_cell(const char* who, const Var& x, const Var& w_ih, const Var& w_hh, const Var& b_ih,
                const Var& b_hh, std::size_t gates) {
    const auto& xs = x.shape();
    const auto& wi = w_ih.shape();
    const auto& wh = w_hh.shape();
    if (xs.size() != 2 || wi.size() != 2 || wh.size() != 2 || wi[0] % gates != 0)
        throw ShapeError(std::string(who) + ": bad ranks for x " + nd::shape_string(xs) + ", w_ih " +
                         nd::shape_string(wi));
    const std::size_t h = wi[0] / gates;
    if (wi[1] != xs[1] || wh[0] != gates * h || wh[1] != h || b_ih.shape() != Shape{gates * h} ||
        b_hh.shape() != Shape{gates * h})
        throw ShapeError(std::string(who) + ": inconsistent shapes x " + nd::shape_string(xs) + ", w_ih " +
                         nd::shape_string(wi) + ", w_hh " + nd::shape_string(wh));
    for (const Var* v : {&w_ih, &w_hh, &b_ih, &b_hh})
        if (v->tape != x.tape) throw TapeError("operands live on different tapes");
    return {xs[0], xs[1], h};
}

// X W_ih^T + b_ih (+ b_hh when fold_hh), one row per step.
RMat input_projection(const Tensor& x, const Tensor& w_ih, const Tensor& b_ih, const Tensor* b_hh, Dims d,
                      std::size_t gates) {
    RMat xw = as_mat(x, d.steps, d.features) * as_mat(w_ih, gates * d.hidden, d.features).transpose();
    xw.rowwise() += as_vec(b_ih).transpose();
    if (b_hh) xw.rowwise() += as_vec(*b_hh).transpose();
    return xw;
}

// Shared tail of the backward passes: the per-step pre-activation gradients
// dx_pre [T, G*H] feed w_ih, b_ih and x; dh_pre [T, G*H] feed w_hh, b_hh.
void input_side_grads(const RMat& dx_pre, const Tensor& x, const Tensor& w_ih, Dims d, std::size_t gates,
                      std::vector<Tensor*>& gi) {
    if (gi[0]) as_mat(*gi[0], d.steps, d.features).noalias() += dx_pre * as_mat(w_ih, gates * d.hidden, d.features);
    if (gi[1]) as_mat(*gi[1], gates * d.hidden, d.features).noalias() += dx_pre.transpose() * as_mat(x, d.steps, d.features);
    if (gi[3]) as_vec(*gi[3]) += dx_pre.colwise().sum().transpose();
}

void hidden_side_grads(const RMat& dh_pre, const RMat& h_prev, Dims d, std::size_t gates,
                       std::vector<Tensor*>& gi) {
    if (gi[2]) as_mat(*gi[2], gates * d.hidden, d.hidden).noalias() += dh_pre.transpose() * h_prev;
    if (gi[4]) as_vec(*gi[4]) += dh_pre.colwise().sum().transpose();
}

// Activated LSTM gates (i, f, g, o) from a pre-activation row.
void lstm_activate(const double* a, double* gate, std::size_t h) {
    for (std::size_t j = 0; j < h; ++j) {
        gate[j] = sigm(a[j]);
        gate[h + j] = sigm(a[h + j]);
        gate[2 * h + j] = std::tanh(a[2 * h + j]);
        gate[3 * h + j] = sigm(a[3 * h + j]);
    }
}

}  // namespace

std::size_t gate_count(CellKind cell) noexcept {
    switch (cell) {
        case CellKind::rnn: return 1;
        case CellKind::lstm: return 4;
        case CellKind::gru: return 3;
    }
    return 1;
}

Var rnn_sequence(Var x, Var w_ih, Var w_hh, Var b_ih, Var b_hh, Var h0) {
    const Dims d = check_cell("rnn_sequence", x, w_ih, w_hh, b_ih, b_hh, 1);
    if (h0.shape() != Shape{d.hidden}) throw ShapeError("rnn_sequence: h0 must be [hidden]");
    const Tensor& xv = x.value();
    const Tensor& wi = w_ih.value();
    const Tensor& wh = w_hh.value();
    const Tensor& h0v = h0.value();
    RMat xw = input_projection(xv, wi, b_ih.value(), &b_hh.value(), d, 1);
    Tensor out(Shape{d.steps, d.hidden});
    auto H = as_mat(out, d.steps, d.hidden);
    const auto Whh = as_mat(wh, d.hidden, d.hidden);
    Vec h = as_vec(h0v);
    for (std::size_t t = 0; t < d.steps; ++t) {
        Vec a = xw.row(static_cast<Index>(t)).transpose() + Whh * h;
        h = a.array().tanh();
        H.row(static_cast<Index>(t)) = h.transpose();
    }
    const Tensor *xp = &xv, *wip = &wi, *whp = &wh, *h0p = &h0v;
    return x.tape->record(std::move(out), {x, w_ih, w_hh, b_ih, b_hh, h0},
                          [=](const Tensor& y, const Tensor& g, std::vector<Tensor*>& gi) {
                              const auto Hs = as_mat(y, d.steps, d.hidden);
                              const auto G = as_mat(g, d.steps, d.hidden);
                              const auto Whh = as_mat(*whp, d.hidden, d.hidden);
                              RMat da(d.steps, d.hidden);
                              Vec dh_next = Vec::Zero(static_cast<Index>(d.hidden));
                              for (std::size_t t = d.steps; t-- > 0;) {
                                  const auto ti = static_cast<Index>(t);
                                  Vec dh = G.row(ti).transpose() + dh_next;
                                  Vec a = dh.array() * (1.0 - Hs.row(ti).transpose().array().square());
                                  da.row(ti) = a.transpose();
                                  dh_next.noalias() = Whh.transpose() * a;
                              }
                              RMat h_prev(d.steps, d.hidden);
                              h_prev.row(0) = as_vec(*h0p).transpose();
                              if (d.steps > 1) h_prev.bottomRows(static_cast<Index>(d.steps - 1)) = Hs.topRows(static_cast<Index>(d.steps - 1));
                              input_side_grads(da, *xp, *wip, d, 1, gi);
                              hidden_side_grads(da, h_prev, d, 1, gi);
                              if (gi[5]) as_vec(*gi[5]) += dh_next;
                          });
}

Var lstm_sequence(Var x, Var w_ih, Var w_hh, Var b_ih, Var b_hh, Var init) {
    const Dims d = check_cell("lstm_sequence", x, w_ih, w_hh, b_ih, b_hh, 4);
    if (init.shape() != Shape{2, d.hidden}) throw ShapeError("lstm_sequence: init must be [2, hidden]");
    const std::size_t hd = d.hidden;
    const Tensor& xv = x.value();
    const Tensor& wi = w_ih.value();
    const Tensor& wh = w_hh.value();
    const Tensor& iv = init.value();
    RMat xw = input_projection(xv, wi, b_ih.value(), &b_hh.value(), d, 4);
    auto gates = std::make_shared<RMat>(d.steps, 4 * hd);
    Tensor out(Shape{d.steps, 2, hd});
    const auto Whh = as_mat(wh, 4 * hd, hd);
    Vec h = Eigen::Map<const Vec>(iv.data(), static_cast<Index>(hd));
    Vec c = Eigen::Map<const Vec>(iv.data() + hd, static_cast<Index>(hd));
    Vec a(static_cast<Index>(4 * hd));
    for (std::size_t t = 0; t < d.steps; ++t) {
        a.noalias() = Whh * h;
        a += xw.row(static_cast<Index>(t)).transpose();
        double* gt = gates->data() + t * 4 * hd;
        lstm_activate(a.data(), gt, hd);
        for (std::size_t j = 0; j < hd; ++j) {
            c[static_cast<Index>(j)] = gt[hd + j] * c[static_cast<Index>(j)] + gt[j] * gt[2 * hd + j];
            h[static_cast<Index>(j)] = gt[3 * hd + j] * std::tanh(c[static_cast<Index>(j)]);
        }
        std::copy_n(h.data(), hd, out.data() + t * 2 * hd);
        std::copy_n(c.data(), hd, out.data() + t * 2 * hd + hd);
    }
    const Tensor *xp = &xv, *wip = &wi, *whp = &wh, *ip = &iv;
    return x.tape->record(
        std::move(out), {x, w_ih, w_hh, b_ih, b_hh, init},
        [=](const Tensor& y, const Tensor& g, std::vector<Tensor*>& gi) {
            const auto Whh = as_mat(*whp, 4 * hd, hd);
            RMat da(d.steps, 4 * hd);
            RMat h_prev(d.steps, hd);
            Vec dh_next = Vec::Zero(static_cast<Index>(hd));
            Vec dc_next = Vec::Zero(static_cast<Index>(hd));
            for (std::size_t t = d.steps; t-- > 0;) {
                const double* gt = gates->data() + t * 4 * hd;
                const double* ct = y.data() + t * 2 * hd + hd;
                const double* cp = t > 0 ? y.data() + (t - 1) * 2 * hd + hd : ip->data() + hd;
                const double* hp = t > 0 ? y.data() + (t - 1) * 2 * hd : ip->data();
                const double* gh = g.data() + t * 2 * hd;
                const double* gc = gh + hd;
                double* dat = da.data() + t * 4 * hd;
                for (std::size_t j = 0; j < hd; ++j) {
                    const auto jj = static_cast<Index>(j);
                    const double i = gt[j], f = gt[hd + j], gg = gt[2 * hd + j], o = gt[3 * hd + j];
                    const double tc = std::tanh(ct[j]);
                    const double dh = gh[j] + dh_next[jj];
                    const double dc = gc[j] + dc_next[jj] + dh * o * (1.0 - tc * tc);
                    dat[j] = dc * gg * i * (1.0 - i);
                    dat[hd + j] = dc * cp[j] * f * (1.0 - f);
                    dat[2 * hd + j] = dc * i * (1.0 - gg * gg);
                    dat[3 * hd + j] = dh * tc * o * (1.0 - o);
                    dc_next[jj] = dc * f;
                    h_prev(static_cast<Index>(t), jj) = hp[j];
                }
                dh_next.noalias() = Whh.transpose() * da.row(static_cast<Index>(t)).transpose();
            }
            input_side_grads(da, *xp, *wip, d, 4, gi);
            hidden_side_grads(da, h_prev, d, 4, gi);
            if (gi[5]) {
                for (std::size_t j = 0; j < hd; ++j) {
                    (*gi[5])[j] += dh_next[static_cast<Index>(j)];
                    (*gi[5])[hd + j] += dc_next[static_cast<Index>(j)];
                }
            }
        });
}

Var gru_sequence(Var x, Var w_ih, Var w_hh, Var b_ih, Var b_hh, Var h0) {
    const Dims d = check_cell("gru_sequence", x, w_ih, w_hh, b_ih, b_hh, 3);
    if (h0.shape() != Shape{d.hidden}) throw ShapeError("gru_sequence: h0 must be [hidden]");
    const std::size_t hd = d.hidden;
    const Tensor& xv = x.value();
    const Tensor& wi = w_ih.value();
    const Tensor& wh = w_hh.value();
    const Tensor& bhh = b_hh.value();
    const Tensor& h0v = h0.value();
    RMat xw = input_projection(xv, wi, b_ih.value(), nullptr, d, 3);
    // r, z, n and the recurrent part of n (W_hn h + b_hn) per step
    auto saved = std::make_shared<RMat>(d.steps, 4 * hd);
    Tensor out(Shape{d.steps, hd});
    const auto Whh = as_mat(wh, 3 * hd, hd);
    Vec h = as_vec(h0v);
    Vec hw(static_cast<Index>(3 * hd));
    for (std::size_t t = 0; t < d.steps; ++t) {
        hw.noalias() = Whh * h;
        hw += as_vec(bhh);
        const double* xr = xw.data() + t * 3 * hd;
        double* s = saved->data() + t * 4 * hd;
        for (std::size_t j = 0; j < hd; ++j) {
            const auto jj = static_cast<Index>(j);
            const double r = sigm(xr[j] + hw[jj]);
            const double z = sigm(xr[hd + j] + hw[static_cast<Index>(hd + j)]);
            const double hn = hw[static_cast<Index>(2 * hd + j)];
            const double n = std::tanh(xr[2 * hd + j] + r * hn);
            s[j] = r;
            s[hd + j] = z;
            s[2 * hd + j] = n;
            s[3 * hd + j] = hn;
            h[jj] = (1.0 - z) * n + z * h[jj];
        }
        std::copy_n(h.data(), hd, out.data() + t * hd);
    }
    const Tensor *xp = &xv, *wip = &wi, *whp = &wh, *h0p = &h0v;
    return x.tape->record(
        std::move(out), {x, w_ih, w_hh, b_ih, b_hh, h0},
        [=](const Tensor& y, const Tensor& g, std::vector<Tensor*>& gi) {
            const auto Whh = as_mat(*whp, 3 * hd, hd);
            RMat dx_pre(d.steps, 3 * hd);
            RMat dh_pre(d.steps, 3 * hd);
            RMat h_prev(d.steps, hd);
            Vec dh_next = Vec::Zero(static_cast<Index>(hd));
            for (std::size_t t = d.steps; t-- > 0;) {
                const double* s = saved->data() + t * 4 * hd;
                const double* hp = t > 0 ? y.data() + (t - 1) * hd : h0p->data();
                double* dx = dx_pre.data() + t * 3 * hd;
                double* dhh = dh_pre.data() + t * 3 * hd;
                Vec direct(static_cast<Index>(hd));
                for (std::size_t j = 0; j < hd; ++j) {
                    const auto jj = static_cast<Index>(j);
                    const double r = s[j], z = s[hd + j], n = s[2 * hd + j], hn = s[3 * hd + j];
                    const double dh = g[t * hd + j] + dh_next[jj];
                    const double dan = dh * (1.0 - z) * (1.0 - n * n);
                    const double dar = dan * hn * r * (1.0 - r);
                    const double daz = dh * (hp[j] - n) * z * (1.0 - z);
                    dx[j] = dar;
                    dx[hd + j] = daz;
                    dx[2 * hd + j] = dan;
                    dhh[j] = dar;
                    dhh[hd + j] = daz;
                    dhh[2 * hd + j] = dan * r;
                    direct[jj] = dh * z;
                    h_prev(static_cast<Index>(t), jj) = hp[j];
                }
                dh_next = direct;
                dh_next.noalias() += Whh.transpose() * dh_pre.row(static_cast<Index>(t)).transpose();
            }
            input_side_grads(dx_pre, *xp, *wip, d, 3, gi);
            hidden_side_grads(dh_pre, h_prev, d, 3, gi);
            if (gi[5]) as_vec(*gi[5]) += dh_next;
        });
}

// ---- configuration -----------------------------------------------------------

KeyValues RecurrentConfig::to_kv() const {
    KeyValues kv;
    kv.set("cell", std::string(cell == CellKind::rnn ? "rnn" : cell == CellKind::gru ? "gru" : "lstm"));
    kv.set("features", features);
    kv.set("hidden", hidden);
    kv.set("samples", samples);
    return kv;
}

RecurrentConfig RecurrentConfig::from_kv(const KeyValues& kv) {
    RecurrentConfig c;
    const auto& cell = kv.get("cell");
    if (cell == "rnn") c.cell = CellKind::rnn;
    else if (cell == "lstm") c.cell = CellKind::lstm;
    else if (cell == "gru") c.cell = CellKind::gru;
    else throw FormatError("unknown cell kind '" + cell + "'");
    c.features = kv.get_size("features");
    c.hidden = kv.get_size("hidden");
    c.samples = kv.get_size("samples");
    return c;
}

namespace {

void check_config(const RecurrentConfig& c) {
    if (c.features == 0 || c.hidden == 0 || c.samples == 0)
        throw ParameterError("recurrent features, hidden and samples must be positive");
}

void add_cell(nd::ParameterSet& p, const std::string& prefix, std::size_t gates, std::size_t in,
              std::size_t hidden, Rng& rng) {
    p.add(prefix + ".w_ih", nd::xavier_uniform(Shape{gates * hidden, in}, rng));
    p.add(prefix + ".w_hh", nd::xavier_uniform(Shape{gates * hidden, hidden}, rng));
    p.add(prefix + ".b_ih", Tensor(Shape{gates * hidden}, 0.0));
    p.add(prefix + ".b_hh", Tensor(Shape{gates * hidden}, 0.0));
}

std::size_t cell_count(std::size_t gates, std::size_t in, std::size_t hidden) {
    return gates * hidden * (in + hidden + 2);
}

void check_sequence(const Tensor& x, const RecurrentConfig& c, const char* what) {
    if (x.shape() != Shape{c.samples, c.features})
        throw ShapeError(std::string(what) + " must be [" + std::to_string(c.samples) + ", " +
                         std::to_string(c.features) + "], got " + nd::shape_string(x.shape()));
}

Var run_cell(CellKind cell, const nd::BoundParameters& p, const std::string& prefix, Var x, Var init) {
    const auto wi = p[prefix + ".w_ih"], wh = p[prefix + ".w_hh"], bi = p[prefix + ".b_ih"],
               bh = p[prefix + ".b_hh"];
    switch (cell) {
        case CellKind::rnn: return rnn_sequence(x, wi, wh, bi, bh, init);
        case CellKind::gru: return gru_sequence(x, wi, wh, bi, bh, init);
        case CellKind::lstm: break;
    }
    return lstm_sequence(x, wi, wh, bi, bh, init);
}

// h_t rows of an LSTM state sequence [T, 2, H].
Var lstm_hidden(Var states) {
    const auto& s = states.shape();
    return nd::reshape(nd::slice(states, 1, 0, 1), Shape{s[0], s[2]});
}

}  // namespace

RecurrentNet::RecurrentNet(RecurrentConfig config) : cfg_(config) { check_config(cfg_); }

Arch RecurrentNet::arch() const {
    switch (cfg_.cell) {
        case CellKind::rnn: return Arch::rnn;
        case CellKind::gru: return Arch::gru;
        case CellKind::lstm: break;
    }
    return Arch::lstm;
}

std::size_t RecurrentNet::parameter_count() const {
    return cell_count(gate_count(cfg_.cell), cfg_.features, cfg_.hidden) + cfg_.hidden * cfg_.features +
           cfg_.features;
}

nd::ParameterSet RecurrentNet::init(std::uint64_t seed) const {
    auto rng = make_rng(seed, init_stream);
    nd::ParameterSet p;
    add_cell(p, "cell", gate_count(cfg_.cell), cfg_.features, cfg_.hidden, rng);
    p.add("out.w", nd::xavier_uniform(Shape{cfg_.features, cfg_.hidden}, rng));
    p.add("out.b", Tensor(Shape{cfg_.features}, 0.0));
    return p;
}

Var RecurrentNet::forward(nd::Tape& tape, const nd::BoundParameters& p, const Tensor& h_seq,
                          const Tensor*) const {
    check_sequence(h_seq, cfg_, "input sequence");
    const Shape init_shape = cfg_.cell == CellKind::lstm ? Shape{2, cfg_.hidden} : Shape{cfg_.hidden};
    auto states = run_cell(cfg_.cell, p, "cell", tape.constant(h_seq), tape.constant(Tensor(init_shape, 0.0)));
    auto hidden = cfg_.cell == CellKind::lstm ? lstm_hidden(states) : states;
    return nd::linear(hidden, p["out.w"], p["out.b"]);
}

EdLstm::EdLstm(RecurrentConfig config) : cfg_(config) {
    cfg_.cell = CellKind::lstm;
    check_config(cfg_);
}

KeyValues EdLstm::config() const {
    auto kv = cfg_.to_kv();
    kv.set("decoder", std::string("lstm"));
    return kv;
}

std::size_t EdLstm::parameter_count() const {
    return 2 * cell_count(4, cfg_.features, cfg_.hidden) + cfg_.hidden * cfg_.features + cfg_.features;
}

nd::ParameterSet EdLstm::init(std::uint64_t seed) const {
    auto rng = make_rng(seed, init_stream);
    nd::ParameterSet p;
    add_cell(p, "enc", 4, cfg_.features, cfg_.hidden, rng);
    add_cell(p, "dec", 4, cfg_.features, cfg_.hidden, rng);
    p.add("out.w", nd::xavier_uniform(Shape{cfg_.features, cfg_.hidden}, rng));
    p.add("out.b", Tensor(Shape{cfg_.features}, 0.0));
    return p;
}

Var EdLstm::forward(nd::Tape& tape, const nd::BoundParameters& p, const Tensor& h_seq,
                    const Tensor* targets) const {
    if (!targets) throw ParameterError("teacher forcing needs target sequences");
    check_sequence(h_seq, cfg_, "input sequence");
    check_sequence(*targets, cfg_, "target sequence");
    const std::size_t steps = cfg_.samples, f = cfg_.features;
    auto enc = lstm_sequence(tape.constant(h_seq), p["enc.w_ih"], p["enc.w_hh"], p["enc.b_ih"], p["enc.b_hh"],
                             tape.constant(Tensor(Shape{2, cfg_.hidden}, 0.0)));
    auto seed_state = nd::reshape(nd::slice(enc, 0, steps - 1, steps), Shape{2, cfg_.hidden});
    Tensor shifted(Shape{steps, f}, 0.0);
    std::copy_n(targets->data(), (steps - 1) * f, shifted.data() + f);
    auto dec = lstm_sequence(tape.constant(shifted), p["dec.w_ih"], p["dec.w_hh"], p["dec.b_ih"], p["dec.b_hh"],
                             seed_state);
    return nd::linear(lstm_hidden(dec), p["out.w"], p["out.b"]);
}

Tensor EdLstm::predict(const nd::ParameterSet& params, const Tensor& h_seq) const {
    return decode(params, h_seq, DecodeMode::autoregressive, nullptr);
}

Tensor EdLstm::decode(const nd::ParameterSet& params, const Tensor& h_seq, DecodeMode mode,
                      const Tensor* targets) const {
    if (mode == DecodeMode::teacher_forced) {
        nd::Tape tape;
        nd::BoundParameters bound(tape, params, false);
        return forward(tape, bound, h_seq, targets).value();
    }
    check_sequence(h_seq, cfg_, "input sequence");
    const std::size_t steps = cfg_.samples, f = cfg_.features, hd = cfg_.hidden;
    Tensor state;
    {
        nd::Tape tape;
        nd::BoundParameters p(tape, params, false);
        auto enc = lstm_sequence(tape.constant(h_seq), p["enc.w_ih"], p["enc.w_hh"], p["enc.b_ih"],
                                 p["enc.b_hh"], tape.constant(Tensor(Shape{2, hd}, 0.0)));
        state = Tensor(Shape{2, hd}, std::vector<double>(enc.value().data() + (steps - 1) * 2 * hd,
                                                           enc.value().data() + steps * 2 * hd));
    }
    const auto Wih = as_mat(params.at("dec.w_ih"), 4 * hd, f);
    const auto Whh = as_mat(params.at("dec.w_hh"), 4 * hd, hd);
    const auto bih = as_vec(params.at("dec.b_ih"));
    const auto bhh = as_vec(params.at("dec.b_hh"));
    const auto Wout = as_mat(params.at("out.w"), f, hd);
    const auto bout = as_vec(params.at("out.b"));
    Vec h = Eigen::Map<const Vec>(state.data(), static_cast<Index>(hd));
    Vec c = Eigen::Map<const Vec>(state.data() + hd, static_cast<Index>(hd));
    Vec prev = Vec::Zero(static_cast<Index>(f));
    Vec a(static_cast<Index>(4 * hd));
    std::vector<double> gate(4 * hd);
    Tensor out(Shape{steps, f});
    for (std::size_t t = 0; t < steps; ++t) {
        a.noalias() = Wih * prev;
        a.noalias() += Whh * h;
        a += bih + bhh;
        lstm_activate(a.data(), gate.data(), hd);
        for (std::size_t j = 0; j < hd; ++j) {
            const auto jj = static_cast<Index>(j);
            c[jj] = gate[hd + j] * c[jj] + gate[j] * gate[2 * hd + j];
            h[jj] = gate[3 * hd + j] * std::tanh(c[jj]);
        }
        prev.noalias() = Wout * h;
        prev += bout;
        std::copy_n(prev.data(), f, out.data() + t * f);
    }
    return out;
}

}  // namespace hysop::models
