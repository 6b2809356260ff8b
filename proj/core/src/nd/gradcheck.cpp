#include "hysop/nd/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hysop/util/random.hpp"

namespace hysop::nd {

namespace {

double evaluate(const ScalarFn& f, const std::vector<Tensor>& inputs) {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& t : inputs) vars.push_back(tape.leaf(t, false));
    return f(tape, vars).value().item();
}

}  // namespace

GradcheckResult gradcheck(const ScalarFn& f, const std::vector<Tensor>& inputs,
                          const GradcheckOptions& options) {
    std::vector<Tensor> analytic;
    {
        Tape tape;
        std::vector<Var> vars;
        for (const auto& t : inputs) vars.push_back(tape.leaf(t, true));
        tape.backward(f(tape, vars));
        for (const auto& v : vars) analytic.push_back(v.grad());
    }
    GradcheckResult res;
    auto rng = make_rng(options.seed, 0x9c4e);
    std::vector<Tensor> probe = inputs;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        std::vector<std::size_t> idx(inputs[k].size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        if (options.samples_per_input && options.samples_per_input < idx.size()) {
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(options.samples_per_input);
        }
        for (std::size_t i : idx) {
            const double x0 = inputs[k][i];
            probe[k][i] = x0 + options.step;
            const double up = evaluate(f, probe);
            probe[k][i] = x0 - options.step;
            const double down = evaluate(f, probe);
            probe[k][i] = x0;
            const double numeric = (up - down) / (2.0 * options.step);
            const double a = analytic[k][i];
            const double rel =
                std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), options.floor});
            ++res.checked;
            if (rel >= res.max_rel_error) {
                res.max_rel_error = rel;
                res.worst_input = k;
                res.worst_index = i;
                res.worst_analytic = a;
                res.worst_numeric = numeric;
            }
        }
    }
    return res;
}

}  // namespace hysop::nd
