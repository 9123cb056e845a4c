#include "sentinel/lstm.hpp"

#include "sentinel/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace sentinel::lstm {

namespace {

constexpr std::size_t kGateI = 0;
constexpr std::size_t kGateF = 1;
constexpr std::size_t kGateG = 2;
constexpr std::size_t kGateO = 3;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Gate activations and states for every step of one forward pass.
struct Trace {
    // [step][unit]
    std::vector<std::array<std::vector<double>, 4>> gates;
    std::vector<std::vector<double>> cell;
    std::vector<std::vector<double>> hidden;
    double output = 0.0;
};

Trace run_forward(const Model& m, std::span<const double> window) {
    const std::size_t h = m.hidden_size;
    const std::size_t steps = window.size();
    Trace tr;
    tr.gates.resize(steps);
    tr.cell.resize(steps);
    tr.hidden.resize(steps);

    std::vector<double> h_prev(h, 0.0);
    std::vector<double> c_prev(h, 0.0);

    for (std::size_t t = 0; t < steps; ++t) {
        const double x = window[t];
        for (auto& g : tr.gates[t]) g.assign(h, 0.0);
        tr.cell[t].assign(h, 0.0);
        tr.hidden[t].assign(h, 0.0);

        for (std::size_t gate = 0; gate < 4; ++gate) {
            const double* wi = m.theta.data() + m.w_in(gate);
            const double* wr = m.theta.data() + m.w_rec(gate);
            const double* b = m.theta.data() + m.bias(gate);
            for (std::size_t j = 0; j < h; ++j) {
                double a = wi[j] * x + b[j];
                const double* row = wr + j * h;
                for (std::size_t k = 0; k < h; ++k) a += row[k] * h_prev[k];
                tr.gates[t][gate][j] = (gate == kGateG) ? std::tanh(a) : sigmoid(a);
            }
        }
        for (std::size_t j = 0; j < h; ++j) {
            const double c = tr.gates[t][kGateF][j] * c_prev[j] +
                             tr.gates[t][kGateI][j] * tr.gates[t][kGateG][j];
            tr.cell[t][j] = c;
            tr.hidden[t][j] = tr.gates[t][kGateO][j] * std::tanh(c);
        }
        h_prev = tr.hidden[t];
        c_prev = tr.cell[t];
    }

    double y = m.theta[m.b_out()];
    const double* wo = m.theta.data() + m.w_out();
    for (std::size_t j = 0; j < h; ++j) y += wo[j] * h_prev[j];
    tr.output = y;
    return tr;
}

void check_window(std::span<const double> window) {
    if (window.size() != kLookback)
        throw std::invalid_argument("forward: window must hold exactly " +
                                    std::to_string(kLookback) + " values");
    for (double v : window)
        if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input value");
}

} // namespace

std::size_t parameter_count(std::size_t hidden_size) {
    return 4 * hidden_size * hidden_size + 9 * hidden_size + 1;
}

Model init_model(std::uint64_t seed, std::size_t hidden_size) {
    if (hidden_size == 0) throw std::invalid_argument("init_model: hidden_size must be >= 1");
    Model m;
    m.hidden_size = hidden_size;
    m.theta.resize(parameter_count(hidden_size));
    Rng rng(seed);
    for (double& w : m.theta) w = rng.uniform(-0.08, 0.08);
    return m;
}

double forward(const Model& model, std::span<const double> window) {
    check_window(window);
    return run_forward(model, window).output;
}

double loss(const Model& model, std::span<const TrainingPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("loss: no training pairs");
    double acc = 0.0;
    for (const auto& p : pairs) {
        const double r = run_forward(model, p.window).output - p.target;
        acc += r * r;
    }
    return acc / static_cast<double>(pairs.size());
}

std::vector<double> gradient(const Model& model, const TrainingPair& pair) {
    check_window(pair.window);
    if (!std::isfinite(pair.target)) throw std::invalid_argument("gradient: non-finite target");

    const std::size_t h = model.hidden_size;
    const std::size_t steps = pair.window.size();
    const Trace tr = run_forward(model, pair.window);

    std::vector<double> grad(model.theta.size(), 0.0);
    const double dy = 2.0 * (tr.output - pair.target);

    grad[model.b_out()] = dy;
    std::vector<double> dh(h), dc(h, 0.0);
    {
        const double* wo = model.theta.data() + model.w_out();
        for (std::size_t j = 0; j < h; ++j) {
            grad[model.w_out() + j] = dy * tr.hidden[steps - 1][j];
            dh[j] = dy * wo[j];
        }
    }

    std::vector<double> da(4 * h);
    std::vector<double> dh_prev(h), dc_prev(h);
    for (std::size_t t = steps; t-- > 0;) {
        const auto& g = tr.gates[t];
        const std::vector<double>* c_prev = (t > 0) ? &tr.cell[t - 1] : nullptr;
        const std::vector<double>* h_prev = (t > 0) ? &tr.hidden[t - 1] : nullptr;

        for (std::size_t j = 0; j < h; ++j) {
            const double tc = std::tanh(tr.cell[t][j]);
            const double d_out = dh[j] * tc;
            const double dcell = dc[j] + dh[j] * g[kGateO][j] * (1.0 - tc * tc);
            const double cp = c_prev ? (*c_prev)[j] : 0.0;

            da[kGateI * h + j] = dcell * g[kGateG][j] * g[kGateI][j] * (1.0 - g[kGateI][j]);
            da[kGateF * h + j] = dcell * cp * g[kGateF][j] * (1.0 - g[kGateF][j]);
            da[kGateG * h + j] = dcell * g[kGateI][j] * (1.0 - g[kGateG][j] * g[kGateG][j]);
            da[kGateO * h + j] = d_out * g[kGateO][j] * (1.0 - g[kGateO][j]);
            dc_prev[j] = dcell * g[kGateF][j];
        }

        const double x = pair.window[t];
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        for (std::size_t gate = 0; gate < 4; ++gate) {
            const double* wr = model.theta.data() + model.w_rec(gate);
            for (std::size_t j = 0; j < h; ++j) {
                const double d = da[gate * h + j];
                grad[model.w_in(gate) + j] += d * x;
                grad[model.bias(gate) + j] += d;
                if (h_prev) {
                    double* grow = grad.data() + model.w_rec(gate) + j * h;
                    const double* row = wr + j * h;
                    for (std::size_t k = 0; k < h; ++k) {
                        grow[k] += d * (*h_prev)[k];
                        dh_prev[k] += d * row[k];
                    }
                } else {
                    const double* row = wr + j * h;
                    for (std::size_t k = 0; k < h; ++k) dh_prev[k] += d * row[k];
                }
            }
        }
        dh = dh_prev;
        dc = dc_prev;
    }
    return grad;
}

Model train(Model model, std::span<const TrainingPair> pairs, const TrainingConfig& cfg) {
    if (pairs.empty()) throw std::invalid_argument("train: no training pairs");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (cfg.max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");
    if (cfg.early_stop_patience < 1) throw std::invalid_argument("train: patience must be >= 1");
    for (const auto& p : pairs)
        if (!std::isfinite(p.target)) throw std::invalid_argument("train: non-finite target");

    const double n = static_cast<double>(pairs.size());
    Model best = model;
    double best_loss = loss(model, pairs);
    if (!std::isfinite(best_loss)) throw std::runtime_error("train: loss diverged");

    std::size_t stall = 0;
    std::vector<double> batch(model.theta.size());
    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::fill(batch.begin(), batch.end(), 0.0);
        for (const auto& p : pairs) {
            const std::vector<double> g = gradient(model, p);
            for (std::size_t i = 0; i < batch.size(); ++i) batch[i] += g[i];
        }
        for (std::size_t i = 0; i < model.theta.size(); ++i)
            model.theta[i] -= cfg.learning_rate * batch[i] / n;

        const double cur = loss(model, pairs);
        if (!std::isfinite(cur)) throw std::runtime_error("train: loss diverged");

        if (cur < best_loss - cfg.early_stop_min_delta) {
            stall = 0;
        } else if (++stall >= cfg.early_stop_patience) {
            if (cur < best_loss) {
                best_loss = cur;
                best = model;
            }
            break;
        }
        if (cur < best_loss) {
            best_loss = cur;
            best = model;
        }
    }
    return best;
}

std::vector<std::uint8_t> serialize(const Model& model) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 8 * model.theta.size());
    const auto hs = static_cast<std::uint32_t>(model.hidden_size);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(hs >> (8 * i)));
    for (double v : model.theta) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    return out;
}

Model deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw std::invalid_argument("deserialize: truncated snapshot");
    std::uint32_t hs = 0;
    for (int i = 0; i < 4; ++i) hs |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    const std::size_t count = parameter_count(hs);
    if (bytes.size() != 4 + 8 * count)
        throw std::invalid_argument("deserialize: size does not match hidden_size");
    Model m;
    m.hidden_size = hs;
    m.theta.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(bytes[4 + 8 * p + i]) << (8 * i);
        m.theta[p] = std::bit_cast<double>(bits);
    }
    return m;
}

} // namespace sentinel::lstm
