#include "unfollow/mlp.h"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "unfollow/error.h"
#include "unfollow/rng.h"
#include "unfollow/serialization.h"

namespace unfollow {
namespace {

constexpr const char* kFormat = "unfollow.mlp";
constexpr int kVersion = 1;

double activate(Activation a, double z) {
    return a == Activation::Relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation output h.
double activate_grad(Activation a, double z, double h) {
    return a == Activation::Relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Binary cross-entropy of sigmoid(z) against y, computed from the logit.
double bce_from_logit(double z, int y) {
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - (y ? z : 0.0);
}

struct Activations {
    std::vector<std::vector<double>> pre;   // per layer pre-activation
    std::vector<std::vector<double>> post;  // post[0] = input, post[l+1] = layer l output
};

void forward(const MlpModel& m, const std::vector<double>& input, Activations& acts) {
    const std::size_t n_layers = m.layers.size();
    acts.pre.resize(n_layers);
    acts.post.resize(n_layers + 1);
    acts.post[0] = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const auto& layer = m.layers[l];
        auto& z = acts.pre[l];
        auto& h = acts.post[l + 1];
        z.assign(layer.outputs, 0.0);
        h.assign(layer.outputs, 0.0);
        const auto& x = acts.post[l];
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double* w = &layer.weights[o * layer.inputs];
            double s = layer.bias[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) s += w[i] * x[i];
            z[o] = s;
            // the output unit stays linear here; the sigmoid lives in the loss
            h[o] = l + 1 == n_layers ? s : activate(m.activation, s);
        }
    }
}

// Adds the gradient of the row's loss into `grads` (laid out like flatten_parameters).
double backward(const MlpModel& m, const Activations& acts, int y, std::vector<std::vector<double>>& grads) {
    const std::size_t n_layers = m.layers.size();
    const double logit = acts.pre.back()[0];
    const double loss = bce_from_logit(logit, y);
    std::vector<double> delta = {sigmoid(logit) - static_cast<double>(y)};
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto& layer = m.layers[l];
        const auto& x = acts.post[l];
        auto& g = grads[l];
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            double* gw = &g[o * layer.inputs];
            for (std::size_t i = 0; i < layer.inputs; ++i) gw[i] += delta[o] * x[i];
            g[layer.outputs * layer.inputs + o] += delta[o];
        }
        if (l == 0) break;
        std::vector<double> prev(layer.inputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double* w = &layer.weights[o * layer.inputs];
            for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += w[i] * delta[o];
        }
        for (std::size_t i = 0; i < layer.inputs; ++i) {
            prev[i] *= activate_grad(m.activation, acts.pre[l - 1][i], acts.post[l][i]);
        }
        delta = std::move(prev);
    }
    return loss;
}

std::vector<std::vector<double>> zero_grads(const MlpModel& m) {
    std::vector<std::vector<double>> g;
    g.reserve(m.layers.size());
    for (const auto& layer : m.layers) g.emplace_back(layer.weights.size() + layer.bias.size(), 0.0);
    return g;
}

void check_labels(const std::vector<int>& y) {
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (int v : y) {
        if (v == 1) {
            ++pos;
        } else if (v == 0) {
            ++neg;
        } else {
            throw InputError("train_mlp: labels must be 0 or 1");
        }
    }
    if (pos < 2 || neg < 2) throw InputError("train_mlp: need at least 2 examples of each class");
}

const char* activation_name(Activation a) { return a == Activation::Relu ? "relu" : "tanh"; }

}  // namespace

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

MlpModel init_mlp(std::size_t inputs, const MlpConfig& config) {
    if (inputs == 0) throw InputError("init_mlp: no input columns");
    MlpModel m;
    m.activation = config.activation;
    m.seed = config.seed;
    Rng rng(config.seed);
    std::vector<std::size_t> sizes = {inputs};
    sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
    sizes.push_back(1);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        DenseLayer layer;
        layer.inputs = sizes[l];
        layer.outputs = sizes[l + 1];
        if (layer.outputs == 0) throw InputError("init_mlp: zero-width hidden layer");
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        layer.weights.resize(layer.inputs * layer.outputs);
        for (auto& w : layer.weights) w = rng.uniform(-limit, limit);
        layer.bias.assign(layer.outputs, 0.0);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

MlpModel train_mlp(const Matrix& x, const std::vector<int>& y, const MlpConfig& config) {
    if (x.size() != y.size()) throw InputError("train_mlp: row and label counts differ");
    check_labels(y);
    if (config.batch_size == 0) throw InputError("train_mlp: batch size must be positive");
    const std::size_t width = x.front().size();
    for (const auto& row : x) {
        if (row.size() != width) throw InputError("train_mlp: ragged matrix");
    }
    MlpModel m = init_mlp(width, config);
    Rng order_rng(derive_seed(config.seed, 1));
    std::vector<std::size_t> order(x.size());
    Activations acts;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        order_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            auto grads = zero_grads(m);
            for (std::size_t b = start; b < end; ++b) {
                forward(m, x[order[b]], acts);
                backward(m, acts, y[order[b]], grads);
            }
            const double step = config.learning_rate / static_cast<double>(end - start);
            for (std::size_t l = 0; l < m.layers.size(); ++l) {
                auto& layer = m.layers[l];
                const auto& g = grads[l];
                for (std::size_t i = 0; i < layer.weights.size(); ++i) layer.weights[i] -= step * g[i];
                for (std::size_t o = 0; o < layer.outputs; ++o) layer.bias[o] -= step * g[layer.weights.size() + o];
            }
        }
        for (const auto& layer : m.layers) {
            for (double w : layer.weights) {
                if (!std::isfinite(w)) throw std::runtime_error("train_mlp: weights diverged");
            }
        }
    }
    return m;
}

MlpModel fit_classifier(const Matrix& raw_x, const std::vector<int>& y, const MlpConfig& config,
                        std::vector<std::string> columns) {
    MinMaxScaler scaler = minmax_scale_fit(raw_x);
    MlpModel m = train_mlp(minmax_scale_apply(scaler, raw_x), y, config);
    m.scaler = std::move(scaler);
    m.columns = std::move(columns);
    return m;
}

double forward_logit(const MlpModel& model, const std::vector<double>& scaled_row) {
    Activations acts;
    forward(model, scaled_row, acts);
    return acts.pre.back()[0];
}

std::vector<double> predict_proba(const MlpModel& model, const Matrix& x) {
    std::vector<double> out;
    out.reserve(x.size());
    Activations acts;
    for (const auto& row : x) {
        if (row.size() != model.input_size()) throw SchemaError("predict_proba: row width does not match model");
        if (model.scaler.fitted()) {
            forward(model, minmax_scale_row(model.scaler, row), acts);
        } else {
            forward(model, row, acts);
        }
        out.push_back(sigmoid(acts.pre.back()[0]));
    }
    return out;
}

std::vector<int> predict(const MlpModel& model, const Matrix& x, double threshold) {
    std::vector<int> labels;
    for (double p : predict_proba(model, x)) labels.push_back(p >= threshold ? 1 : 0);
    return labels;
}

std::vector<double> flatten_parameters(const MlpModel& model) {
    std::vector<double> p;
    p.reserve(model.parameter_count());
    for (const auto& l : model.layers) {
        p.insert(p.end(), l.weights.begin(), l.weights.end());
        p.insert(p.end(), l.bias.begin(), l.bias.end());
    }
    return p;
}

void assign_parameters(MlpModel& model, const std::vector<double>& params) {
    if (params.size() != model.parameter_count()) throw InputError("assign_parameters: wrong parameter count");
    std::size_t k = 0;
    for (auto& l : model.layers) {
        for (auto& w : l.weights) w = params[k++];
        for (auto& b : l.bias) b = params[k++];
    }
}

LossGradient loss_and_gradient(const MlpModel& model, const Matrix& x, const std::vector<int>& y) {
    LossGradient out;
    auto grads = zero_grads(model);
    Activations acts;
    for (std::size_t r = 0; r < x.size(); ++r) {
        forward(model, x[r], acts);
        out.loss += backward(model, acts, y[r], grads);
    }
    const double n = static_cast<double>(x.size());
    out.loss /= n;
    for (const auto& g : grads) {
        for (double v : g) out.gradient.push_back(v / n);
    }
    return out;
}

double mean_loss(const MlpModel& model, const Matrix& x, const std::vector<int>& y) {
    double loss = 0.0;
    Activations acts;
    for (std::size_t r = 0; r < x.size(); ++r) {
        forward(model, x[r], acts);
        loss += bce_from_logit(acts.pre.back()[0], y[r]);
    }
    return loss / static_cast<double>(x.size());
}

nlohmann::json mlp_to_json(const MlpModel& m) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : m.layers) {
        layers.push_back({{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"bias", l.bias}});
    }
    return {{"format", kFormat},
            {"version", kVersion},
            {"columns", m.columns},
            {"scaler", {{"mins", m.scaler.mins}, {"maxs", m.scaler.maxs}}},
            {"activation", activation_name(m.activation)},
            {"seed", m.seed},
            {"layers", std::move(layers)}};
}

MlpModel mlp_from_json(const nlohmann::json& j) {
    check_container(j, kFormat, kVersion);
    try {
        MlpModel m;
        m.columns = j.at("columns").get<std::vector<std::string>>();
        m.scaler.mins = j.at("scaler").at("mins").get<std::vector<double>>();
        m.scaler.maxs = j.at("scaler").at("maxs").get<std::vector<double>>();
        const auto act = j.at("activation").get<std::string>();
        if (act != "relu" && act != "tanh") throw SchemaError("mlp: unknown activation " + act);
        m.activation = act == "relu" ? Activation::Relu : Activation::Tanh;
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& lj : j.at("layers")) {
            DenseLayer l;
            l.inputs = lj.at("inputs").get<std::size_t>();
            l.outputs = lj.at("outputs").get<std::size_t>();
            l.weights = lj.at("weights").get<std::vector<double>>();
            l.bias = lj.at("bias").get<std::vector<double>>();
            if (l.weights.size() != l.inputs * l.outputs || l.bias.size() != l.outputs) {
                throw SchemaError("mlp: layer arrays have the wrong size");
            }
            m.layers.push_back(std::move(l));
        }
        if (m.layers.empty() || m.layers.back().outputs != 1) throw SchemaError("mlp: needs a single output unit");
        if (m.scaler.mins.size() != m.scaler.maxs.size() ||
            (m.scaler.fitted() && m.scaler.mins.size() != m.input_size())) {
            throw SchemaError("mlp: scaler width does not match the input layer");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("mlp: ") + e.what());
    }
}

void save_mlp(const MlpModel& model, std::ostream& out) { out << mlp_to_json(model).dump() << '\n'; }

MlpModel load_mlp(std::istream& in) { return mlp_from_json(read_json(in, "mlp")); }

}  // namespace unfollow
