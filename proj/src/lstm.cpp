#include "anomcast/lstm.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "anomcast/util.hpp"

namespace anomcast::lstm {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sign_subgradient(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;  // conventional choice at the kink
}

// out = W * v + b, W row-major [rows x cols].
void affine(const std::vector<double>& w, const std::vector<double>& b,
            const std::vector<double>& v, std::vector<double>& out) {
    const std::size_t rows = b.size();
    const std::size_t cols = v.size();
    out.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
}

struct StepTrace {
    std::array<double, 2> u{};  // raw features [return_input, sentiment_input]
    double sentiment_scalar = 0.0;
    std::vector<double> x, v;           // projected input, [x; h_prev]
    std::vector<double> i, f, o, g, gs;  // gate activations
    std::vector<double> c, s, a, h;      // a = tanh(c + s)
    double pred = 0.0;
    bool has_pred = false;
};

constexpr int kSteps = 7;      // 4 encode + 3 decode
constexpr int kEncode = 4;

struct ForwardTrace {
    std::array<StepTrace, kSteps> steps;
    std::array<double, 3> outputs{};
};

void run_step(const LstmModel& m, StepTrace& st, const std::vector<double>& h_prev,
              const std::vector<double>& c_prev, const std::vector<double>& s_prev) {
    const int hid = m.hidden_size;
    // Input projection.
    st.x.assign(std::size_t(m.input_size), 0.0);
    for (int r = 0; r < m.input_size; ++r) {
        st.x[std::size_t(r)] = m.b_in[std::size_t(r)] + m.w_in[std::size_t(r) * 2] * st.u[0] +
                               m.w_in[std::size_t(r) * 2 + 1] * st.u[1];
    }
    st.v = st.x;
    st.v.insert(st.v.end(), h_prev.begin(), h_prev.end());

    std::vector<double> z;
    affine(m.w_i, m.b_i, st.v, z);
    st.i.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) st.i[std::size_t(r)] = sigmoid(z[std::size_t(r)]);
    affine(m.w_f, m.b_f, st.v, z);
    st.f.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) st.f[std::size_t(r)] = sigmoid(z[std::size_t(r)]);
    affine(m.w_o, m.b_o, st.v, z);
    st.o.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) st.o[std::size_t(r)] = sigmoid(z[std::size_t(r)]);
    affine(m.w_g, m.b_g, st.v, z);
    st.g.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) st.g[std::size_t(r)] = std::tanh(z[std::size_t(r)]);
    affine(m.w_s, m.b_s, st.v, z);
    st.gs.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) st.gs[std::size_t(r)] = sigmoid(z[std::size_t(r)]);

    st.c.resize(std::size_t(hid));
    st.s.resize(std::size_t(hid));
    st.a.resize(std::size_t(hid));
    st.h.resize(std::size_t(hid));
    for (int r = 0; r < hid; ++r) {
        const auto ur = std::size_t(r);
        st.c[ur] = st.f[ur] * c_prev[ur] + st.i[ur] * st.g[ur];
        st.s[ur] = st.gs[ur] * s_prev[ur] + (1.0 - st.gs[ur]) * st.sentiment_scalar;
        st.a[ur] = std::tanh(st.c[ur] + st.s[ur]);
        st.h[ur] = st.o[ur] * st.a[ur];
    }
}

double head(const LstmModel& m, const std::vector<double>& h) {
    double acc = m.b_out;
    for (int r = 0; r < m.hidden_size; ++r) acc += m.w_out[std::size_t(r)] * h[std::size_t(r)];
    return acc;
}

ForwardTrace run_forward(const LstmModel& m, std::span<const double, 4> returns,
                         std::span<const double, 4> sentiments) {
    m.check_shapes();
    ForwardTrace tr;
    std::vector<double> h(std::size_t(m.hidden_size), 0.0);
    std::vector<double> c(std::size_t(m.hidden_size), 0.0);
    std::vector<double> s(std::size_t(m.hidden_size), 0.0);  // sentiment cell starts at 0
    double fed_back = 0.0;
    for (int t = 0; t < kSteps; ++t) {
        StepTrace& st = tr.steps[std::size_t(t)];
        if (t < kEncode) {
            st.u = {returns[std::size_t(t)], sentiments[std::size_t(t)]};
            st.sentiment_scalar = sentiments[std::size_t(t)];
        } else {
            st.u = {fed_back, 0.0};
            st.sentiment_scalar = 0.0;
        }
        run_step(m, st, h, c, s);
        h = st.h;
        c = st.c;
        s = st.s;
        if (t >= kEncode - 1) {
            st.pred = head(m, st.h);
            st.has_pred = true;
            fed_back = st.pred;
            if (t >= kEncode) tr.outputs[std::size_t(t - kEncode)] = st.pred;
        }
    }
    return tr;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ValidationError("betas must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (epochs < 0) throw ValidationError("epochs must be non-negative");
}

LstmModel LstmModel::zeros(int input_size, int hidden_size) {
    if (input_size < 1 || hidden_size < 1) {
        throw ValidationError("model sizes must be positive");
    }
    LstmModel m;
    m.input_size = input_size;
    m.hidden_size = hidden_size;
    const std::size_t in = std::size_t(input_size);
    const std::size_t hid = std::size_t(hidden_size);
    const std::size_t gate_cols = in + hid;
    m.w_in.assign(in * 2, 0.0);
    m.b_in.assign(in, 0.0);
    for (auto* w : {&m.w_i, &m.w_f, &m.w_o, &m.w_g, &m.w_s}) w->assign(hid * gate_cols, 0.0);
    for (auto* b : {&m.b_i, &m.b_f, &m.b_o, &m.b_g, &m.b_s}) b->assign(hid, 0.0);
    m.w_out.assign(hid, 0.0);
    m.b_out = 0.0;
    return m;
}

void LstmModel::check_shapes() const {
    const std::size_t in = std::size_t(input_size);
    const std::size_t hid = std::size_t(hidden_size);
    const std::size_t gate_cols = in + hid;
    const bool ok = input_size >= 1 && hidden_size >= 1 && w_in.size() == in * 2 &&
                    b_in.size() == in && w_i.size() == hid * gate_cols && b_i.size() == hid &&
                    w_f.size() == hid * gate_cols && b_f.size() == hid &&
                    w_o.size() == hid * gate_cols && b_o.size() == hid &&
                    w_g.size() == hid * gate_cols && b_g.size() == hid &&
                    w_s.size() == hid * gate_cols && b_s.size() == hid && w_out.size() == hid;
    if (!ok) throw ValidationError("LSTM tensor shapes are inconsistent with the model sizes");
}

int LstmModel::parameter_count() const {
    int count = 0;
    for (const double* p : parameter_refs(*this)) {
        (void)p;
        ++count;
    }
    return count;
}

LstmModel init_model(std::uint64_t seed, int input_size, int hidden_size) {
    LstmModel m = LstmModel::zeros(input_size, hidden_size);
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(double(hidden_size));
    for (auto* w : {&m.w_in, &m.w_i, &m.w_f, &m.w_o, &m.w_g, &m.w_s, &m.w_out}) {
        for (double& x : *w) x = rng.uniform(-bound, bound);
    }
    return m;
}

std::vector<double*> parameter_refs(LstmModel& model) {
    std::vector<double*> refs;
    refs.reserve(std::size_t(model.hidden_size) * (std::size_t(model.input_size) +
                                                   std::size_t(model.hidden_size) + 2) *
                     5 +
                 std::size_t(model.input_size) * 3 + std::size_t(model.hidden_size) + 1);
    for (auto* tensor : {&model.w_in, &model.b_in, &model.w_i, &model.b_i, &model.w_f, &model.b_f,
                         &model.w_o, &model.b_o, &model.w_g, &model.b_g, &model.w_s, &model.b_s,
                         &model.w_out}) {
        for (double& x : *tensor) refs.push_back(&x);
    }
    refs.push_back(&model.b_out);
    return refs;
}

std::vector<const double*> parameter_refs(const LstmModel& model) {
    const auto refs = parameter_refs(const_cast<LstmModel&>(model));
    return std::vector<const double*>(refs.begin(), refs.end());
}

CellState CellState::zeros(int hidden_size) {
    CellState st;
    st.h.assign(std::size_t(hidden_size), 0.0);
    st.c.assign(std::size_t(hidden_size), 0.0);
    st.s.assign(std::size_t(hidden_size), 0.0);
    return st;
}

CellState cell_step(const LstmModel& model, const std::vector<double>& input_vec,
                    const CellState& prev, double sentiment_scalar) {
    model.check_shapes();
    const std::size_t hid = std::size_t(model.hidden_size);
    if (input_vec.size() != std::size_t(model.input_size) || prev.h.size() != hid ||
        prev.c.size() != hid || prev.s.size() != hid) {
        throw ValidationError("cell_step input shapes do not match the model");
    }
    std::vector<double> v = input_vec;
    v.insert(v.end(), prev.h.begin(), prev.h.end());

    std::vector<double> zi, zf, zo, zg, zs;
    affine(model.w_i, model.b_i, v, zi);
    affine(model.w_f, model.b_f, v, zf);
    affine(model.w_o, model.b_o, v, zo);
    affine(model.w_g, model.b_g, v, zg);
    affine(model.w_s, model.b_s, v, zs);

    CellState next = CellState::zeros(model.hidden_size);
    for (std::size_t r = 0; r < hid; ++r) {
        const double i = sigmoid(zi[r]);
        const double f = sigmoid(zf[r]);
        const double o = sigmoid(zo[r]);
        const double g = std::tanh(zg[r]);
        const double gs = sigmoid(zs[r]);
        next.c[r] = f * prev.c[r] + i * g;
        next.s[r] = gs * prev.s[r] + (1.0 - gs) * sentiment_scalar;
        next.h[r] = o * std::tanh(next.c[r] + next.s[r]);
    }
    return next;
}

std::array<double, 3> forward(const LstmModel& model, std::span<const double, 4> returns,
                              std::span<const double, 4> sentiments) {
    return run_forward(model, returns, sentiments).outputs;
}

std::array<double, 3> forward(const LstmModel& model, const AnomalyWindow& window) {
    const std::span<const double, 4> r(window.returns.data(), 4);
    const std::span<const double, 4> s(window.sentiments.data(), 4);
    return forward(model, r, s);
}

double l1_loss(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) {
        throw ValidationError("l1_loss length mismatch");
    }
    if (pred.empty()) throw ValidationError("l1_loss of empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - actual[i]);
    return acc / double(pred.size());
}

LstmModel backward(const LstmModel& model, std::span<const double, 4> returns,
                   std::span<const double, 4> sentiments, std::span<const double, 3> actual) {
    const ForwardTrace tr = run_forward(model, returns, sentiments);
    const int hid = model.hidden_size;
    const int in = model.input_size;
    const std::size_t uhid = std::size_t(hid);
    const std::size_t gate_cols = std::size_t(in + hid);

    LstmModel grad = LstmModel::zeros(in, hid);

    // dL/dpred per step; decode steps feed the next step's input, so the
    // entry for step t-1 is completed while processing step t.
    std::array<double, kSteps> dpred{};
    for (int t = kEncode; t < kSteps; ++t) {
        const double diff =
            tr.steps[std::size_t(t)].pred - actual[std::size_t(t - kEncode)];
        dpred[std::size_t(t)] = sign_subgradient(diff) / 3.0;
    }

    std::vector<double> dh(uhid, 0.0), dc(uhid, 0.0), ds(uhid, 0.0);
    std::vector<double> dh_prev(uhid), dc_prev(uhid), ds_prev(uhid);
    std::vector<double> dv(gate_cols);
    const std::vector<double> zero_state(uhid, 0.0);

    for (int t = kSteps - 1; t >= 0; --t) {
        const StepTrace& st = tr.steps[std::size_t(t)];

        if (st.has_pred) {
            const double gp = dpred[std::size_t(t)];
            if (gp != 0.0) {
                for (int r = 0; r < hid; ++r) {
                    dh[std::size_t(r)] += model.w_out[std::size_t(r)] * gp;
                    grad.w_out[std::size_t(r)] += gp * st.h[std::size_t(r)];
                }
                grad.b_out += gp;
            }
        }

        const std::vector<double>& c_prev = t > 0 ? tr.steps[std::size_t(t - 1)].c : zero_state;
        const std::vector<double>& s_prev = t > 0 ? tr.steps[std::size_t(t - 1)].s : zero_state;

        std::fill(dv.begin(), dv.end(), 0.0);
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);

        for (int r = 0; r < hid; ++r) {
            const std::size_t ur = std::size_t(r);
            const double go = dh[ur] * st.a[ur];
            const double ga = dh[ur] * st.o[ur];
            const double gcs = ga * (1.0 - st.a[ur] * st.a[ur]);
            const double gc_total = dc[ur] + gcs;
            const double gs_total = ds[ur] + gcs;

            const double gf = gc_total * c_prev[ur];
            dc_prev[ur] = gc_total * st.f[ur];
            const double gi = gc_total * st.g[ur];
            const double gg = gc_total * st.i[ur];

            const double ggs = gs_total * (s_prev[ur] - st.sentiment_scalar);
            ds_prev[ur] = gs_total * st.gs[ur];

            const double pzi = gi * st.i[ur] * (1.0 - st.i[ur]);
            const double pzf = gf * st.f[ur] * (1.0 - st.f[ur]);
            const double pzo = go * st.o[ur] * (1.0 - st.o[ur]);
            const double pzg = gg * (1.0 - st.g[ur] * st.g[ur]);
            const double pzs = ggs * st.gs[ur] * (1.0 - st.gs[ur]);

            const std::size_t row = ur * gate_cols;
            for (std::size_t c2 = 0; c2 < gate_cols; ++c2) {
                const double vc = st.v[c2];
                grad.w_i[row + c2] += pzi * vc;
                grad.w_f[row + c2] += pzf * vc;
                grad.w_o[row + c2] += pzo * vc;
                grad.w_g[row + c2] += pzg * vc;
                grad.w_s[row + c2] += pzs * vc;
                dv[c2] += model.w_i[row + c2] * pzi + model.w_f[row + c2] * pzf +
                          model.w_o[row + c2] * pzo + model.w_g[row + c2] * pzg +
                          model.w_s[row + c2] * pzs;
            }
            grad.b_i[ur] += pzi;
            grad.b_f[ur] += pzf;
            grad.b_o[ur] += pzo;
            grad.b_g[ur] += pzg;
            grad.b_s[ur] += pzs;
        }

        // Split dv into the projected-input part and the recurrent part.
        std::array<double, 2> du{};
        for (int r = 0; r < in; ++r) {
            const std::size_t ur = std::size_t(r);
            const double dx = dv[ur];
            grad.w_in[ur * 2] += dx * st.u[0];
            grad.w_in[ur * 2 + 1] += dx * st.u[1];
            grad.b_in[ur] += dx;
            du[0] += model.w_in[ur * 2] * dx;
            du[1] += model.w_in[ur * 2 + 1] * dx;
        }
        for (int r = 0; r < hid; ++r) {
            dh_prev[std::size_t(r)] += dv[std::size_t(in) + std::size_t(r)];
        }

        if (t >= kEncode) {
            // The fed-back return input routes gradient to the previous
            // step's prediction.
            dpred[std::size_t(t - 1)] += du[0];
        }

        dh = dh_prev;
        dc = dc_prev;
        ds = ds_prev;
    }
    return grad;
}

AdamState AdamState::zeros(int parameter_count) {
    AdamState st;
    st.m.assign(std::size_t(parameter_count), 0.0);
    st.v.assign(std::size_t(parameter_count), 0.0);
    st.v_max.assign(std::size_t(parameter_count), 0.0);
    st.step = 0;
    return st;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& config) {
    config.validate();
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size() || params.size() != state.v_max.size()) {
        throw ValidationError("adam_step size mismatch");
    }
    for (double g : grads) {
        if (!std::isfinite(g)) {
            throw Error("non-finite gradient in adam_step");
        }
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, double(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i];
        if (config.weight_decay != 0.0) g += config.weight_decay * params[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        double v_hat = state.v[i] / bc2;
        if (config.amsgrad) {
            state.v_max[i] = std::max(state.v_max[i], v_hat);
            v_hat = state.v_max[i];
        }
        params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
}

TrainResult train(LstmModel& model, const std::vector<AnomalyWindow>& windows,
                  const TrainConfig& config) {
    config.validate();
    model.check_shapes();
    if (windows.empty()) {
        throw InsufficientDataError("training needs at least one window");
    }
    TrainResult result;
    result.epoch_loss.reserve(std::size_t(config.epochs));

    auto refs = parameter_refs(model);
    const int n_params = int(refs.size());
    AdamState state = AdamState::zeros(n_params);
    std::vector<double> flat_params(refs.size()), flat_grads(refs.size());
    Rng shuffle_rng(mix_seed(config.seed, "epoch-shuffle"));

    std::vector<std::size_t> order(windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (const std::size_t wi : order) {
            const AnomalyWindow& w = windows[wi];
            const std::span<const double, 4> r(w.returns.data(), 4);
            const std::span<const double, 4> s(w.sentiments.data(), 4);
            const std::span<const double, 3> target(w.returns.data() + 4, 3);

            const auto outputs = forward(model, r, s);
            const double loss = l1_loss(outputs, target);
            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite training loss at epoch " +
                                        std::to_string(epoch),
                                    std::move(result.epoch_loss));
            }
            loss_sum += loss;

            const LstmModel grads = backward(model, r, s, target);
            const auto grad_refs = parameter_refs(grads);
            for (std::size_t i = 0; i < refs.size(); ++i) {
                flat_params[i] = *refs[i];
                flat_grads[i] = *grad_refs[i];
            }
            try {
                adam_step(flat_params, flat_grads, state, config);
            } catch (const Error& e) {
                throw TrainingError(std::string(e.what()) + " at epoch " +
                                        std::to_string(epoch),
                                    std::move(result.epoch_loss));
            }
            for (std::size_t i = 0; i < refs.size(); ++i) *refs[i] = flat_params[i];
        }
        result.epoch_loss.push_back(loss_sum / double(windows.size()));
    }
    return result;
}

namespace {

nlohmann::json tensor_json(const std::vector<double>& data, std::vector<int> shape) {
    return nlohmann::json{{"shape", shape}, {"data", data}};
}

std::vector<double> tensor_from_json(const nlohmann::json& j, std::vector<int> expect_shape,
                                     const std::string& name) {
    const auto shape = j.at("shape").get<std::vector<int>>();
    if (shape != expect_shape) {
        throw ValidationError("tensor '" + name + "' has an unexpected shape");
    }
    std::size_t n = 1;
    for (int s : shape) n *= std::size_t(s);
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != n) {
        throw ValidationError("tensor '" + name + "' data does not match its shape");
    }
    return data;
}

}  // namespace

nlohmann::json to_json(const LstmModel& model, const TrainConfig& config) {
    model.check_shapes();
    const int in = model.input_size;
    const int hid = model.hidden_size;
    const int gate_cols = in + hid;
    nlohmann::json tensors;
    tensors["w_in"] = tensor_json(model.w_in, {in, 2});
    tensors["b_in"] = tensor_json(model.b_in, {in});
    tensors["w_i"] = tensor_json(model.w_i, {hid, gate_cols});
    tensors["b_i"] = tensor_json(model.b_i, {hid});
    tensors["w_f"] = tensor_json(model.w_f, {hid, gate_cols});
    tensors["b_f"] = tensor_json(model.b_f, {hid});
    tensors["w_o"] = tensor_json(model.w_o, {hid, gate_cols});
    tensors["b_o"] = tensor_json(model.b_o, {hid});
    tensors["w_g"] = tensor_json(model.w_g, {hid, gate_cols});
    tensors["b_g"] = tensor_json(model.b_g, {hid});
    tensors["w_s"] = tensor_json(model.w_s, {hid, gate_cols});
    tensors["b_s"] = tensor_json(model.b_s, {hid});
    tensors["w_out"] = tensor_json(model.w_out, {hid});
    tensors["b_out"] = model.b_out;
    return nlohmann::json{{"input_size", in},
                          {"hidden_size", hid},
                          {"tensors", tensors},
                          {"config",
                           {{"learning_rate", config.learning_rate},
                            {"beta1", config.beta1},
                            {"beta2", config.beta2},
                            {"epsilon", config.epsilon},
                            {"weight_decay", config.weight_decay},
                            {"amsgrad", config.amsgrad},
                            {"epochs", config.epochs},
                            {"seed", config.seed}}}};
}

std::pair<LstmModel, TrainConfig> lstm_from_json(const nlohmann::json& j) {
    const int in = j.at("input_size").get<int>();
    const int hid = j.at("hidden_size").get<int>();
    LstmModel m = LstmModel::zeros(in, hid);
    const int gate_cols = in + hid;
    const auto& t = j.at("tensors");
    m.w_in = tensor_from_json(t.at("w_in"), {in, 2}, "w_in");
    m.b_in = tensor_from_json(t.at("b_in"), {in}, "b_in");
    m.w_i = tensor_from_json(t.at("w_i"), {hid, gate_cols}, "w_i");
    m.b_i = tensor_from_json(t.at("b_i"), {hid}, "b_i");
    m.w_f = tensor_from_json(t.at("w_f"), {hid, gate_cols}, "w_f");
    m.b_f = tensor_from_json(t.at("b_f"), {hid}, "b_f");
    m.w_o = tensor_from_json(t.at("w_o"), {hid, gate_cols}, "w_o");
    m.b_o = tensor_from_json(t.at("b_o"), {hid}, "b_o");
    m.w_g = tensor_from_json(t.at("w_g"), {hid, gate_cols}, "w_g");
    m.b_g = tensor_from_json(t.at("b_g"), {hid}, "b_g");
    m.w_s = tensor_from_json(t.at("w_s"), {hid, gate_cols}, "w_s");
    m.b_s = tensor_from_json(t.at("b_s"), {hid}, "b_s");
    m.w_out = tensor_from_json(t.at("w_out"), {hid}, "w_out");
    m.b_out = t.at("b_out").get<double>();
    m.check_shapes();

    TrainConfig cfg;
    const auto& c = j.at("config");
    cfg.learning_rate = c.at("learning_rate").get<double>();
    cfg.beta1 = c.at("beta1").get<double>();
    cfg.beta2 = c.at("beta2").get<double>();
    cfg.epsilon = c.at("epsilon").get<double>();
    cfg.weight_decay = c.at("weight_decay").get<double>();
    cfg.amsgrad = c.at("amsgrad").get<bool>();
    cfg.epochs = c.at("epochs").get<int>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    return {std::move(m), cfg};
}

}  // namespace anomcast::lstm
