#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anomcast/errors.hpp"
#include "anomcast/series.hpp"

#include <nlohmann/json_fwd.hpp>

namespace anomcast::lstm {

/// Adam hyperparameters and the training schedule.
struct TrainConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;  // kept at zero
    bool amsgrad = false;       // kept off
    int epochs = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sentiment-injected LSTM. Each step consumes the 2-feature vector
/// [return, sentiment] projected to input_size, runs the four standard gates
/// plus a parallel sentiment gate
///   g_s = sigmoid(W_s [x; h_prev] + b_s)
///   s   = g_s (.) s_prev + (1 - g_s) * sentiment_scalar
/// and couples the sentiment cell into the output: h = o (.) tanh(c + s).
/// Matrices are row-major with the documented shapes.
struct LstmModel {
    int input_size = 8;
    int hidden_size = 8;

    std::vector<double> w_in;  // [input_size x 2]
    std::vector<double> b_in;  // [input_size]
    std::vector<double> w_i, b_i;  // gate weights: [hidden x (input+hidden)], [hidden]
    std::vector<double> w_f, b_f;
    std::vector<double> w_o, b_o;
    std::vector<double> w_g, b_g;  // candidate
    std::vector<double> w_s, b_s;  // sentiment gate
    std::vector<double> w_out;     // [hidden]
    double b_out = 0.0;

    /// Zero-valued tensors with consistent shapes.
    static LstmModel zeros(int input_size = 8, int hidden_size = 8);

    void check_shapes() const;  // throws ValidationError on any mismatch
    int parameter_count() const;
};

/// Fan-in-scaled uniform init in [-1/sqrt(hidden), 1/sqrt(hidden)] for all
/// weight matrices; biases start at zero.
LstmModel init_model(std::uint64_t seed, int input_size = 8, int hidden_size = 8);

/// Pointers to every scalar parameter in a fixed order; the same order is
/// used for gradients and Adam state.
std::vector<double*> parameter_refs(LstmModel& model);
std::vector<const double*> parameter_refs(const LstmModel& model);

struct CellState {
    std::vector<double> h, c, s;

    static CellState zeros(int hidden_size);
};

/// One cell update; input_vec is the already-projected input.
CellState cell_step(const LstmModel& model, const std::vector<double>& input_vec,
                    const CellState& prev, double sentiment_scalar);

/// Encodes the 4 observed (return, sentiment) days, then free-runs 3 decode
/// steps whose return input is the previous step's predicted return (the
/// first decode step feeds on the prediction read off the last encoder
/// state) and whose sentiment input is 0. The output head maps each decode
/// hidden state to one predicted return.
std::array<double, 3> forward(const LstmModel& model, std::span<const double, 4> returns,
                              std::span<const double, 4> sentiments);
std::array<double, 3> forward(const LstmModel& model, const AnomalyWindow& window);

/// Mean absolute difference. Lengths must match.
double l1_loss(std::span<const double> pred, std::span<const double> actual);

/// Exact gradients of l1_loss(forward(...), actual) by backpropagation
/// through time, including the paths through fed-back predictions. The
/// subgradient at |x| = 0 kinks is 0. Returns a gradient-valued model.
LstmModel backward(const LstmModel& model, std::span<const double, 4> returns,
                   std::span<const double, 4> sentiments, std::span<const double, 3> actual);

struct AdamState {
    std::vector<double> m;      // first moments, zero-initialized
    std::vector<double> v;      // second moments
    std::vector<double> v_max;  // running max of corrected v, used by amsgrad
    long step = 0;

    static AdamState zeros(int parameter_count);
};

/// Standard bias-corrected Adam update on flat parameter/gradient vectors.
/// Throws on non-finite gradients.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               const TrainConfig& config);

/// Training failed; carries the per-epoch losses accumulated so far.
struct TrainingError : Error {
    TrainingError(const std::string& message, std::vector<double> trace)
        : Error(message), loss_trace(std::move(trace)) {}
    std::vector<double> loss_trace;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean window loss per epoch
};

/// Per-sample training: every epoch visits the windows in a seed-determined
/// shuffled order and runs forward / l1_loss / backward / adam_step on each.
TrainResult train(LstmModel& model, const std::vector<AnomalyWindow>& windows,
                  const TrainConfig& config);

/// JSON tensor dump with shape headers plus the training config; doubles
/// round-trip exactly.
nlohmann::json to_json(const LstmModel& model, const TrainConfig& config);
std::pair<LstmModel, TrainConfig> lstm_from_json(const nlohmann::json& j);

}  // namespace anomcast::lstm
