#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "anomcast/lstm.hpp"
#include "anomcast/util.hpp"
#include "test_util.hpp"

using namespace anomcast;
using namespace anomcast::lstm;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::array<double, 4> seeded4(std::uint64_t seed, double lo, double hi) {
    Rng rng(seed);
    std::array<double, 4> out{};
    for (double& v : out) v = rng.uniform(lo, hi);
    return out;
}

AnomalyWindow training_window() {
    return testutil::make_window("M", Date{2018, 2, 5},
                                 {0.01, -0.02, 0.015, 0.03, -0.01, 0.02, 0.005},
                                 {0.3, -0.2, 0.5, 0.9, 0.0, 0.1, -0.4});
}

/// Central finite differences against the analytic gradients; returns the
/// max relative error with the standard |a|+|f| denominator floored at 1e-6
/// (below that the finite-difference oracle's own noise dominates).
double max_gradient_error(LstmModel& model, const std::array<double, 4>& r,
                          const std::array<double, 4>& s, const std::array<double, 3>& target) {
    const std::span<const double, 4> rs(r), ss(s);
    const std::span<const double, 3> ts(target);
    const LstmModel grads = backward(model, rs, ss, ts);
    const auto refs = parameter_refs(model);
    const auto grefs = parameter_refs(grads);
    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const double orig = *refs[i];
        *refs[i] = orig + h;
        const double lp = l1_loss(forward(model, rs, ss), ts);
        *refs[i] = orig - h;
        const double lm = l1_loss(forward(model, rs, ss), ts);
        *refs[i] = orig;
        const double fd = (lp - lm) / (2.0 * h);
        const double an = *grefs[i];
        max_rel = std::max(max_rel,
                           std::abs(fd - an) / std::max(std::abs(fd) + std::abs(an), 1e-6));
    }
    return max_rel;
}

}  // namespace

TEST_CASE("cell_step zero fixed point") {
    const LstmModel m = LstmModel::zeros();
    const CellState prev = CellState::zeros(8);
    const auto next = cell_step(m, std::vector<double>(8, 0.0), prev, 0.0);
    for (int r = 0; r < 8; ++r) {
        CHECK(next.h[std::size_t(r)] == 0.0);
        CHECK(next.c[std::size_t(r)] == 0.0);
        CHECK(next.s[std::size_t(r)] == 0.0);  // 0.5*0 + 0.5*0
    }
}

TEST_CASE("cell_step with zero sentiment reduces to a plain LSTM cell") {
    // Two models differing only in the sentiment-gate weights produce the
    // same state when sentiment_scalar = 0 and s_prev = 0: the sentiment
    // cell stays exactly 0 whatever W_s says.
    LstmModel a = init_model(11);
    LstmModel b = a;
    Rng rng(12);
    for (double& w : b.w_s) w = rng.uniform(-0.5, 0.5);
    for (double& w : b.b_s) w = rng.uniform(-0.5, 0.5);

    std::vector<double> input(8);
    for (double& v : input) v = rng.uniform(-0.3, 0.3);
    CellState prev = CellState::zeros(8);
    for (int r = 0; r < 8; ++r) {
        prev.h[std::size_t(r)] = rng.uniform(-0.2, 0.2);
        prev.c[std::size_t(r)] = rng.uniform(-0.2, 0.2);
    }

    const auto na = cell_step(a, input, prev, 0.0);
    const auto nb = cell_step(b, input, prev, 0.0);
    for (int r = 0; r < 8; ++r) {
        CHECK(na.s[std::size_t(r)] == 0.0);
        CHECK(nb.s[std::size_t(r)] == 0.0);
        CHECK(na.h[std::size_t(r)] == nb.h[std::size_t(r)]);
        CHECK(na.c[std::size_t(r)] == nb.c[std::size_t(r)]);
    }
}

TEST_CASE("single-cell step matches scalar pencil-and-paper arithmetic") {
    LstmModel m = LstmModel::zeros(1, 1);
    for (double* p : parameter_refs(m)) *p = 0.5;

    const double u0 = 0.03, u1 = 0.4, scalar = 0.4;
    const double h_prev = 0.1, c_prev = -0.2, s_prev = 0.25;

    // Scalar arithmetic, written out independently of the implementation.
    const double x = 0.5 * u0 + 0.5 * u1 + 0.5;
    const double z = 0.5 * x + 0.5 * h_prev + 0.5;  // same pre-activation for every gate
    const double gate_i = sigmoid(z);
    const double gate_f = sigmoid(z);
    const double gate_o = sigmoid(z);
    const double cand = std::tanh(z);
    const double gate_s = sigmoid(z);
    const double c = gate_f * c_prev + gate_i * cand;
    const double s = gate_s * s_prev + (1.0 - gate_s) * scalar;
    const double h = gate_o * std::tanh(c + s);

    // The projected input for cell_step is the post-projection x.
    CellState prev;
    prev.h = {h_prev};
    prev.c = {c_prev};
    prev.s = {s_prev};
    const auto next = cell_step(m, {x}, prev, scalar);
    CHECK(std::abs(next.c[0] - c) < 1e-12);
    CHECK(std::abs(next.s[0] - s) < 1e-12);
    CHECK(std::abs(next.h[0] - h) < 1e-12);
}

TEST_CASE("cell_step rejects mismatched shapes") {
    const LstmModel m = LstmModel::zeros();
    CHECK_THROWS_AS(cell_step(m, std::vector<double>(5, 0.0), CellState::zeros(8), 0.0),
                    ValidationError);
    CHECK_THROWS_AS(cell_step(m, std::vector<double>(8, 0.0), CellState::zeros(4), 0.0),
                    ValidationError);
}

TEST_CASE("forward on the zero network repeats the output bias") {
    LstmModel m = LstmModel::zeros();
    m.b_out = 0.0375;
    const auto r = seeded4(1, -0.1, 0.1);
    const auto s = seeded4(2, -1.0, 1.0);
    const auto out = forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s));
    for (double v : out) CHECK(v == doctest::Approx(0.0375).epsilon(1e-15));
}

TEST_CASE("forward is pure and deterministic") {
    const LstmModel m = init_model(77);
    const auto r = seeded4(3, -0.1, 0.1);
    const auto s = seeded4(4, -1.0, 1.0);
    const auto a = forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s));
    const auto b = forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s));
    for (int i = 0; i < 3; ++i) CHECK(a[std::size_t(i)] == b[std::size_t(i)]);
}

TEST_CASE("forward stays finite over the bounded input box") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const LstmModel m = init_model(rng.next_u64());
        std::array<double, 4> r{}, s{};
        for (double& v : r) v = rng.uniform(-0.2, 0.2);
        for (double& v : s) v = rng.uniform(-1.0, 1.0);
        for (double v :
             forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s))) {
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("l1_loss is the mean absolute difference") {
    CHECK(l1_loss(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, 2.0, 3.0}) ==
          0.0);
    CHECK(l1_loss(std::vector<double>{0.1, 0.0, 0.0}, std::vector<double>{0.2, 0.0, 0.0}) ==
          doctest::Approx(0.1 / 3.0).epsilon(1e-12));
    CHECK(l1_loss(std::vector<double>{1.0, -1.0, 0.0}, std::vector<double>{0.0, 0.0, 0.0}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(l1_loss(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                    ValidationError);
}

TEST_CASE("backward returns zero gradients at zero loss") {
    const LstmModel m = init_model(21);
    const auto r = seeded4(6, -0.1, 0.1);
    const auto s = seeded4(7, -1.0, 1.0);
    const auto out = forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s));
    const std::array<double, 3> target{out[0], out[1], out[2]};
    const LstmModel grads = backward(m, std::span<const double, 4>(r),
                                     std::span<const double, 4>(s),
                                     std::span<const double, 3>(target));
    for (const double* g : parameter_refs(grads)) CHECK(*g == 0.0);
}

TEST_CASE("output bias gradient on the zero network is the mean of signs") {
    // With all weights zero the only path to the loss is pred_t = b_out, so
    // d loss / d b_out = mean_t sign(b_out - target_t).
    LstmModel m = LstmModel::zeros();
    m.b_out = 0.02;
    const auto r = seeded4(8, -0.1, 0.1);
    const auto s = seeded4(9, -1.0, 1.0);
    const std::array<double, 3> target{0.05, -0.01, 0.02 - 1e-9};
    const LstmModel grads = backward(m, std::span<const double, 4>(r),
                                     std::span<const double, 4>(s),
                                     std::span<const double, 3>(target));
    CHECK(grads.b_out == doctest::Approx((-1.0 + 1.0 + 1.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("analytic BPTT matches central finite differences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        LstmModel m = init_model(seed);
        const auto r = seeded4(seed + 100, -0.1, 0.1);
        const auto s = seeded4(seed + 200, -1.0, 1.0);
        // Targets displaced by +-0.5 keep every coordinate away from the kink.
        const auto out =
            forward(m, std::span<const double, 4>(r), std::span<const double, 4>(s));
        const std::array<double, 3> target{out[0] - 0.5, out[1] + 0.5, out[2] - 0.5};
        const double err = max_gradient_error(m, r, s, target);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("adam_step implements the bias-corrected update") {
    TrainConfig cfg;

    SUBCASE("first step has magnitude ~ learning rate whatever the gradient") {
        for (const double g : {1e-6, 0.5, 40.0}) {
            std::vector<double> params{1.0};
            AdamState st = AdamState::zeros(1);
            adam_step(params, {g}, st, cfg);
            // m_hat = g, v_hat = g^2 -> step = lr * g / (|g| + eps).
            const double expected = 1.0 - cfg.learning_rate * g / (std::abs(g) + cfg.epsilon);
            CHECK(params[0] == doctest::Approx(expected).epsilon(1e-12));
            CHECK(std::abs(1.0 - params[0]) ==
                  doctest::Approx(cfg.learning_rate).epsilon(1e-2));
        }
    }
    SUBCASE("zero gradients leave parameters untouched") {
        std::vector<double> params{0.7, -0.3};
        AdamState st = AdamState::zeros(2);
        for (int i = 0; i < 25; ++i) adam_step(params, {0.0, 0.0}, st, cfg);
        CHECK(params[0] == 0.7);
        CHECK(params[1] == -0.3);
    }
    SUBCASE("two instances with the same inputs stay bitwise identical") {
        std::vector<double> a{0.1, 0.2}, b{0.1, 0.2};
        AdamState sa = AdamState::zeros(2), sb = AdamState::zeros(2);
        Rng rng(33);
        for (int i = 0; i < 50; ++i) {
            const std::vector<double> g{rng.normal(), rng.normal()};
            adam_step(a, g, sa, cfg);
            adam_step(b, g, sb, cfg);
        }
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
    SUBCASE("non-finite gradient aborts") {
        std::vector<double> params{1.0};
        AdamState st = AdamState::zeros(1);
        CHECK_THROWS_AS(adam_step(params, {std::nan("")}, st, cfg), Error);
    }
    SUBCASE("amsgrad keeps the running max of the second moment") {
        TrainConfig ams = cfg;
        ams.amsgrad = true;
        std::vector<double> a{0.0}, b{0.0};
        AdamState sa = AdamState::zeros(1), sb = AdamState::zeros(1);
        // A large spike followed by small gradients: amsgrad's denominator
        // holds at the spike level, so its later steps are smaller.
        adam_step(a, {50.0}, sa, cfg);
        adam_step(b, {50.0}, sb, ams);
        double step_plain = 0.0, step_ams = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double before_a = a[0], before_b = b[0];
            adam_step(a, {0.01}, sa, cfg);
            adam_step(b, {0.01}, sb, ams);
            step_plain = std::abs(a[0] - before_a);
            step_ams = std::abs(b[0] - before_b);
        }
        CHECK(step_ams < step_plain);
    }
}

TEST_CASE("train memorizes a single constant window") {
    LstmModel m = init_model(7);
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.seed = 7;
    const auto res = train(m, {training_window()}, cfg);
    REQUIRE(res.epoch_loss.size() == 500);
    CHECK(res.epoch_loss.back() < 0.001);
}

TEST_CASE("train with zero epochs leaves the model unchanged") {
    LstmModel m = init_model(3);
    const LstmModel before = m;
    TrainConfig cfg;
    cfg.epochs = 0;
    const auto res = train(m, {training_window()}, cfg);
    CHECK(res.epoch_loss.empty());
    const auto a = parameter_refs(before);
    const auto b = parameter_refs(m);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i] == *b[i]);
}

TEST_CASE("loss trace trends downward on seeded data") {
    Rng rng(50);
    std::vector<AnomalyWindow> windows;
    for (int i = 0; i < 12; ++i) {
        std::array<double, 7> r{}, s{};
        for (double& v : r) v = rng.uniform(-0.04, 0.04);
        for (double& v : s) v = rng.uniform(-1.0, 1.0);
        windows.push_back(
            testutil::make_window("T", add_days(Date{2018, 1, 1}, 10 * i + 1), r, s));
    }
    LstmModel m = init_model(90);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.seed = 90;
    const auto res = train(m, windows, cfg);
    const auto& t = res.epoch_loss;
    const double first10 = mean(std::vector<double>(t.begin(), t.begin() + 10));
    const double last10 = mean(std::vector<double>(t.end() - 10, t.end()));
    CHECK(last10 < first10);
}

TEST_CASE("non-finite loss aborts training and carries the trace") {
    LstmModel m = init_model(5);
    m.b_out = std::numeric_limits<double>::infinity();
    TrainConfig cfg;
    cfg.epochs = 3;
    try {
        train(m, {training_window()}, cfg);
        FAIL("expected a training error");
    } catch (const TrainingError& e) {
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
        CHECK(e.loss_trace.empty());  // failed inside the first epoch
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    const auto run = [] {
        LstmModel m = init_model(41);
        TrainConfig cfg;
        cfg.epochs = 30;
        cfg.seed = 41;
        std::vector<AnomalyWindow> ws{training_window(),
                                      testutil::make_window(
                                          "M2", Date{2018, 5, 7},
                                          {0.02, 0.01, -0.03, 0.06, -0.02, 0.0, 0.01},
                                          {0.1, 0.2, -0.5, -0.8, 0.3, 0.0, 0.2})};
        train(m, ws, cfg);
        return m;
    };
    const LstmModel a = run();
    const LstmModel b = run();
    const auto ra = parameter_refs(a);
    const auto rb = parameter_refs(b);
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(*ra[i] == *rb[i]);
}

TEST_CASE("LSTM JSON serialization round-trips bitwise") {
    LstmModel m = init_model(123);
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.seed = 123;
    train(m, {training_window()}, cfg);

    const auto j = to_json(m, cfg);
    const auto text = j.dump();
    const auto [back, back_cfg] = lstm_from_json(nlohmann::json::parse(text));
    const auto ra = parameter_refs(m);
    const auto rb = parameter_refs(back);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(*ra[i] == *rb[i]);
    CHECK(back_cfg.epochs == cfg.epochs);
    CHECK(back_cfg.seed == cfg.seed);
    CHECK(back_cfg.learning_rate == cfg.learning_rate);

    // And the dump of the reloaded model is byte-identical.
    CHECK(to_json(back, back_cfg).dump() == text);
}

TEST_CASE("epoch wall time scales roughly linearly with the window count") {
    Rng rng(60);
    const auto make_windows = [&](int count) {
        std::vector<AnomalyWindow> ws;
        for (int i = 0; i < count; ++i) {
            std::array<double, 7> r{}, s{};
            for (double& v : r) v = rng.uniform(-0.04, 0.04);
            for (double& v : s) v = rng.uniform(-1.0, 1.0);
            ws.push_back(testutil::make_window("T", add_days(Date{2018, 1, 1}, 1), r, s));
        }
        return ws;
    };
    const auto time_training = [](const std::vector<AnomalyWindow>& ws) {
        LstmModel m = init_model(61);
        TrainConfig cfg;
        cfg.epochs = 40;
        cfg.seed = 61;
        const auto start = std::chrono::steady_clock::now();
        train(m, ws, cfg);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };
    const auto small = make_windows(150);
    const auto large = make_windows(300);
    // Warm-up pass to stabilize caches, then best-of-3 timings.
    time_training(small);
    double t_small = 1e300, t_large = 1e300;
    for (int i = 0; i < 3; ++i) t_small = std::min(t_small, time_training(small));
    for (int i = 0; i < 3; ++i) t_large = std::min(t_large, time_training(large));
    const double ratio = t_large / t_small;
    CHECK(ratio > 2.0 * 0.7);
    CHECK(ratio < 2.0 * 1.3);
}
