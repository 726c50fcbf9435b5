#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "staged/autodiff.hpp"
#include "staged/dataset.hpp"
#include "staged/model.hpp"

namespace staged {

// ---------------------------------------------------------------------------
// Loss
// ---------------------------------------------------------------------------

struct LossReport {
    double total = 0.0;
    std::vector<double> per_gene;            // aligned with Dataset.genes
    std::vector<double> per_type;            // aligned with Dataset.type_names
    std::vector<double> per_time;            // aligned with predicted frames
    size_t first_frame = 0;                  // frame index of per_time[0]
};

// Mean squared error over frames [begin, end); warm-up frames never score.
template <class S>
S mse_over_frames(const std::vector<std::vector<S>>& frames, const Dataset& obs,
                  size_t begin_frame, size_t end_frame) {
    if (end_frame <= begin_frame) throw NothingToScore("no predicted frames to score");
    if (end_frame > frames.size()) throw NothingToScore("prediction shorter than requested");
    const size_t C = obs.n_cells(), G = obs.n_genes();
    S acc = 0.0;
    for (size_t f = begin_frame; f < end_frame; ++f)
        for (size_t c = 0; c < C; ++c)
            for (size_t g = 0; g < G; ++g) {
                S d = frames[f][c * G + g] - obs.x(f, c, g);
                acc += d * d;
            }
    double n = static_cast<double>((end_frame - begin_frame) * C * G);
    return acc * (1.0 / n);
}

inline LossReport compute_loss(const RolloutResult<double>& pred, const Dataset& obs) {
    const size_t begin = static_cast<size_t>(pred.t_init) + 1;
    const size_t end = pred.frames.size();
    if (end <= begin) throw NothingToScore("rollout predicted no frames");
    const size_t C = obs.n_cells(), G = obs.n_genes();
    if (!pred.frames.empty() && pred.frames.front().size() != C * G)
        throw SchemaMismatch("prediction shape does not match observations");

    LossReport r;
    r.first_frame = begin;
    r.per_gene.assign(G, 0.0);
    r.per_type.assign(obs.type_names.size(), 0.0);
    r.per_time.assign(end - begin, 0.0);
    std::vector<double> type_counts(obs.type_names.size(), 0.0);
    double total = 0.0;
    for (size_t f = begin; f < end; ++f) {
        double frame_acc = 0.0;
        for (size_t c = 0; c < C; ++c)
            for (size_t g = 0; g < G; ++g) {
                double d = pred.frames[f][c * G + g] - obs.x(f, c, g);
                double sq = d * d;
                total += sq;
                frame_acc += sq;
                r.per_gene[g] += sq;
                r.per_type[static_cast<size_t>(obs.cell_type[c])] += sq;
            }
        r.per_time[f - begin] = frame_acc / static_cast<double>(C * G);
    }
    const double nt = static_cast<double>(end - begin);
    r.total = total / (nt * static_cast<double>(C * G));
    for (size_t g = 0; g < G; ++g) r.per_gene[g] /= nt * static_cast<double>(C);
    for (size_t c = 0; c < C; ++c) type_counts[static_cast<size_t>(obs.cell_type[c])] += 1.0;
    for (size_t k = 0; k < r.per_type.size(); ++k)
        r.per_type[k] /= nt * static_cast<double>(G) * std::max(1.0, type_counts[k]);
    return r;
}

// ---------------------------------------------------------------------------
// Gradients: reverse mode through the unrolled rollout
// ---------------------------------------------------------------------------

struct GradientResult {
    double loss = 0.0;
    std::vector<double> grad;  // aligned with flatten_params
};

inline std::string describe_param(const ModelMeta& meta, size_t index) {
    const char* names[] = {"W", "a", "W1", "b1", "W2", "b2", "W3", "b3"};
    const size_t G = meta.n_genes(), in = meta.mlp_input();
    const size_t d = static_cast<size_t>(meta.d), h1 = static_cast<size_t>(meta.h1),
                 h2 = static_cast<size_t>(meta.h2);
    const size_t sizes[] = {d * 2, 2 * d, h1 * in, h1, h2 * h1, h2, G * h2, G};
    size_t per_type = meta.params_per_type();
    size_t type = index / per_type, off = index % per_type;
    for (size_t i = 0; i < 8; ++i) {
        if (off < sizes[i])
            return meta.type_names[type] + "." + names[i] + "[" + std::to_string(off) + "]";
        off -= sizes[i];
    }
    return "param[" + std::to_string(index) + "]";
}

inline GradientResult loss_gradients(const StagedModel& model, const Dataset& ds,
                                     const ModelParams& params, size_t begin_frame,
                                     size_t end_frame, int window = 0) {
    ad::Tape tape;
    tape.reserve(1 << 16);
    ad::TapeScope scope(tape);
    auto vparams = lift_params(params);
    auto ro = model.rollout<ad::Var>(ds, vparams, /*record=*/false, window,
                                     /*limit_frame=*/end_frame - 1);
    ad::Var loss = mse_over_frames(ro.frames, ds, begin_frame, end_frame);

    GradientResult res;
    res.loss = ad::value_of(loss);
    size_t n = flatten_params(params).size();
    res.grad.assign(n, 0.0);
    if (loss.id < 0) return res;  // loss independent of parameters
    tape.backward(loss.id);
    for (size_t i = 0; i < n; ++i) {
        res.grad[i] = tape.grad(static_cast<int32_t>(i));
        if (!std::isfinite(res.grad[i]))
            throw NumericalBlowup("non-finite gradient for " +
                                  describe_param(params.meta, i));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Adam (decay rates 0.9 / 0.999, epsilon 1e-8)
// ---------------------------------------------------------------------------

struct AdamState {
    std::vector<double> m, v;
    int64_t t = 0;
};

inline void adam_step(AdamState& s, std::vector<double>& w, const std::vector<double>& g,
                      double lr) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (s.m.empty()) {
        s.m.assign(w.size(), 0.0);
        s.v.assign(w.size(), 0.0);
    }
    if (w.size() != g.size() || w.size() != s.m.size())
        throw SchemaMismatch("optimizer state shape mismatch");
    ++s.t;
    double c1 = 1.0 - std::pow(b1, static_cast<double>(s.t));
    double c2 = 1.0 - std::pow(b2, static_cast<double>(s.t));
    for (size_t i = 0; i < w.size(); ++i) {
        s.m[i] = b1 * s.m[i] + (1.0 - b1) * g[i];
        s.v[i] = b2 * s.v[i] + (1.0 - b2) * g[i] * g[i];
        w[i] -= lr * (s.m[i] / c1) / (std::sqrt(s.v[i] / c2) + eps);
    }
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

struct TrainLogEntry {
    int epoch;
    double train_mse;
    double val_mse;
    double wall_ms;
};

struct TrainState {
    ModelParams params;  // current
    AdamState opt;
    int epoch = 0;
    std::vector<TrainLogEntry> log;
    ModelParams best_params;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    bool diverged = false;
};

struct FrameSplit {
    size_t train_end;  // frames [0, train_end) train, [train_end, T) validation
    size_t n_frames;
};

inline FrameSplit split_frames(const Dataset& ds, const RunConfig& cfg) {
    const size_t T = ds.n_times();
    size_t val = static_cast<size_t>(std::floor(cfg.val_fraction * static_cast<double>(T)));
    if (cfg.val_fraction > 0.0 && val == 0) val = 1;
    size_t train_end = T - val;
    const size_t t_init = static_cast<size_t>(cfg.lags.warmup());
    if (train_end < t_init + 2)
        throw DomainError("not enough frames to train: need at least " +
                          std::to_string(t_init + 2) + " before the validation split");
    return {train_end, T};
}

// Fit by backprop through the unrolled rollout. A teacher-forcing ramp grows
// the closed-loop window from 1 to the full train horizon over tf_epochs;
// afterwards training runs at cfg.window (0 = full closed loop). Validation
// is always the full closed-loop rollout scored on the held-out tail.
inline TrainState train(const StagedModel& model, const Dataset& ds, const RunConfig& cfg,
                        const std::function<void(const TrainState&)>& on_epoch = nullptr) {
    cfg.validate();
    model.validate_dataset(ds);
    FrameSplit split = split_frames(ds, cfg);
    const size_t t_init = static_cast<size_t>(cfg.lags.warmup());
    const size_t train_begin = t_init + 1;
    const int full_window = static_cast<int>(split.train_end - 1 - t_init);

    TrainState st;
    st.params = init_model_params(model.meta(), cfg.seed);
    st.best_params = st.params;
    std::vector<double> flat = flatten_params(st.params);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto t0 = std::chrono::steady_clock::now();
        int window;
        if (cfg.tf_epochs > 0 && epoch < cfg.tf_epochs) {
            double f = static_cast<double>(epoch) / static_cast<double>(cfg.tf_epochs);
            window = 1 + static_cast<int>(f * static_cast<double>(full_window - 1));
        } else {
            window = cfg.window;
        }

        GradientResult gr;
        bool blew_up = false;
        try {
            gr = loss_gradients(model, ds, st.params, train_begin, split.train_end, window);
            if (!std::isfinite(gr.loss)) blew_up = true;
        } catch (const NumericalBlowup&) {
            blew_up = true;
        }
        if (blew_up) {
            st.diverged = true;
            break;  // st.params still holds the last finite state
        }

        adam_step(st.opt, flat, gr.grad, cfg.learning_rate);
        unflatten_params(st.params, flat);

        double val_mse;
        {
            auto ro = model.rollout<double>(ds, st.params.per_type, false);
            val_mse = (split.train_end < split.n_frames)
                          ? value_of(mse_over_frames(ro.frames, ds, split.train_end,
                                                     split.n_frames))
                          : value_of(mse_over_frames(ro.frames, ds, train_begin,
                                                     split.n_frames));
        }
        if (!std::isfinite(val_mse)) {
            st.diverged = true;
            break;
        }
        if (val_mse < st.best_val) {
            st.best_val = val_mse;
            st.best_epoch = epoch;
            st.best_params = st.params;
        }
        double wall = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        st.log.push_back(TrainLogEntry{epoch, gr.loss, val_mse, wall});
        st.epoch = epoch + 1;
        if (on_epoch) on_epoch(st);
    }
    if (st.best_epoch < 0) st.best_params = st.params;
    return st;
}

inline std::string train_log_to_csv(const std::vector<TrainLogEntry>& log) {
    std::string out = "epoch,train_mse,val_mse,wall_ms\n";
    for (const auto& e : log)
        out += std::to_string(e.epoch) + "," + fmt_double(e.train_mse) + "," +
               fmt_double(e.val_mse) + "," + fmt_double(e.wall_ms) + "\n";
    return out;
}

}  // namespace staged
