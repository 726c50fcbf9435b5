#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "staged/autodiff.hpp"
#include "staged/common.hpp"
#include "staged/config.hpp"
#include "staged/dataset.hpp"
#include "staged/graph.hpp"
#include "staged/grn.hpp"

namespace staged {

constexpr double kAttentionLeakySlope = 0.2;

// ---------------------------------------------------------------------------
// Parameters. One tensor set per cell type (weight sharing); flattening order
// is fixed so optimizer state, gradient readout and finite differences all
// agree on weight indices.
// ---------------------------------------------------------------------------

template <class S>
struct TypeTensors {
    std::vector<S> W;   // attn_hidden x 2 (feature, time), row-major
    std::vector<S> a;   // 2 * attn_hidden
    std::vector<S> W1;  // h1 x mlp_input
    std::vector<S> b1;
    std::vector<S> W2;  // h2 x h1
    std::vector<S> b2;
    std::vector<S> W3;  // n_genes x h2
    std::vector<S> b3;
};

struct ModelMeta {
    std::vector<std::string> genes;
    std::vector<std::string> type_names;
    int d = 8;
    int h1 = 32;
    int h2 = 32;
    bool scalar_messages = false;

    size_t n_genes() const { return genes.size(); }
    size_t n_types() const { return type_names.size(); }
    size_t msg_len() const { return scalar_messages ? 1 : 2 * genes.size(); }
    size_t mlp_input() const {
        return genes.size() * static_cast<size_t>(d) + msg_len() + 1;
    }
    size_t params_per_type() const {
        size_t in = mlp_input();
        size_t dd = static_cast<size_t>(d);
        size_t hh1 = static_cast<size_t>(h1), hh2 = static_cast<size_t>(h2);
        return dd * 2 + 2 * dd + hh1 * in + hh1 + hh2 * hh1 + hh2 + genes.size() * hh2 +
               genes.size();
    }
};

struct ModelParams {
    ModelMeta meta;
    std::vector<TypeTensors<double>> per_type;
};

namespace detail {

inline void fill_uniform(std::vector<double>& v, size_t n, size_t fan_in,
                         std::mt19937_64& rng) {
    double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-s, s);
    v.resize(n);
    for (auto& x : v) x = dist(rng);
}

}  // namespace detail

inline ModelParams init_model_params(const ModelMeta& meta, uint64_t seed) {
    ModelParams p;
    p.meta = meta;
    std::mt19937_64 rng(seed);
    const size_t G = meta.n_genes(), in = meta.mlp_input();
    const size_t d = static_cast<size_t>(meta.d), h1 = static_cast<size_t>(meta.h1),
                 h2 = static_cast<size_t>(meta.h2);
    for (size_t k = 0; k < meta.n_types(); ++k) {
        TypeTensors<double> t;
        detail::fill_uniform(t.W, d * 2, 2, rng);
        detail::fill_uniform(t.a, 2 * d, 2 * d, rng);
        detail::fill_uniform(t.W1, h1 * in, in, rng);
        detail::fill_uniform(t.b1, h1, in, rng);
        detail::fill_uniform(t.W2, h2 * h1, h1, rng);
        detail::fill_uniform(t.b2, h2, h1, rng);
        detail::fill_uniform(t.W3, G * h2, h2, rng);
        detail::fill_uniform(t.b3, G, h2, rng);
        p.per_type.push_back(std::move(t));
    }
    return p;
}

inline std::vector<double> flatten_params(const ModelParams& p) {
    std::vector<double> out;
    out.reserve(p.meta.params_per_type() * p.meta.n_types());
    for (const auto& t : p.per_type)
        for (const auto* v : {&t.W, &t.a, &t.W1, &t.b1, &t.W2, &t.b2, &t.W3, &t.b3})
            out.insert(out.end(), v->begin(), v->end());
    return out;
}

inline void unflatten_params(ModelParams& p, const std::vector<double>& flat) {
    size_t i = 0;
    for (auto& t : p.per_type)
        for (auto* v : {&t.W, &t.a, &t.W1, &t.b1, &t.W2, &t.b2, &t.W3, &t.b3})
            for (auto& x : *v) x = flat.at(i++);
    if (i != flat.size()) throw SchemaMismatch("flat parameter length mismatch");
}

// Records every weight as a tape leaf, in flattening order, so leaf ids are
// 0..n-1 and gradients read back aligned with flatten_params.
inline std::vector<TypeTensors<ad::Var>> lift_params(const ModelParams& p) {
    std::vector<TypeTensors<ad::Var>> out;
    for (const auto& t : p.per_type) {
        TypeTensors<ad::Var> v;
        auto liftv = [](const std::vector<double>& src, std::vector<ad::Var>& dst) {
            dst.reserve(src.size());
            for (double x : src) dst.push_back(ad::Var::record(x));
        };
        liftv(t.W, v.W);
        liftv(t.a, v.a);
        liftv(t.W1, v.W1);
        liftv(t.b1, v.b1);
        liftv(t.W2, v.W2);
        liftv(t.b2, v.b2);
        liftv(t.W3, v.W3);
        liftv(t.b3, v.b3);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<TypeTensors<double>> as_double_tensors(const ModelParams& p) {
    return p.per_type;
}

// ---------------------------------------------------------------------------
// Catalog mask on gene indices
// ---------------------------------------------------------------------------

struct MaskIndex {
    std::set<std::pair<int, int>> pairs;  // (ligand gene, receptor gene)

    static MaskIndex build(const LrCatalog& catalog, const std::vector<std::string>& genes) {
        MaskIndex m;
        auto index_of = [&](const std::string& g) -> int {
            auto it = std::lower_bound(genes.begin(), genes.end(), g);
            if (it == genes.end() || *it != g) return -1;
            return static_cast<int>(it - genes.begin());
        };
        for (const auto& p : catalog.pairs) {
            int lg = index_of(p.ligand), rg = index_of(p.receptor);
            if (lg >= 0 && rg >= 0) m.pairs.insert({lg, rg});
        }
        return m;
    }
    bool allows(int ligand_gene, int receptor_gene) const {
        return pairs.count({ligand_gene, receptor_gene}) > 0;
    }
};

// ---------------------------------------------------------------------------
// Attention
// ---------------------------------------------------------------------------

template <class S>
struct AttentionEntry {
    int src;  // node index; src == target encodes the self edge
    S beta;
    bool intercellular;
};

template <class S>
using AttentionRows = std::vector<std::vector<AttentionEntry<S>>>;

// Single-head masked attention. Logits decompose as a . lrelu(u_i || u_j) =
// a_tgt . lrelu(u_i) + a_src . lrelu(u_j); intercellular edges that are not a
// catalog (ligand, receptor) pair are removed before the per-target softmax.
// Every node keeps an implicit self edge so normalization is total.
template <class S>
AttentionRows<S> attention_weights(const AugmentedCellGraph& g, const std::vector<S>& feats,
                                   double tau, const TypeTensors<S>& p, const MaskIndex& mask,
                                   int d) {
    using std::exp;
    using ad::exp;
    const size_t N = g.nodes.size(), D = static_cast<size_t>(d);
    if (feats.size() != N) throw DomainError("feature map does not cover all nodes");

    std::vector<S> tgt_score(N), src_score(N);
    std::vector<S> u(D);
    for (size_t j = 0; j < N; ++j) {
        S ts = 0.0, ss = 0.0;
        for (size_t h = 0; h < D; ++h) {
            u[h] = p.W[h * 2] * feats[j] + p.W[h * 2 + 1] * tau;
            S s = leaky_relu(u[h], kAttentionLeakySlope);
            ts += p.a[h] * s;
            ss += p.a[D + h] * s;
        }
        tgt_score[j] = ts;
        src_score[j] = ss;
    }

    AttentionRows<S> rows(N);
    std::vector<int> srcs;
    std::vector<char> inter;
    for (size_t i = 0; i < N; ++i) {
        srcs.clear();
        inter.clear();
        bool has_self = false;
        for (int ei : g.in_edges[i]) {
            const GraphEdge& e = g.edges[static_cast<size_t>(ei)];
            bool is_inter = g.nodes[static_cast<size_t>(e.src)].kind == NodeKind::InputLigand;
            if (is_inter) {
                if (g.nodes[i].kind != NodeKind::Receptor) continue;  // masked
                if (!mask.allows(g.nodes[static_cast<size_t>(e.src)].gene, g.nodes[i].gene))
                    continue;  // masked
            }
            srcs.push_back(e.src);
            inter.push_back(is_inter ? 1 : 0);
            if (e.src == static_cast<int>(i)) has_self = true;
        }
        if (!has_self) {
            srcs.push_back(static_cast<int>(i));
            inter.push_back(0);
        }

        double mx = -std::numeric_limits<double>::infinity();
        std::vector<S> logits;
        logits.reserve(srcs.size());
        for (int sj : srcs) {
            S e = tgt_score[i] + src_score[static_cast<size_t>(sj)];
            mx = std::max(mx, value_of(e));
            logits.push_back(std::move(e));
        }
        S denom = 0.0;
        std::vector<S> ws;
        ws.reserve(srcs.size());
        for (auto& e : logits) {
            S w = exp(e - mx);  // detached max; shift cancels in the softmax
            denom += w;
            ws.push_back(std::move(w));
        }
        auto& row = rows[i];
        row.reserve(srcs.size());
        for (size_t n = 0; n < srcs.size(); ++n)
            row.push_back({srcs[n], ws[n] / denom, inter[n] != 0});
    }
    return rows;
}

// Zero for masked/absent pairs; convenience for tests and extraction.
template <class S>
double beta_between(const AttentionRows<S>& rows, int target, int src) {
    for (const auto& e : rows[static_cast<size_t>(target)])
        if (e.src == src) return value_of(e.beta);
    return 0.0;
}

// ---------------------------------------------------------------------------
// Messages: bilinear, per target gene. The intracellular channel sums over
// the gene node's surviving in-entries; the intercellular channel sums the
// ligand->receptor entries of the gene's receptor node.
// ---------------------------------------------------------------------------

template <class S>
struct Messages {
    std::vector<S> intra;  // length G
    std::vector<S> inter;  // length G
};

template <class S>
Messages<S> aggregate_messages(const AugmentedCellGraph& g, const AttentionRows<S>& rows,
                               const std::vector<S>& feats, size_t n_genes) {
    Messages<S> m;
    m.intra.assign(n_genes, S(0.0));
    m.inter.assign(n_genes, S(0.0));
    for (size_t gi = 0; gi < n_genes; ++gi) {
        int node = g.gene_nodes[gi];
        S acc = 0.0;
        for (const auto& e : rows[static_cast<size_t>(node)])
            acc += e.beta * feats[static_cast<size_t>(node)] * feats[static_cast<size_t>(e.src)];
        m.intra[gi] = acc;
        int rnode = g.receptor_nodes[gi];
        if (rnode >= 0) {
            S racc = 0.0;
            bool any = false;
            for (const auto& e : rows[static_cast<size_t>(rnode)])
                if (e.intercellular) {
                    racc += e.beta * feats[static_cast<size_t>(rnode)] *
                            feats[static_cast<size_t>(e.src)];
                    any = true;
                }
            if (any) m.inter[gi] = racc;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// GAT embeddings (gene nodes only) and the derivative head
// ---------------------------------------------------------------------------

template <class S>
std::vector<S> gat_embeddings(const AugmentedCellGraph& g, const AttentionRows<S>& rows,
                              const std::vector<S>& feats, double tau,
                              const TypeTensors<S>& p, size_t n_genes, int d) {
    using std::tanh;
    using ad::tanh;
    const size_t D = static_cast<size_t>(d);
    // u_j recomputed here instead of captured: keeps attention_weights'
    // interface scalar-only.
    std::vector<S> u(g.nodes.size() * D);
    for (size_t j = 0; j < g.nodes.size(); ++j)
        for (size_t h = 0; h < D; ++h)
            u[j * D + h] = p.W[h * 2] * feats[j] + p.W[h * 2 + 1] * tau;
    std::vector<S> emb(n_genes * D, S(0.0));
    for (size_t gi = 0; gi < n_genes; ++gi) {
        int node = g.gene_nodes[gi];
        for (size_t h = 0; h < D; ++h) {
            S acc = 0.0;
            for (const auto& e : rows[static_cast<size_t>(node)])
                acc += e.beta * u[static_cast<size_t>(e.src) * D + h];
            emb[gi * D + h] = tanh(acc);
        }
    }
    return emb;
}

template <class S>
std::vector<S> derivative_head(const std::vector<S>& emb, const Messages<S>& msg, double tau,
                               const TypeTensors<S>& p, const ModelMeta& meta) {
    using std::tanh;
    using ad::tanh;
    const size_t G = meta.n_genes();
    std::vector<S> z;
    z.reserve(meta.mlp_input());
    z.insert(z.end(), emb.begin(), emb.end());
    if (meta.scalar_messages) {
        S total = 0.0;
        for (const auto& v : msg.intra) total += v;
        for (const auto& v : msg.inter) total += v;
        z.push_back(total);
    } else {
        z.insert(z.end(), msg.intra.begin(), msg.intra.end());
        z.insert(z.end(), msg.inter.begin(), msg.inter.end());
    }
    z.push_back(S(tau));
    if (z.size() != meta.mlp_input()) throw SchemaMismatch("MLP input length mismatch");

    auto affine = [](const std::vector<S>& Wm, const std::vector<S>& b,
                     const std::vector<S>& in, size_t rows, size_t cols) {
        std::vector<S> out(rows);
        for (size_t r = 0; r < rows; ++r) {
            S acc = b[r];
            for (size_t c = 0; c < cols; ++c) acc += Wm[r * cols + c] * in[c];
            out[r] = acc;
        }
        return out;
    };
    const size_t h1 = static_cast<size_t>(meta.h1), h2 = static_cast<size_t>(meta.h2);
    std::vector<S> a1 = affine(p.W1, p.b1, z, h1, meta.mlp_input());
    for (auto& v : a1) v = tanh(v);
    std::vector<S> a2 = affine(p.W2, p.b2, a1, h2, h1);
    for (auto& v : a2) v = tanh(v);
    std::vector<S> out = affine(p.W3, p.b3, a2, G, h2);
    for (const auto& v : out)
        if (!std::isfinite(value_of(v)))
            throw NumericalBlowup("derivative head produced a non-finite value");
    return out;
}

// ---------------------------------------------------------------------------
// Rollout
// ---------------------------------------------------------------------------

struct AttentionRecord {
    size_t frame;
    int cell;
    std::string target;
    std::string source;
    int source_cell;  // -1 for intracellular entries
    double beta;
    bool intercellular;
};

struct AttentionSeries {
    std::vector<AttentionRecord> records;
    std::vector<double> times;  // frame index -> time value
};

template <class S>
struct RolloutResult {
    std::vector<std::vector<S>> frames;  // [T][cell * G + gene]; warm-up copied
    AttentionSeries series;
    int t_init = 0;
};

// The multi-agent model: per-type skeleton graphs plus shared-weight forward
// evaluation over a dataset's frames.
class StagedModel {
public:
    StagedModel(ModelMeta meta, std::map<std::string, GrnSpec> priors, LrCatalog catalog,
                RunConfig cfg)
        : meta_(std::move(meta)), priors_(std::move(priors)), catalog_(std::move(catalog)),
          cfg_(std::move(cfg)) {
        mask_ = MaskIndex::build(catalog_, meta_.genes);
        for (const auto& tn : meta_.type_names) {
            const GrnSpec& spec = prior_for(tn);
            if (spec.genes != meta_.genes)
                throw SchemaMismatch("prior GRN genes for type '" + tn +
                                     "' do not match the model gene list");
            skeletons_.push_back(build_cell_graph(spec, catalog_));
        }
    }

    const ModelMeta& meta() const { return meta_; }
    const RunConfig& config() const { return cfg_; }
    const LrCatalog& catalog() const { return catalog_; }
    const MaskIndex& mask() const { return mask_; }
    const AugmentedCellGraph& skeleton(size_t type_index) const {
        return skeletons_[type_index];
    }

    const GrnSpec& prior_for(const std::string& type_name) const {
        auto it = priors_.find(type_name);
        if (it != priors_.end()) return it->second;
        it = priors_.find("");
        if (it != priors_.end()) return it->second;
        throw SchemaMismatch("no prior GRN for cell type '" + type_name + "'");
    }
    const std::map<std::string, GrnSpec>& priors() const { return priors_; }

    void validate_dataset(const Dataset& ds) const {
        if (ds.genes != meta_.genes)
            throw SchemaMismatch("dataset gene list does not match the model");
        if (ds.type_names != meta_.type_names)
            throw SchemaMismatch("dataset cell types do not match the model");
    }

    // Builds cell c's graph at frame f (neighbors from positions at f).
    AugmentedCellGraph cell_graph_at(const Dataset& ds, size_t c, size_t f) const {
        std::vector<Vec2> positions(ds.n_cells());
        for (size_t i = 0; i < ds.n_cells(); ++i) positions[i] = ds.position(f, i);
        auto neigh = spatial_neighbors(positions, c, cfg_.neighborhood);
        std::vector<const GrnSpec*> nspecs;
        nspecs.reserve(neigh.size());
        for (size_t s : neigh) nspecs.push_back(&prior_for(ds.type_name_of(s)));
        const size_t k = static_cast<size_t>(ds.cell_type[c]);
        AugmentedCellGraph g = attach_neighbor_ligands(skeletons_[k],
                                                       prior_for(ds.type_name_of(c)), neigh,
                                                       nspecs, ds.cells, catalog_);
        g.cell = static_cast<int>(c);
        return g;
    }

    // Advances history (frames 0..t present) by one frame; appends frame t+1.
    // Lagged lookups stay frozen at grid resolution within the step; when
    // lag_gg == 0 the gene features track the integrator's live state.
    template <class S>
    void step(std::vector<std::vector<S>>& history, size_t t, const Dataset& ds,
              const std::vector<TypeTensors<S>>& params, AttentionSeries* series) const {
        const int t_init = cfg_.lags.warmup();
        if (static_cast<int>(t) < t_init)
            throw WarmupViolation("step at t=" + std::to_string(t) +
                                  " is inside the warm-up period");
        const size_t C = ds.n_cells(), G = ds.n_genes();
        const double h = ds.grid_step();
        double dt = cfg_.dt > 0.0 ? cfg_.dt : h;
        size_t n_sub = static_cast<size_t>(std::llround(h / dt));
        if (n_sub < 1 || std::abs(static_cast<double>(n_sub) * dt - h) > 1e-9 * std::max(1.0, h))
            throw DomainError("model dt must divide the data grid spacing");

        std::vector<AugmentedCellGraph> graphs;
        graphs.reserve(C);
        for (size_t c = 0; c < C; ++c) graphs.push_back(cell_graph_at(ds, c, t));

        const double t0 = ds.times.front(), t1 = ds.times.back();
        const double span = (t1 > t0) ? (t1 - t0) : 1.0;
        auto tau_at = [&](double tv) { return (tv - t0) / span; };

        std::vector<S> state(history[t]);
        bool record = series != nullptr;
        for (size_t sub = 0; sub < n_sub; ++sub) {
            double tv = ds.times[t] + static_cast<double>(sub) * dt;
            if (cfg_.integrator == Integrator::Euler) {
                auto k1 = field(history, state, graphs, ds, params, t, tau_at(tv),
                                record && sub == 0 ? series : nullptr);
                for (size_t i = 0; i < C * G; ++i) state[i] += dt * k1[i];
            } else {
                auto k1 = field(history, state, graphs, ds, params, t, tau_at(tv),
                                record && sub == 0 ? series : nullptr);
                std::vector<S> stage(C * G);
                for (size_t i = 0; i < C * G; ++i) stage[i] = state[i] + (0.5 * dt) * k1[i];
                auto k2 = field(history, stage, graphs, ds, params, t, tau_at(tv + 0.5 * dt),
                                nullptr);
                for (size_t i = 0; i < C * G; ++i) stage[i] = state[i] + (0.5 * dt) * k2[i];
                auto k3 = field(history, stage, graphs, ds, params, t, tau_at(tv + 0.5 * dt),
                                nullptr);
                for (size_t i = 0; i < C * G; ++i) stage[i] = state[i] + dt * k3[i];
                auto k4 = field(history, stage, graphs, ds, params, t, tau_at(tv + dt),
                                nullptr);
                for (size_t i = 0; i < C * G; ++i)
                    state[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        history.push_back(std::move(state));
    }

    // Closed-loop rollout; warm-up frames are copied from observations.
    // window > 0 resets history to observations every `window` frames
    // (teacher-forced / truncated training); frames past `limit_frame` are
    // not predicted when limit_frame > 0.
    template <class S>
    RolloutResult<S> rollout(const Dataset& ds, const std::vector<TypeTensors<S>>& params,
                             bool record, int window = 0, size_t limit_frame = 0) const {
        validate_dataset(ds);
        if (params.size() != meta_.n_types())
            throw SchemaMismatch("parameter set count does not match cell types");
        const int t_init = cfg_.lags.warmup();
        const size_t T = ds.n_times();
        if (static_cast<int>(T) - 1 <= t_init)
            throw NothingToPredict("series has " + std::to_string(T) +
                                   " frames but warm-up needs " + std::to_string(t_init + 1));
        const size_t C = ds.n_cells(), G = ds.n_genes();
        const size_t last = (limit_frame > 0) ? std::min(limit_frame, T - 1) : (T - 1);

        std::vector<std::vector<S>> obs(T);
        for (size_t f = 0; f < T; ++f) {
            obs[f].reserve(C * G);
            for (size_t c = 0; c < C; ++c)
                for (size_t g = 0; g < G; ++g) obs[f].emplace_back(ds.x(f, c, g));
        }

        RolloutResult<S> out;
        out.t_init = t_init;
        out.series.times = ds.times;
        std::vector<std::vector<S>>& hist = out.frames;
        hist.assign(obs.begin(), obs.begin() + t_init + 1);

        AttentionSeries* series = record ? &out.series : nullptr;
        for (size_t t = static_cast<size_t>(t_init); t < last; ++t) {
            if (window > 0 && (t - static_cast<size_t>(t_init)) % static_cast<size_t>(window) == 0)
                for (size_t f = static_cast<size_t>(t_init) + 1; f <= t; ++f) hist[f] = obs[f];
            step(hist, t, ds, params, series);
        }
        return out;
    }

private:
    template <class S>
    std::vector<S> field(const std::vector<std::vector<S>>& history,
                         const std::vector<S>& live, std::vector<AugmentedCellGraph>& graphs,
                         const Dataset& ds, const std::vector<TypeTensors<S>>& params,
                         size_t t, double tau, AttentionSeries* series) const {
        const size_t C = ds.n_cells(), G = ds.n_genes();
        std::vector<S> deriv(C * G);
        for (size_t c = 0; c < C; ++c) {
            const AugmentedCellGraph& g = graphs[c];
            const auto& p = params[static_cast<size_t>(ds.cell_type[c])];
            std::vector<S> feats = assign_lagged_features(history, G, c, g,
                                                          static_cast<int>(t), cfg_.lags);
            if (cfg_.lags.gg == 0)
                for (size_t gi = 0; gi < G; ++gi)
                    feats[static_cast<size_t>(g.gene_nodes[gi])] = live[c * G + gi];
            auto rows = attention_weights(g, feats, tau, p, mask_, meta_.d);
            if (series) record_attention(*series, g, rows, ds, t, c);
            auto msgs = aggregate_messages(g, rows, feats, G);
            auto emb = gat_embeddings(g, rows, feats, tau, p, G, meta_.d);
            auto dx = derivative_head(emb, msgs, tau, p, meta_);
            for (size_t gi = 0; gi < G; ++gi) deriv[c * G + gi] = dx[gi];
        }
        return deriv;
    }

    template <class S>
    void record_attention(AttentionSeries& series, const AugmentedCellGraph& g,
                          const AttentionRows<S>& rows, const Dataset& ds, size_t t,
                          size_t c) const {
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& e : rows[i]) {
                const GraphNode& src = g.nodes[static_cast<size_t>(e.src)];
                series.records.push_back(AttentionRecord{
                    t, static_cast<int>(c), g.nodes[i].name, src.name,
                    e.intercellular ? src.neighbor : -1, value_of(e.beta), e.intercellular});
            }
        (void)ds;
    }

    ModelMeta meta_;
    std::map<std::string, GrnSpec> priors_;
    LrCatalog catalog_;
    RunConfig cfg_;
    MaskIndex mask_;
    std::vector<AugmentedCellGraph> skeletons_;
};

}  // namespace staged
