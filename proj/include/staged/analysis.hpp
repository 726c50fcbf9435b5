#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "staged/checkpoint.hpp"
#include "staged/dataset.hpp"
#include "staged/model.hpp"

namespace staged {

// ---------------------------------------------------------------------------
// Rank statistics
// ---------------------------------------------------------------------------

// Average ranks (1-based); ties share the mean of their rank span.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Spearman rank correlation with average ranks; empty when either side is
// constant (never silently 0).
inline std::optional<double> spearman_rho(const std::vector<double>& a,
                                          const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) return std::nullopt;
    auto ra = average_ranks(a), rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

// AUROC of scores against binary labels via the Mann-Whitney statistic with
// average ranks; empty when one class is absent.
inline std::optional<double> auroc(const std::vector<double>& scores,
                                   const std::vector<char>& labels) {
    if (scores.size() != labels.size()) throw SchemaMismatch("auroc input length mismatch");
    size_t npos = 0;
    for (char l : labels) npos += (l != 0);
    size_t nneg = scores.size() - npos;
    if (npos == 0 || nneg == 0) return std::nullopt;
    auto ranks = average_ranks(scores);
    double rpos = 0.0;
    for (size_t i = 0; i < scores.size(); ++i)
        if (labels[i]) rpos += ranks[i];
    double u = rpos - static_cast<double>(npos) * (static_cast<double>(npos) + 1.0) / 2.0;
    return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

// ---------------------------------------------------------------------------
// Attention series IO and extraction
// ---------------------------------------------------------------------------

inline const char* kAttentionHeader =
    "t,cell,target_node,source_node,source_cell,beta,intercellular";

inline std::string attention_series_to_csv(const AttentionSeries& series,
                                           const Dataset& ds) {
    std::string out = kAttentionHeader;
    out += '\n';
    for (const auto& r : series.records) {
        out += fmt_double(series.times[r.frame]);
        out += ',';
        out += ds.cells[static_cast<size_t>(r.cell)];
        out += ',';
        out += r.target;
        out += ',';
        out += r.source;
        out += ',';
        if (r.source_cell >= 0) out += ds.cells[static_cast<size_t>(r.source_cell)];
        out += ',';
        out += fmt_double(r.beta);
        out += ',';
        out += r.intercellular ? '1' : '0';
        out += '\n';
    }
    return out;
}

struct ExtractionResult {
    RolloutResult<double> rollout;  // in the observation scale
    AttentionSeries series;
};

// Rolls the checkpointed model over the dataset and returns the attention
// series plus predictions mapped back to natural units.
inline ExtractionResult extract_attention_series(const Checkpoint& cp, const Dataset& ds) {
    StagedModel model = model_from_checkpoint(cp);
    model.validate_dataset(ds);
    Dataset working = cp.normalize ? scale_dataset(ds, cp.scales, false) : ds;
    auto ro = model.rollout<double>(working, cp.params.per_type, /*record=*/true);
    if (cp.normalize) {
        const size_t C = ds.n_cells(), G = ds.n_genes();
        for (auto& frame : ro.frames)
            for (size_t c = 0; c < C; ++c)
                for (size_t g = 0; g < G; ++g) frame[c * G + g] *= cp.scales.scale[g];
    }
    ExtractionResult res;
    res.series = std::move(ro.series);
    res.rollout = std::move(ro);
    res.rollout.series.records.clear();
    return res;
}

// ---------------------------------------------------------------------------
// Trajectory fit
// ---------------------------------------------------------------------------

struct FitEntry {
    std::string type;
    std::string gene;
    std::optional<double> rho;  // empty when a mean trajectory is constant
    double mse = 0.0;
};

struct FitReport {
    std::vector<FitEntry> entries;
};

// Spearman per (cell type, gene) on type-mean trajectories over the
// predicted frames, plus plain MSE per (type, gene).
inline FitReport eval_fit(const RolloutResult<double>& pred, const Dataset& obs) {
    const size_t begin = static_cast<size_t>(pred.t_init) + 1;
    const size_t end = pred.frames.size();
    if (end <= begin) throw NothingToScore("no overlapping predicted frames");
    const size_t C = obs.n_cells(), G = obs.n_genes();

    FitReport report;
    for (size_t k = 0; k < obs.type_names.size(); ++k) {
        auto members = obs.cells_of_type(static_cast<int>(k));
        if (members.empty()) continue;
        for (size_t g = 0; g < G; ++g) {
            std::vector<double> mo, mp;
            double se = 0.0;
            for (size_t f = begin; f < end; ++f) {
                double so = 0.0, sp = 0.0;
                for (size_t c : members) {
                    so += obs.x(f, c, g);
                    sp += pred.frames[f][c * G + g];
                    double d = pred.frames[f][c * G + g] - obs.x(f, c, g);
                    se += d * d;
                }
                mo.push_back(so / static_cast<double>(members.size()));
                mp.push_back(sp / static_cast<double>(members.size()));
            }
            FitEntry e;
            e.type = obs.type_names[k];
            e.gene = obs.genes[g];
            e.rho = spearman_rho(mp, mo);
            e.mse = se / static_cast<double>((end - begin) * members.size());
            report.entries.push_back(std::move(e));
        }
    }
    (void)C;
    return report;
}

// ---------------------------------------------------------------------------
// Network recovery
// ---------------------------------------------------------------------------

struct TypeRecovery {
    std::string type;
    std::optional<double> auroc;
    double precision_at_k = 0.0;
    double top1_accuracy = 0.0;
    std::map<std::string, std::string> top1_parent;      // gene -> argmax source
    std::vector<std::string> excluded_genes;             // no incoming attention
    std::map<std::string, double> intercellular_mean_beta;  // "ligand->receptor"
    std::map<std::string, double> mean_beta;             // "src->tgt" time-averaged
};

struct RecoveryReport {
    std::vector<TypeRecovery> per_type;
};

// Scores time-averaged intracellular attention against the true edge set.
// Self-entries are softmax plumbing, not regulatory claims: they are excluded
// from the ranking universe.
inline TypeRecovery recovery_for_type(const AttentionSeries& series, const Dataset& ds,
                                      int type_index, const GrnSpec& truth) {
    TypeRecovery out;
    out.type = ds.type_names[static_cast<size_t>(type_index)];
    const auto& genes = ds.genes;
    const size_t G = genes.size();
    for (const auto& g : truth.genes)
        if (std::find(genes.begin(), genes.end(), g) == genes.end())
            throw SchemaMismatch("truth gene '" + g + "' absent from the attention series");

    auto gene_index = [&](const std::string& name) -> int {
        auto it = std::lower_bound(genes.begin(), genes.end(), name);
        if (it == genes.end() || *it != name) return -1;
        return static_cast<int>(it - genes.begin());
    };

    std::vector<size_t> members = ds.cells_of_type(type_index);
    std::set<int> member_set(members.begin(), members.end());
    std::vector<double> sums(G * G, 0.0);
    std::set<size_t> frames_seen;
    std::map<std::string, double> inter_sums;
    std::map<std::string, size_t> inter_counts;
    for (const auto& r : series.records) {
        if (!member_set.count(r.cell)) continue;
        frames_seen.insert(r.frame);
        if (r.intercellular) {
            // target is "r:<gene>"; source is "l:<gene>@<cell>"
            std::string tgt = r.target.substr(r.target.find(':') + 1);
            std::string src = r.source.substr(r.source.find(':') + 1);
            src = src.substr(0, src.find('@'));
            std::string key = src + "->" + tgt;
            inter_sums[key] += r.beta;
            inter_counts[key] += 1;
            continue;
        }
        int tg = gene_index(r.target);
        int sg = gene_index(r.source);
        if (tg < 0 || sg < 0 || tg == sg) continue;  // gene-gene pairs only, no self
        sums[static_cast<size_t>(sg) * G + static_cast<size_t>(tg)] += r.beta;
    }
    if (frames_seen.empty()) throw NothingToScore("attention series has no records for type " +
                                                  out.type);
    double denom = static_cast<double>(frames_seen.size() * members.size());

    std::set<std::pair<int, int>> truth_edges;
    for (const auto& e : truth.edges) {
        int s = gene_index(e.source), t = gene_index(e.target);
        if (s >= 0 && t >= 0 && s != t) truth_edges.insert({s, t});
    }

    std::vector<double> scores;
    std::vector<char> labels;
    struct Pair {
        int src, tgt;
        double score;
    };
    std::vector<Pair> pairs;
    for (size_t s = 0; s < G; ++s)
        for (size_t t = 0; t < G; ++t) {
            if (s == t) continue;
            double sc = sums[s * G + t] / denom;
            scores.push_back(sc);
            labels.push_back(truth_edges.count({static_cast<int>(s), static_cast<int>(t)})
                                 ? 1
                                 : 0);
            pairs.push_back({static_cast<int>(s), static_cast<int>(t), sc});
            if (sc > 0.0)
                out.mean_beta[genes[s] + "->" + genes[t]] = sc;
        }

    out.auroc = auroc(scores, labels);

    const size_t kk = truth_edges.size();
    if (kk > 0) {
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.tgt != b.tgt) return a.tgt < b.tgt;
            return a.src < b.src;
        });
        size_t hits = 0;
        for (size_t i = 0; i < kk && i < pairs.size(); ++i)
            if (truth_edges.count({pairs[i].src, pairs[i].tgt})) ++hits;
        out.precision_at_k = static_cast<double>(hits) / static_cast<double>(kk);
    }

    size_t correct = 0, counted = 0;
    for (size_t t = 0; t < G; ++t) {
        double best = -1.0;
        int best_src = -1;
        bool any = false;
        for (size_t s = 0; s < G; ++s) {
            if (s == t) continue;
            double sc = sums[s * G + t] / denom;
            if (sc > 0.0) any = true;
            if (sc > best) {
                best = sc;
                best_src = static_cast<int>(s);
            }
        }
        if (!any) {
            out.excluded_genes.push_back(genes[t]);
            continue;
        }
        ++counted;
        out.top1_parent[genes[t]] = genes[static_cast<size_t>(best_src)];
        if (truth_edges.count({best_src, static_cast<int>(t)})) ++correct;
    }
    out.top1_accuracy =
        counted > 0 ? static_cast<double>(correct) / static_cast<double>(counted) : 0.0;

    for (const auto& [key, sum] : inter_sums)
        out.intercellular_mean_beta[key] = sum / static_cast<double>(inter_counts[key]);
    return out;
}

inline RecoveryReport recovery_metrics(const AttentionSeries& series, const Dataset& ds,
                                       const std::map<std::string, GrnSpec>& truths) {
    RecoveryReport report;
    for (size_t k = 0; k < ds.type_names.size(); ++k) {
        auto it = truths.find(ds.type_names[k]);
        if (it == truths.end()) it = truths.find("");
        if (it == truths.end())
            throw SchemaMismatch("no ground-truth GRN for type " + ds.type_names[k]);
        report.per_type.push_back(
            recovery_for_type(series, ds, static_cast<int>(k), it->second));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Plot-ready trajectory table
// ---------------------------------------------------------------------------

inline std::string trajectory_plot_csv(const RolloutResult<double>& pred, const Dataset& obs) {
    std::string out = "cell_type,gene,t,mean_obs,sd_obs,mean_pred\n";
    const size_t G = obs.n_genes();
    for (size_t k = 0; k < obs.type_names.size(); ++k) {
        auto members = obs.cells_of_type(static_cast<int>(k));
        if (members.empty()) continue;
        double n = static_cast<double>(members.size());
        for (size_t g = 0; g < G; ++g)
            for (size_t f = 0; f < pred.frames.size(); ++f) {
                double so = 0.0, so2 = 0.0, sp = 0.0;
                for (size_t c : members) {
                    double v = obs.x(f, c, g);
                    so += v;
                    so2 += v * v;
                    sp += pred.frames[f][c * G + g];
                }
                double mean = so / n;
                double var = std::max(0.0, so2 / n - mean * mean);
                out += obs.type_names[k] + "," + obs.genes[g] + "," +
                       fmt_double(obs.times[f]) + "," + fmt_double(mean) + "," +
                       fmt_double(std::sqrt(var)) + "," + fmt_double(sp / n) + "\n";
            }
    }
    return out;
}

// Population variance of the observations over frames [begin, end).
inline double frame_variance(const Dataset& ds, size_t begin, size_t end) {
    if (end <= begin) throw NothingToScore("empty frame range");
    double s = 0.0, s2 = 0.0, n = 0.0;
    for (size_t f = begin; f < end; ++f)
        for (size_t c = 0; c < ds.n_cells(); ++c)
            for (size_t g = 0; g < ds.n_genes(); ++g) {
                double v = ds.x(f, c, g);
                s += v;
                s2 += v * v;
                n += 1.0;
            }
    double mean = s / n;
    return std::max(0.0, s2 / n - mean * mean);
}

}  // namespace staged
