#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "staged/config.hpp"
#include "staged/dataset.hpp"
#include "staged/grn.hpp"
#include "staged/model.hpp"

namespace staged {

// Everything needed to reproduce a rollout: parameters, config echo, seed,
// the prior GRNs and catalog the model was built from, and the per-gene
// normalization scales of the training data.
struct Checkpoint {
    ModelParams params;
    RunConfig config;
    uint64_t seed = 0;
    std::map<std::string, GrnSpec> priors;
    LrCatalog catalog;
    bool normalize = false;
    GeneScales scales;  // aligned with params.meta.genes when normalize
};

inline std::string checkpoint_to_text(const Checkpoint& cp) {
    using detail::json;
    json j;
    j["format"] = "staged-checkpoint";
    j["version"] = 1;
    j["seed"] = cp.seed;
    j["config"] = run_config_to_text(cp.config);
    j["genes"] = cp.params.meta.genes;
    j["cell_types"] = cp.params.meta.type_names;
    j["attn_hidden"] = cp.params.meta.d;
    j["mlp_hidden"] = std::vector<int>{cp.params.meta.h1, cp.params.meta.h2};
    j["scalar_messages"] = cp.params.meta.scalar_messages;
    j["normalize"] = cp.normalize;
    if (cp.normalize) j["gene_scales"] = cp.scales.scale;
    json priors;
    for (const auto& [name, spec] : cp.priors) priors[name] = detail::grn_spec_to_json(spec);
    j["priors"] = std::move(priors);
    j["lr_catalog"] = json::parse(lr_catalog_to_text(cp.catalog));
    json params = json::array();
    for (const auto& t : cp.params.per_type) {
        json jt;
        jt["W"] = t.W;
        jt["a"] = t.a;
        jt["W1"] = t.W1;
        jt["b1"] = t.b1;
        jt["W2"] = t.W2;
        jt["b2"] = t.b2;
        jt["W3"] = t.W3;
        jt["b3"] = t.b3;
        params.push_back(std::move(jt));
    }
    j["params"] = std::move(params);
    return j.dump(2) + "\n";
}

inline void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    write_file(path, checkpoint_to_text(cp));
}

inline Checkpoint parse_checkpoint(const std::string& text) {
    using detail::json;
    json j = detail::parse_json(text, "checkpoint");
    if (j.value("format", std::string{}) != "staged-checkpoint")
        throw ParseError("not a staged checkpoint file");
    Checkpoint cp;
    cp.seed = j.at("seed").get<uint64_t>();
    cp.config = parse_run_config(j.at("config").get<std::string>());
    cp.params.meta.genes = j.at("genes").get<std::vector<std::string>>();
    cp.params.meta.type_names = j.at("cell_types").get<std::vector<std::string>>();
    cp.params.meta.d = j.at("attn_hidden").get<int>();
    auto mlp = j.at("mlp_hidden").get<std::vector<int>>();
    if (mlp.size() != 2) throw ParseError("mlp_hidden must have two entries");
    cp.params.meta.h1 = mlp[0];
    cp.params.meta.h2 = mlp[1];
    cp.params.meta.scalar_messages = j.value("scalar_messages", false);
    cp.normalize = j.value("normalize", false);
    if (cp.normalize) {
        cp.scales.scale = j.at("gene_scales").get<std::vector<double>>();
        if (cp.scales.scale.size() != cp.params.meta.genes.size())
            throw SchemaMismatch("gene_scales length mismatch");
    }
    for (auto& [name, sub] : j.at("priors").items())
        cp.priors[name] = detail::grn_spec_from_json(sub);
    cp.catalog = parse_lr_catalog(j.at("lr_catalog").dump());
    for (const auto& jt : j.at("params")) {
        TypeTensors<double> t;
        t.W = jt.at("W").get<std::vector<double>>();
        t.a = jt.at("a").get<std::vector<double>>();
        t.W1 = jt.at("W1").get<std::vector<double>>();
        t.b1 = jt.at("b1").get<std::vector<double>>();
        t.W2 = jt.at("W2").get<std::vector<double>>();
        t.b2 = jt.at("b2").get<std::vector<double>>();
        t.W3 = jt.at("W3").get<std::vector<double>>();
        t.b3 = jt.at("b3").get<std::vector<double>>();
        cp.params.per_type.push_back(std::move(t));
    }
    if (cp.params.per_type.size() != cp.params.meta.n_types())
        throw SchemaMismatch("checkpoint parameter count does not match cell types");
    return cp;
}

inline Checkpoint load_checkpoint(const std::string& path) {
    return parse_checkpoint(read_file(path));
}

inline StagedModel model_from_checkpoint(const Checkpoint& cp) {
    return StagedModel(cp.params.meta, cp.priors, cp.catalog, cp.config);
}

}  // namespace staged
