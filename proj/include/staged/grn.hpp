#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "staged/common.hpp"

namespace staged {

constexpr double kDefaultThreshold = 0.5;
constexpr double kDefaultHill = 2.0;

enum class EdgeKind { Activation, Repression };

inline const char* edge_kind_name(EdgeKind k) {
    return k == EdgeKind::Activation ? "activation" : "repression";
}

inline EdgeKind parse_edge_kind(const std::string& s) {
    if (s == "activation") return EdgeKind::Activation;
    if (s == "repression") return EdgeKind::Repression;
    throw ParseError("unknown edge kind '" + s + "'");
}

struct GrnEdge {
    std::string source;
    std::string target;
    EdgeKind kind = EdgeKind::Activation;
    double rate_constant = 1.0;
    double threshold = kDefaultThreshold;  // activation only
    double hill = kDefaultHill;            // activation only
};

// Per-cell-type regulatory network with kinetic parameters and ligand /
// receptor annotations. Genes are kept sorted; edges sorted by
// (source, target, kind).
struct GrnSpec {
    std::vector<std::string> genes;
    std::vector<GrnEdge> edges;
    std::vector<double> x_max;  // aligned with genes
    std::vector<double> decay;
    std::vector<double> init;
    std::set<std::string> ligands;
    std::set<std::string> receptors;
    std::vector<std::string> warnings;  // load-time notices, not persisted

    int gene_index(const std::string& g) const {
        auto it = std::lower_bound(genes.begin(), genes.end(), g);
        if (it == genes.end() || *it != g) return -1;
        return static_cast<int>(it - genes.begin());
    }
};

struct LrPair {
    std::string ligand;
    std::string receptor;
    EdgeKind kind = EdgeKind::Activation;
    double rate_constant = 1.0;
    double threshold = kDefaultThreshold;
    double hill = kDefaultHill;
};

struct LrCatalog {
    std::vector<LrPair> pairs;  // sorted by (ligand, receptor)

    bool has_pair(const std::string& ligand, const std::string& receptor) const {
        for (const auto& p : pairs)
            if (p.ligand == ligand && p.receptor == receptor) return true;
        return false;
    }
    std::set<std::string> ligand_genes() const {
        std::set<std::string> s;
        for (const auto& p : pairs) s.insert(p.ligand);
        return s;
    }
    std::set<std::string> receptor_genes() const {
        std::set<std::string> s;
        for (const auto& p : pairs) s.insert(p.receptor);
        return s;
    }
};

namespace detail {

using json = nlohmann::ordered_json;

inline json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + what);
    return j;
}

inline double per_gene_value(const json& obj, const std::string& gene, double fallback) {
    if (!obj.is_object()) return fallback;
    auto it = obj.find(gene);
    if (it == obj.end()) return fallback;
    return it->get<double>();
}

inline GrnSpec grn_spec_from_json(const json& j) {
    GrnSpec spec;
    if (!j.contains("genes") || !j["genes"].is_array())
        throw ParseError("GRN spec needs a 'genes' array");
    for (const auto& g : j["genes"]) spec.genes.push_back(g.get<std::string>());
    std::sort(spec.genes.begin(), spec.genes.end());
    if (std::adjacent_find(spec.genes.begin(), spec.genes.end()) != spec.genes.end())
        throw DomainError("duplicate gene name in GRN spec");
    if (spec.genes.empty()) throw DomainError("GRN spec has no genes");

    auto require_gene = [&](const std::string& g, const char* where) {
        if (spec.gene_index(g) < 0)
            throw UnknownGene(std::string(where) + " references unknown gene '" + g + "'");
    };

    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            GrnEdge edge;
            edge.source = e.at("source").get<std::string>();
            edge.target = e.at("target").get<std::string>();
            require_gene(edge.source, "edge");
            require_gene(edge.target, "edge");
            edge.kind = parse_edge_kind(e.value("kind", std::string("activation")));
            edge.rate_constant = e.value("rate_constant", 1.0);
            if (edge.rate_constant < 0.0)
                throw DomainError("negative rate_constant on edge " + edge.source + "->" +
                                  edge.target);
            if (edge.kind == EdgeKind::Activation) {
                edge.threshold = e.value("threshold", kDefaultThreshold);
                edge.hill = e.value("hill", kDefaultHill);
                if (!(edge.threshold > 0.0))
                    throw DomainError("activation threshold must be > 0 on edge " +
                                      edge.source + "->" + edge.target);
                if (edge.hill < 1.0)
                    throw DomainError("hill coefficient must be >= 1 on edge " + edge.source +
                                      "->" + edge.target);
            } else {
                if (e.contains("threshold") || e.contains("hill"))
                    spec.warnings.push_back("repression edge " + edge.source + "->" +
                                            edge.target +
                                            " carries threshold/hill; ignored (repression is linear)");
            }
            spec.edges.push_back(std::move(edge));
        }
    }
    std::sort(spec.edges.begin(), spec.edges.end(), [](const GrnEdge& a, const GrnEdge& b) {
        if (a.source != b.source) return a.source < b.source;
        if (a.target != b.target) return a.target < b.target;
        return a.kind < b.kind;
    });

    const json empty = json::object();
    const json& jx = j.contains("x_max") ? j["x_max"] : empty;
    const json& jd = j.contains("decay") ? j["decay"] : empty;
    const json& ji = j.contains("init") ? j["init"] : empty;
    for (const auto& g : spec.genes) {
        double xm = per_gene_value(jx, g, 1.0);
        double dc = per_gene_value(jd, g, 0.0);
        double x0 = per_gene_value(ji, g, 0.0);
        if (!(xm > 0.0)) throw DomainError("x_max must be > 0 for gene " + g);
        if (dc < 0.0) throw DomainError("decay must be >= 0 for gene " + g);
        if (x0 < 0.0 || x0 > xm)
            throw DomainError("init for gene " + g + " must lie in [0, x_max]");
        spec.x_max.push_back(xm);
        spec.decay.push_back(dc);
        spec.init.push_back(x0);
    }

    if (j.contains("ligands"))
        for (const auto& g : j["ligands"]) {
            std::string name = g.get<std::string>();
            require_gene(name, "ligands");
            spec.ligands.insert(name);
        }
    if (j.contains("receptors"))
        for (const auto& g : j["receptors"]) {
            std::string name = g.get<std::string>();
            require_gene(name, "receptors");
            spec.receptors.insert(name);
        }
    return spec;
}

inline json grn_spec_to_json(const GrnSpec& spec) {
    json j;
    j["genes"] = spec.genes;
    json edges = json::array();
    for (const auto& e : spec.edges) {
        json je;
        je["source"] = e.source;
        je["target"] = e.target;
        je["kind"] = edge_kind_name(e.kind);
        je["rate_constant"] = e.rate_constant;
        if (e.kind == EdgeKind::Activation) {
            je["threshold"] = e.threshold;
            je["hill"] = e.hill;
        }
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    json jx, jd, ji;
    for (size_t i = 0; i < spec.genes.size(); ++i) {
        jx[spec.genes[i]] = spec.x_max[i];
        jd[spec.genes[i]] = spec.decay[i];
        ji[spec.genes[i]] = spec.init[i];
    }
    j["x_max"] = std::move(jx);
    j["decay"] = std::move(jd);
    j["init"] = std::move(ji);
    j["ligands"] = std::vector<std::string>(spec.ligands.begin(), spec.ligands.end());
    j["receptors"] = std::vector<std::string>(spec.receptors.begin(), spec.receptors.end());
    return j;
}

}  // namespace detail

// A GRN file is either a single spec object or {"cell_types": {name: spec}}.
inline std::map<std::string, GrnSpec> parse_grn_specs(const std::string& text) {
    auto j = detail::parse_json(text, "GRN spec");
    std::map<std::string, GrnSpec> out;
    if (j.contains("cell_types")) {
        for (auto& [name, sub] : j["cell_types"].items())
            out[name] = detail::grn_spec_from_json(sub);
        if (out.empty()) throw ParseError("'cell_types' map is empty");
    } else {
        out[""] = detail::grn_spec_from_json(j);
    }
    return out;
}

inline std::map<std::string, GrnSpec> load_grn_specs(const std::string& path) {
    return parse_grn_specs(read_file(path));
}

inline GrnSpec load_grn_spec(const std::string& path) {
    auto specs = load_grn_specs(path);
    if (specs.size() != 1)
        throw ParseError("expected a single GRN spec in " + path + ", found " +
                         std::to_string(specs.size()) + " cell types");
    return specs.begin()->second;
}

inline std::string grn_specs_to_text(const std::map<std::string, GrnSpec>& specs) {
    detail::json j;
    if (specs.size() == 1 && specs.begin()->first.empty()) {
        j = detail::grn_spec_to_json(specs.begin()->second);
    } else {
        detail::json types;
        for (const auto& [name, spec] : specs) types[name] = detail::grn_spec_to_json(spec);
        j["cell_types"] = std::move(types);
    }
    return j.dump(2) + "\n";
}

inline void save_grn_specs(const std::map<std::string, GrnSpec>& specs,
                           const std::string& path) {
    write_file(path, grn_specs_to_text(specs));
}

inline LrCatalog parse_lr_catalog(const std::string& text) {
    auto j = detail::parse_json(text, "ligand-receptor catalog");
    LrCatalog cat;
    if (!j.contains("pairs") || !j["pairs"].is_array())
        throw ParseError("ligand-receptor catalog needs a 'pairs' array");
    for (const auto& p : j["pairs"]) {
        LrPair pair;
        pair.ligand = p.at("ligand").get<std::string>();
        pair.receptor = p.at("receptor").get<std::string>();
        pair.kind = parse_edge_kind(p.value("kind", std::string("activation")));
        pair.rate_constant = p.value("rate_constant", 1.0);
        pair.threshold = p.value("threshold", kDefaultThreshold);
        pair.hill = p.value("hill", kDefaultHill);
        if (pair.rate_constant < 0.0)
            throw DomainError("negative rate_constant on pair " + pair.ligand + "->" +
                              pair.receptor);
        cat.pairs.push_back(std::move(pair));
    }
    std::sort(cat.pairs.begin(), cat.pairs.end(), [](const LrPair& a, const LrPair& b) {
        if (a.ligand != b.ligand) return a.ligand < b.ligand;
        return a.receptor < b.receptor;
    });
    return cat;
}

inline LrCatalog load_lr_catalog(const std::string& path) {
    return parse_lr_catalog(read_file(path));
}

inline std::string lr_catalog_to_text(const LrCatalog& cat) {
    detail::json j;
    detail::json pairs = detail::json::array();
    for (const auto& p : cat.pairs) {
        detail::json jp;
        jp["ligand"] = p.ligand;
        jp["receptor"] = p.receptor;
        jp["kind"] = edge_kind_name(p.kind);
        jp["rate_constant"] = p.rate_constant;
        jp["threshold"] = p.threshold;
        jp["hill"] = p.hill;
        pairs.push_back(std::move(jp));
    }
    j["pairs"] = std::move(pairs);
    return j.dump(2) + "\n";
}

inline void save_lr_catalog(const LrCatalog& cat, const std::string& path) {
    write_file(path, lr_catalog_to_text(cat));
}

}  // namespace staged
