#pragma once

#include <string>
#include <vector>

#include "staged/common.hpp"
#include "staged/config.hpp"
#include "staged/grn.hpp"
#include "staged/spatial.hpp"

namespace staged {

enum class NodeKind { Gene, Receptor, OutputLigand, InputLigand };

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Gene: return "gene";
        case NodeKind::Receptor: return "receptor";
        case NodeKind::OutputLigand: return "output_ligand";
        case NodeKind::InputLigand: return "input_ligand";
    }
    return "?";
}

enum class GraphEdgeKind {
    Prior,           // gene -> gene from the prior GRN
    GeneToReceptor,  // g_r -> r_{g_r}
    ReceptorToGene,  // r_{g_r} -> every gene (global downstream effect)
    GeneToLigand,    // g_l -> l_{g_l}
    Intercellular,   // l_{c'}^{g_l} -> r_{g_r}
};

inline const char* graph_edge_kind_name(GraphEdgeKind k) {
    switch (k) {
        case GraphEdgeKind::Prior: return "prior";
        case GraphEdgeKind::GeneToReceptor: return "gene_to_receptor";
        case GraphEdgeKind::ReceptorToGene: return "receptor_to_gene";
        case GraphEdgeKind::GeneToLigand: return "gene_to_ligand";
        case GraphEdgeKind::Intercellular: return "intercellular";
    }
    return "?";
}

struct GraphNode {
    NodeKind kind;
    int gene;      // index into the shared gene list
    int neighbor;  // source cell index for InputLigand, else -1
    std::string name;
};

struct GraphEdge {
    int src;
    int dst;
    GraphEdgeKind kind;
};

// A cell's prior GRN augmented with receptor, output-ligand and (after
// attachment) per-neighbor input-ligand nodes. The skeleton depends only on
// the cell type; self-loops are an attention-time augmentation, not edges.
struct AugmentedCellGraph {
    int cell = -1;  // owning cell index once attached, -1 for a bare skeleton
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    std::vector<int> gene_nodes;              // gene index -> node index
    std::vector<int> receptor_nodes;          // gene index -> node index or -1
    std::vector<std::vector<int>> in_edges;   // node -> edge indices, insertion order
    size_t skeleton_node_count = 0;
    size_t skeleton_edge_count = 0;

    int add_node(NodeKind kind, int gene, int neighbor, std::string name) {
        nodes.push_back(GraphNode{kind, gene, neighbor, std::move(name)});
        in_edges.emplace_back();
        return static_cast<int>(nodes.size()) - 1;
    }
    void add_edge(int src, int dst, GraphEdgeKind kind) {
        edges.push_back(GraphEdge{src, dst, kind});
        in_edges[static_cast<size_t>(dst)].push_back(static_cast<int>(edges.size()) - 1);
    }
    int find_node(const std::string& name) const {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

// Algorithm step 1: gene nodes and prior edges, one receptor node per
// annotated receptor gene wired from its gene and broadcast to every gene,
// one output-ligand node per annotated ligand gene.
inline AugmentedCellGraph build_cell_graph(const GrnSpec& grn, const LrCatalog& catalog) {
    (void)catalog;  // skeleton shape depends only on the spec annotations
    AugmentedCellGraph g;
    const size_t G = grn.genes.size();
    g.gene_nodes.resize(G);
    g.receptor_nodes.assign(G, -1);
    for (size_t i = 0; i < G; ++i)
        g.gene_nodes[i] = g.add_node(NodeKind::Gene, static_cast<int>(i), -1, grn.genes[i]);
    for (const auto& e : grn.edges)
        g.add_edge(g.gene_nodes[static_cast<size_t>(grn.gene_index(e.source))],
                   g.gene_nodes[static_cast<size_t>(grn.gene_index(e.target))],
                   GraphEdgeKind::Prior);
    for (const auto& gr : grn.receptors) {
        int gi = grn.gene_index(gr);
        int r = g.add_node(NodeKind::Receptor, gi, -1, "r:" + gr);
        g.receptor_nodes[static_cast<size_t>(gi)] = r;
        g.add_edge(g.gene_nodes[static_cast<size_t>(gi)], r, GraphEdgeKind::GeneToReceptor);
        for (size_t i = 0; i < G; ++i)
            g.add_edge(r, g.gene_nodes[i], GraphEdgeKind::ReceptorToGene);
    }
    for (const auto& gl : grn.ligands) {
        int gi = grn.gene_index(gl);
        int l = g.add_node(NodeKind::OutputLigand, gi, -1, "l:" + gl);
        g.add_edge(g.gene_nodes[static_cast<size_t>(gi)], l, GraphEdgeKind::GeneToLigand);
    }
    g.skeleton_node_count = g.nodes.size();
    g.skeleton_edge_count = g.edges.size();
    return g;
}

// Algorithm step 3 attachment: one input-ligand node per (neighbor, catalog
// ligand annotated in the neighbor's spec), wired into this cell's matching
// receptor nodes. Neighbors are processed in canonical (sorted) order.
inline AugmentedCellGraph attach_neighbor_ligands(
    const AugmentedCellGraph& skeleton, const GrnSpec& own_spec,
    const std::vector<size_t>& neighbors, const std::vector<const GrnSpec*>& neighbor_specs,
    const std::vector<std::string>& cell_ids, const LrCatalog& catalog) {
    if (neighbors.size() != neighbor_specs.size())
        throw DomainError("neighbor spec list length mismatch");
    AugmentedCellGraph g = skeleton;
    std::vector<size_t> order(neighbors.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return neighbors[a] < neighbors[b]; });
    for (size_t oi : order) {
        size_t nb = neighbors[oi];
        const GrnSpec& nspec = *neighbor_specs[oi];
        int current_node = -1;
        std::string current_ligand;
        for (const auto& pair : catalog.pairs) {  // sorted by (ligand, receptor)
            if (!nspec.ligands.count(pair.ligand)) continue;
            int lg = nspec.gene_index(pair.ligand);
            if (lg < 0) continue;
            if (pair.ligand != current_ligand) {
                current_ligand = pair.ligand;
                current_node = g.add_node(NodeKind::InputLigand, lg, static_cast<int>(nb),
                                          "l:" + pair.ligand + "@" + cell_ids[nb]);
            }
            if (!own_spec.receptors.count(pair.receptor)) continue;
            int rg = own_spec.gene_index(pair.receptor);
            if (rg < 0) continue;
            int rnode = g.receptor_nodes[static_cast<size_t>(rg)];
            if (rnode < 0) continue;
            g.add_edge(current_node, rnode, GraphEdgeKind::Intercellular);
        }
    }
    return g;
}

// Algorithm step 3 feature assignment. history[t] is a flat [cell * G + gene]
// frame; t and the lags are in grid steps.
template <class S>
std::vector<S> assign_lagged_features(const std::vector<std::vector<S>>& history,
                                      size_t n_genes, size_t own_cell,
                                      const AugmentedCellGraph& g, int t,
                                      const LagConfig& lags) {
    if (t < lags.warmup())
        throw WarmupViolation("t=" + std::to_string(t) + " is inside the warm-up period (" +
                              std::to_string(lags.warmup()) + ")");
    if (static_cast<size_t>(t) >= history.size())
        throw DomainError("feature time beyond history");
    std::vector<S> feats;
    feats.reserve(g.nodes.size());
    auto at = [&](int tt, size_t cell, int gene) -> const S& {
        return history[static_cast<size_t>(tt)][cell * n_genes + static_cast<size_t>(gene)];
    };
    for (const auto& node : g.nodes) {
        switch (node.kind) {
            case NodeKind::Gene:
                feats.push_back(at(t - lags.gg, own_cell, node.gene));
                break;
            case NodeKind::OutputLigand:
                feats.push_back(at(t - lags.gl, own_cell, node.gene));
                break;
            case NodeKind::Receptor:
                feats.push_back(at(t - lags.rg, own_cell, node.gene));
                break;
            case NodeKind::InputLigand:
                feats.push_back(at(t - lags.lr, static_cast<size_t>(node.neighbor), node.gene));
                break;
        }
    }
    return feats;
}

inline std::string graph_to_edge_csv(const AugmentedCellGraph& g) {
    std::string out = "src,dst,kind\n";
    for (const auto& e : g.edges)
        out += g.nodes[static_cast<size_t>(e.src)].name + "," +
               g.nodes[static_cast<size_t>(e.dst)].name + "," + graph_edge_kind_name(e.kind) +
               "\n";
    return out;
}

}  // namespace staged
