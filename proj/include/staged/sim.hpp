#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "staged/common.hpp"
#include "staged/config.hpp"
#include "staged/dataset.hpp"
#include "staged/grn.hpp"
#include "staged/spatial.hpp"

namespace staged {

struct Placement {
    std::string cell;
    std::string type;
    Vec2 position;
};

inline const char* kPlacementHeader = "cell_id,cell_type,x,y";

inline std::vector<Placement> parse_placements_csv(const std::string& text) {
    std::vector<Placement> out;
    size_t start = 0, line_no = 0;
    bool saw_header = false;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line = trim(std::string_view(text).substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kPlacementHeader)
                throw ParseError("expected placement header '" +
                                 std::string(kPlacementHeader) + "'");
            saw_header = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 4)
            throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
        out.push_back(
            {f[0], f[1], Vec2{parse_double(f[2], "x"), parse_double(f[3], "y")}});
    }
    if (!saw_header) throw ParseError("empty placements file");
    return out;
}

inline std::vector<Placement> load_placements(const std::string& path) {
    return parse_placements_csv(read_file(path));
}

inline std::string placements_to_csv(const std::vector<Placement>& ps) {
    std::string out = kPlacementHeader;
    out += '\n';
    for (const auto& p : ps)
        out += p.cell + "," + p.type + "," + fmt_double(p.position.x) + "," +
               fmt_double(p.position.y) + "\n";
    return out;
}

// The coupled multicellular ODE system: one species per (cell, gene), prior
// intracellular kinetics plus ligand->receptor edges between spatial
// neighbors. Flattened to per-species activator/repressor lists so the
// derivative is a plain loop.
struct CoupledModel {
    struct Activator {
        size_t src;
        double k, theta, hill;
    };
    struct Repressor {
        size_t src;
        double k;
    };

    std::vector<std::string> cell_ids;   // canonical sorted
    std::vector<std::string> type_names;
    std::vector<int> cell_type;          // per cell
    std::vector<Vec2> positions;         // static during one run
    std::vector<std::string> genes;      // shared gene list (sorted)

    size_t n_species = 0;                // cells * genes
    std::vector<double> x_max, decay, init;          // per species
    std::vector<std::vector<Activator>> activators;  // per species
    std::vector<std::vector<Repressor>> repressors;
    std::vector<std::pair<size_t, size_t>> inter_edges;  // (src, dst) species

    size_t species(size_t cell, size_t gene) const { return cell * genes.size() + gene; }
    size_t cell_of(size_t sp) const { return sp / genes.size(); }
    size_t gene_of(size_t sp) const { return sp % genes.size(); }
};

struct SimState {
    std::vector<double> x;
    double t = 0.0;
};

inline double hill_activation(double x, double k, double theta, double n) {
    double xn = std::pow(x, n);
    return k * xn / (std::pow(theta, n) + xn);
}

// Net regulatory input: Hill activator terms minus linear repressor terms,
// cross-cell regulators included through the flattened lists.
inline double regulatory_input(const CoupledModel& m, size_t sp, const SimState& s) {
    double r = 0.0;
    for (const auto& a : m.activators[sp])
        r += hill_activation(s.x[a.src], a.k, a.theta, a.hill);
    for (const auto& rep : m.repressors[sp]) r -= rep.k * s.x[rep.src];
    return r;
}

// dx/dt with saturated upregulation, linear downregulation and a passive
// decay gate active when |R| < 1. The decay term is applied with a negative
// sign; `sign_as_printed` restores the published positive form.
inline double gene_derivative(const CoupledModel& m, size_t sp, const SimState& s,
                              bool sign_as_printed = false) {
    const double r = regulatory_input(m, sp, s);
    const double x = s.x[sp];
    const double up = std::max(r, 0.0) * (1.0 - x / m.x_max[sp]);
    const double down = std::max(-r, 0.0) * x;
    const double gate = std::max(1.0 - std::abs(r), 0.0) * m.decay[sp] * x;
    return sign_as_printed ? up - down + gate : up - down - gate;
}

inline CoupledModel assemble_tissue(const std::map<std::string, GrnSpec>& type_specs,
                                    const std::vector<Placement>& placements,
                                    const LrCatalog& catalog,
                                    const Neighborhood& neighborhood) {
    if (placements.empty()) throw DomainError("no placements");
    CoupledModel m;

    std::vector<Placement> sorted = placements;
    std::sort(sorted.begin(), sorted.end(),
              [](const Placement& a, const Placement& b) { return a.cell < b.cell; });
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].cell == sorted[i + 1].cell)
            throw DuplicateEntry("duplicate cell id " + sorted[i].cell);

    auto spec_for = [&](const std::string& type) -> const GrnSpec& {
        auto it = type_specs.find(type);
        if (it != type_specs.end()) return it->second;
        it = type_specs.find("");
        if (it != type_specs.end()) return it->second;
        throw DomainError("no GRN spec for cell type '" + type + "'");
    };

    std::set<std::string> type_set;
    for (const auto& p : sorted) type_set.insert(p.type);
    m.type_names.assign(type_set.begin(), type_set.end());

    // All used specs must agree on the gene list so the exported Dataset grid
    // is complete.
    const GrnSpec& first_spec = spec_for(sorted.front().type);
    m.genes = first_spec.genes;
    for (const auto& tn : m.type_names) {
        const GrnSpec& sp = spec_for(tn);
        if (sp.genes != m.genes)
            throw DomainError("cell types disagree on the gene list; the simulator "
                              "exports one complete grid");
    }

    std::set<std::string> union_genes(m.genes.begin(), m.genes.end());
    for (const auto& p : catalog.pairs) {
        if (!union_genes.count(p.ligand))
            throw UnknownGene("catalog ligand '" + p.ligand + "' absent from specs");
        if (!union_genes.count(p.receptor))
            throw UnknownGene("catalog receptor '" + p.receptor + "' absent from specs");
    }

    const size_t C = sorted.size(), G = m.genes.size();
    m.cell_ids.reserve(C);
    for (const auto& p : sorted) {
        m.cell_ids.push_back(p.cell);
        m.positions.push_back(p.position);
        m.cell_type.push_back(static_cast<int>(
            std::lower_bound(m.type_names.begin(), m.type_names.end(), p.type) -
            m.type_names.begin()));
    }
    m.n_species = C * G;
    m.x_max.resize(m.n_species);
    m.decay.resize(m.n_species);
    m.init.resize(m.n_species);
    m.activators.resize(m.n_species);
    m.repressors.resize(m.n_species);

    for (size_t c = 0; c < C; ++c) {
        const GrnSpec& sp = spec_for(sorted[c].type);
        for (size_t g = 0; g < G; ++g) {
            size_t id = m.species(c, g);
            m.x_max[id] = sp.x_max[g];
            m.decay[id] = sp.decay[g];
            m.init[id] = sp.init[g];
        }
        for (const auto& e : sp.edges) {
            size_t src = m.species(c, static_cast<size_t>(sp.gene_index(e.source)));
            size_t dst = m.species(c, static_cast<size_t>(sp.gene_index(e.target)));
            if (e.kind == EdgeKind::Activation)
                m.activators[dst].push_back({src, e.rate_constant, e.threshold, e.hill});
            else
                m.repressors[dst].push_back({src, e.rate_constant});
        }
    }

    // Ligand->receptor edges from every spatial neighbor, for every catalog
    // pair annotated on both endpoints.
    for (size_t c = 0; c < C; ++c) {
        const GrnSpec& spec_c = spec_for(sorted[c].type);
        auto neigh = spatial_neighbors(m.positions, c, neighborhood);
        for (size_t s : neigh) {
            const GrnSpec& spec_s = spec_for(sorted[s].type);
            for (const auto& pair : catalog.pairs) {
                if (!spec_s.ligands.count(pair.ligand)) continue;
                if (!spec_c.receptors.count(pair.receptor)) continue;
                size_t src =
                    m.species(s, static_cast<size_t>(spec_s.gene_index(pair.ligand)));
                size_t dst =
                    m.species(c, static_cast<size_t>(spec_c.gene_index(pair.receptor)));
                if (pair.kind == EdgeKind::Activation)
                    m.activators[dst].push_back(
                        {src, pair.rate_constant, pair.threshold, pair.hill});
                else
                    m.repressors[dst].push_back({src, pair.rate_constant});
                m.inter_edges.emplace_back(src, dst);
            }
        }
    }
    return m;
}

struct SimOptions {
    Integrator integrator = Integrator::Rk4;
    double dt = 0.01;
    double noise_sigma = 0.0;
    uint64_t seed = 0;
    bool eq2_sign_as_printed = false;
    int workers = 1;
};

namespace detail {

inline void coupled_derivative(const CoupledModel& m, const SimState& s, bool sign_as_printed,
                               int workers, std::vector<double>& out) {
    out.resize(m.n_species);
    parallel_for(m.n_species, workers, [&](size_t b, size_t e) {
        for (size_t sp = b; sp < e; ++sp) out[sp] = gene_derivative(m, sp, s, sign_as_printed);
    });
}

inline void check_finite(const CoupledModel& m, const SimState& s) {
    for (size_t sp = 0; sp < m.n_species; ++sp)
        if (!std::isfinite(s.x[sp]) || std::abs(s.x[sp]) > 1e12)
            throw NumericalBlowup("non-finite state at t=" + fmt_double(s.t) + " for (" +
                                  m.cell_ids[m.cell_of(sp)] + "," + m.genes[m.gene_of(sp)] +
                                  ")");
}

}  // namespace detail

// Fixed-step deterministic integration over a uniform frame grid, then i.i.d.
// Gaussian observation noise clamped at zero. dt must divide the frame
// spacing. Deterministic given the seed.
inline Dataset simulate(const CoupledModel& m, const std::vector<double>& t_grid,
                        const SimOptions& opt) {
    if (t_grid.size() < 2) throw DomainError("simulation grid needs at least 2 frames");
    detail::check_uniform_grid(t_grid);
    const double h = t_grid[1] - t_grid[0];
    if (!(opt.dt > 0.0)) throw DomainError("integration dt must be > 0");
    const double sub_d = h / opt.dt;
    const size_t n_sub = static_cast<size_t>(std::llround(sub_d));
    if (n_sub < 1 || std::abs(static_cast<double>(n_sub) * opt.dt - h) > 1e-9 * std::max(1.0, h))
        throw DomainError("dt must divide the frame spacing (" + fmt_double(opt.dt) +
                          " vs " + fmt_double(h) + ")");

    SimState s;
    s.x = m.init;
    s.t = t_grid[0];
    const size_t T = t_grid.size();
    std::vector<double> frames(T * m.n_species);
    std::copy(s.x.begin(), s.x.end(), frames.begin());

    std::vector<double> k1, k2, k3, k4;
    SimState stage;
    for (size_t f = 1; f < T; ++f) {
        for (size_t step = 0; step < n_sub; ++step) {
            if (opt.integrator == Integrator::Euler) {
                detail::coupled_derivative(m, s, opt.eq2_sign_as_printed, opt.workers, k1);
                for (size_t i = 0; i < m.n_species; ++i) s.x[i] += opt.dt * k1[i];
            } else {
                detail::coupled_derivative(m, s, opt.eq2_sign_as_printed, opt.workers, k1);
                stage = s;
                for (size_t i = 0; i < m.n_species; ++i)
                    stage.x[i] = s.x[i] + 0.5 * opt.dt * k1[i];
                stage.t = s.t + 0.5 * opt.dt;
                detail::coupled_derivative(m, stage, opt.eq2_sign_as_printed, opt.workers, k2);
                for (size_t i = 0; i < m.n_species; ++i)
                    stage.x[i] = s.x[i] + 0.5 * opt.dt * k2[i];
                detail::coupled_derivative(m, stage, opt.eq2_sign_as_printed, opt.workers, k3);
                for (size_t i = 0; i < m.n_species; ++i)
                    stage.x[i] = s.x[i] + opt.dt * k3[i];
                stage.t = s.t + opt.dt;
                detail::coupled_derivative(m, stage, opt.eq2_sign_as_printed, opt.workers, k4);
                for (size_t i = 0; i < m.n_species; ++i)
                    s.x[i] += opt.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            s.t += opt.dt;
            detail::check_finite(m, s);
        }
        s.t = t_grid[f];  // avoid drift from repeated addition
        std::copy(s.x.begin(), s.x.end(), frames.begin() + static_cast<long>(f * m.n_species));
    }

    if (opt.noise_sigma > 0.0) {
        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> noise(0.0, opt.noise_sigma);
        for (size_t f = 0; f < T; ++f)
            for (size_t sp = 0; sp < m.n_species; ++sp) {
                double& v = frames[f * m.n_species + sp];
                v = std::max(0.0, v + noise(rng));
            }
    }

    DatasetBuilder b;
    for (size_t f = 0; f < T; ++f)
        for (size_t c = 0; c < m.cell_ids.size(); ++c)
            for (size_t g = 0; g < m.genes.size(); ++g)
                b.add_row({m.cell_ids[c],
                           m.type_names[static_cast<size_t>(m.cell_type[c])], t_grid[f],
                           m.positions[c].x, m.positions[c].y, m.genes[g],
                           frames[f * m.n_species + m.species(c, g)]});
    return b.build();
}

inline std::vector<double> make_time_grid(double t0, double t_end, double frame_dt) {
    if (!(frame_dt > 0.0) || !(t_end > t0)) throw DomainError("bad time grid parameters");
    std::vector<double> grid;
    size_t n = static_cast<size_t>(std::llround((t_end - t0) / frame_dt));
    if (std::abs(t0 + static_cast<double>(n) * frame_dt - t_end) > 1e-9)
        throw DomainError("frame_dt must divide t_end - t0");
    for (size_t i = 0; i <= n; ++i) grid.push_back(t0 + static_cast<double>(i) * frame_dt);
    return grid;
}

}  // namespace staged
