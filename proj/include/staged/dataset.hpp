#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "staged/common.hpp"

namespace staged {

// Spatiotemporal expression table on a complete (cell, gene, time) grid with
// per-(cell, time) 2-D positions. Cells, genes and times are canonicalized
// (lexicographic cells/genes, ascending times); immutable after construction.
struct Dataset {
    std::vector<std::string> cells;
    std::vector<std::string> genes;
    std::vector<double> times;           // uniform ascending grid
    std::vector<std::string> type_names; // sorted type ids
    std::vector<int> cell_type;          // cell index -> type index

    std::vector<double> expr;  // [t][c][g]
    std::vector<Vec2> pos;     // [t][c]

    size_t n_cells() const { return cells.size(); }
    size_t n_genes() const { return genes.size(); }
    size_t n_times() const { return times.size(); }

    size_t eidx(size_t t, size_t c, size_t g) const {
        return (t * cells.size() + c) * genes.size() + g;
    }
    double x(size_t t, size_t c, size_t g) const { return expr[eidx(t, c, g)]; }
    double& x(size_t t, size_t c, size_t g) { return expr[eidx(t, c, g)]; }
    const Vec2& position(size_t t, size_t c) const { return pos[t * cells.size() + c]; }
    Vec2& position(size_t t, size_t c) { return pos[t * cells.size() + c]; }

    double grid_step() const { return times[1] - times[0]; }

    const std::string& type_name_of(size_t c) const {
        return type_names[static_cast<size_t>(cell_type[c])];
    }

    std::vector<size_t> cells_of_type(int k) const {
        std::vector<size_t> out;
        for (size_t c = 0; c < cells.size(); ++c)
            if (cell_type[c] == k) out.push_back(c);
        return out;
    }
};

namespace detail {

struct TrajRow {
    std::string cell;
    std::string type;
    double t;
    double px;
    double py;
    std::string gene;
    double value;
};

inline void check_uniform_grid(const std::vector<double>& times) {
    if (times.size() < 2) throw DomainError("time grid needs at least 2 points");
    double h = times[1] - times[0];
    if (!(h > 0.0)) throw DomainError("time grid must be strictly increasing");
    for (size_t i = 1; i + 1 < times.size(); ++i) {
        double d = times[i + 1] - times[i];
        if (std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw DomainError("non-uniform time grid: step " + fmt_double(d) +
                              " at t=" + fmt_double(times[i]) + " vs " + fmt_double(h));
    }
}

}  // namespace detail

// Assembles rows into a canonical Dataset, enforcing the grid invariants.
class DatasetBuilder {
public:
    void add_row(detail::TrajRow row) {
        if (!std::isfinite(row.value)) throw DomainError("non-finite expression value");
        if (row.value < 0.0)
            throw DomainError("negative expression for (" + row.cell + "," + row.gene +
                              ",t=" + fmt_double(row.t) + ")");
        if (!std::isfinite(row.t) || !std::isfinite(row.px) || !std::isfinite(row.py))
            throw DomainError("non-finite time or position");
        rows_.push_back(std::move(row));
    }

    Dataset build() const {
        if (rows_.empty()) throw DomainError("empty trajectory data");
        Dataset ds;
        std::set<std::string> cell_set, gene_set, type_set;
        std::set<double> time_set;
        for (const auto& r : rows_) {
            cell_set.insert(r.cell);
            gene_set.insert(r.gene);
            type_set.insert(r.type);
            time_set.insert(r.t);
        }
        ds.cells.assign(cell_set.begin(), cell_set.end());
        ds.genes.assign(gene_set.begin(), gene_set.end());
        ds.times.assign(time_set.begin(), time_set.end());
        ds.type_names.assign(type_set.begin(), type_set.end());
        detail::check_uniform_grid(ds.times);

        std::unordered_map<std::string, size_t> cid, gid;
        std::unordered_map<std::string, int> tid;
        for (size_t i = 0; i < ds.cells.size(); ++i) cid[ds.cells[i]] = i;
        for (size_t i = 0; i < ds.genes.size(); ++i) gid[ds.genes[i]] = i;
        for (size_t i = 0; i < ds.type_names.size(); ++i)
            tid[ds.type_names[i]] = static_cast<int>(i);
        std::map<double, size_t> timeid;
        for (size_t i = 0; i < ds.times.size(); ++i) timeid[ds.times[i]] = i;

        const size_t C = ds.cells.size(), G = ds.genes.size(), T = ds.times.size();
        ds.cell_type.assign(C, -1);
        ds.expr.assign(T * C * G, 0.0);
        ds.pos.assign(T * C, Vec2{});
        std::vector<char> seen(T * C * G, 0), pos_seen(T * C, 0);

        for (const auto& r : rows_) {
            size_t c = cid.at(r.cell), g = gid.at(r.gene), t = timeid.at(r.t);
            int k = tid.at(r.type);
            if (ds.cell_type[c] != -1 && ds.cell_type[c] != k)
                throw DomainError("conflicting cell_type for cell " + r.cell);
            ds.cell_type[c] = k;
            size_t ei = ds.eidx(t, c, g);
            if (seen[ei])
                throw DuplicateEntry("duplicate entry (" + r.cell + "," + r.gene +
                                     ",t=" + fmt_double(r.t) + ")");
            seen[ei] = 1;
            ds.expr[ei] = r.value;
            size_t pi = t * C + c;
            Vec2 p{r.px, r.py};
            if (pos_seen[pi]) {
                if (ds.pos[pi].x != p.x || ds.pos[pi].y != p.y)
                    throw DomainError("conflicting position for cell " + r.cell +
                                      " at t=" + fmt_double(r.t));
            } else {
                ds.pos[pi] = p;
                pos_seen[pi] = 1;
            }
        }

        for (size_t t = 0; t < T; ++t)
            for (size_t c = 0; c < C; ++c)
                for (size_t g = 0; g < G; ++g)
                    if (!seen[ds.eidx(t, c, g)])
                        throw IncompleteGrid("missing entry (" + ds.cells[c] + "," +
                                             ds.genes[g] + ",t=" + fmt_double(ds.times[t]) +
                                             ")");
        return ds;
    }

private:
    std::vector<detail::TrajRow> rows_;
};

inline const char* kTrajHeader = "cell_id,cell_type,t,x,y,gene,value";

inline Dataset parse_dataset_csv(const std::string& text) {
    DatasetBuilder b;
    size_t line_no = 0;
    size_t start = 0;
    bool saw_header = false;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line = trim(std::string_view(text).substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kTrajHeader)
                throw ParseError("expected trajectory header '" + std::string(kTrajHeader) +
                                 "', got '" + std::string(line) + "'");
            saw_header = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 7)
            throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                             std::to_string(f.size()));
        detail::TrajRow r;
        r.cell = f[0];
        r.type = f[1];
        r.t = parse_double(f[2], "t");
        r.px = parse_double(f[3], "x");
        r.py = parse_double(f[4], "y");
        r.gene = f[5];
        r.value = parse_double(f[6], "value");
        b.add_row(std::move(r));
    }
    if (!saw_header) throw ParseError("empty trajectory file");
    return b.build();
}

inline Dataset load_dataset(const std::string& path) {
    return parse_dataset_csv(read_file(path));
}

inline std::string dataset_to_csv(const Dataset& ds) {
    std::string out = kTrajHeader;
    out += '\n';
    for (size_t c = 0; c < ds.n_cells(); ++c) {
        const std::string& type = ds.type_name_of(c);
        for (size_t t = 0; t < ds.n_times(); ++t) {
            const Vec2& p = ds.position(t, c);
            for (size_t g = 0; g < ds.n_genes(); ++g) {
                out += ds.cells[c];
                out += ',';
                out += type;
                out += ',';
                out += fmt_double(ds.times[t]);
                out += ',';
                out += fmt_double(p.x);
                out += ',';
                out += fmt_double(p.y);
                out += ',';
                out += ds.genes[g];
                out += ',';
                out += fmt_double(ds.x(t, c, g));
                out += '\n';
            }
        }
    }
    return out;
}

inline void save_dataset(const Dataset& ds, const std::string& path) {
    write_file(path, dataset_to_csv(ds));
}

// Rebuild through the canonical constructor; idempotent by construction.
inline Dataset canonicalize(const Dataset& ds) {
    DatasetBuilder b;
    for (size_t c = 0; c < ds.n_cells(); ++c)
        for (size_t t = 0; t < ds.n_times(); ++t)
            for (size_t g = 0; g < ds.n_genes(); ++g) {
                const Vec2& p = ds.position(t, c);
                b.add_row({ds.cells[c], ds.type_name_of(c), ds.times[t], p.x, p.y,
                           ds.genes[g], ds.x(t, c, g)});
            }
    return b.build();
}

// Per-gene max normalization; scale 1 is used for all-zero genes.
struct GeneScales {
    std::vector<double> scale;  // aligned with Dataset.genes
};

inline GeneScales compute_gene_scales(const Dataset& ds) {
    GeneScales s;
    s.scale.assign(ds.n_genes(), 1.0);
    for (size_t g = 0; g < ds.n_genes(); ++g) {
        double mx = 0.0;
        for (size_t t = 0; t < ds.n_times(); ++t)
            for (size_t c = 0; c < ds.n_cells(); ++c) mx = std::max(mx, ds.x(t, c, g));
        if (mx > 0.0) s.scale[g] = mx;
    }
    return s;
}

inline Dataset scale_dataset(const Dataset& ds, const GeneScales& s, bool invert) {
    if (s.scale.size() != ds.n_genes()) throw SchemaMismatch("gene scale length mismatch");
    Dataset out = ds;
    for (size_t t = 0; t < ds.n_times(); ++t)
        for (size_t c = 0; c < ds.n_cells(); ++c)
            for (size_t g = 0; g < ds.n_genes(); ++g)
                out.x(t, c, g) = invert ? ds.x(t, c, g) * s.scale[g]
                                        : ds.x(t, c, g) / s.scale[g];
    return out;
}

}  // namespace staged
