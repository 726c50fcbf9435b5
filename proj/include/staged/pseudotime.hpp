#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "staged/common.hpp"
#include "staged/dataset.hpp"

namespace staged {

// One static single-cell measurement with a scalar pseudotime.
struct Snapshot {
    std::string cell;
    std::string type;
    double pseudotime = 0.0;
    Vec2 position;
    std::vector<double> expression;  // aligned with SnapshotSet.genes
};

struct SnapshotSet {
    std::vector<std::string> genes;  // sorted
    std::vector<Snapshot> cells;
};

// Quantile bin via the empirical mid-CDF so tied pseudotimes always share a
// bin and untied uniform draws land within +/-1 of equal bin sizes.
inline std::vector<int> pseudotime_bins(const std::vector<double>& pt, int n_bins) {
    if (n_bins < 2) throw BinningError("n_bins must be >= 2");
    const size_t n = pt.size();
    if (n == 0) throw BinningError("no cells to bin");
    std::set<double> distinct(pt.begin(), pt.end());
    if (static_cast<int>(distinct.size()) < n_bins)
        throw BinningError("fewer distinct pseudotimes (" +
                           std::to_string(distinct.size()) + ") than bins (" +
                           std::to_string(n_bins) + ")");
    std::vector<int> bins(n);
    for (size_t i = 0; i < n; ++i) {
        size_t below = 0, equal = 0;
        for (size_t j = 0; j < n; ++j) {
            if (pt[j] < pt[i]) ++below;
            else if (pt[j] == pt[i]) ++equal;
        }
        double f = (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) /
                   static_cast<double>(n);
        int b = static_cast<int>(f * n_bins);
        bins[i] = std::min(b, n_bins - 1);
    }
    return bins;
}

// Bins snapshots by pseudotime quantile and emits per-bin per-type mean
// profiles as a Dataset: one virtual cell per cell type, time = bin index.
inline Dataset bin_pseudotime(const SnapshotSet& snaps, int n_bins) {
    if (snaps.cells.empty()) throw BinningError("no cells to bin");
    std::vector<double> pt;
    pt.reserve(snaps.cells.size());
    for (const auto& s : snaps.cells) {
        if (!std::isfinite(s.pseudotime)) throw BinningError("non-finite pseudotime");
        if (s.expression.size() != snaps.genes.size())
            throw SchemaMismatch("cell " + s.cell + " expression length mismatch");
        pt.push_back(s.pseudotime);
    }
    auto bins = pseudotime_bins(pt, n_bins);

    std::set<std::string> type_set;
    for (const auto& s : snaps.cells) type_set.insert(s.type);
    std::vector<std::string> types(type_set.begin(), type_set.end());

    const size_t G = snaps.genes.size(), K = types.size();
    const size_t B = static_cast<size_t>(n_bins);
    std::vector<double> sum(B * K * G, 0.0);
    std::vector<Vec2> psum(B * K, Vec2{});
    std::vector<size_t> count(B * K, 0);
    auto tindex = [&](const std::string& t) {
        return static_cast<size_t>(std::lower_bound(types.begin(), types.end(), t) -
                                   types.begin());
    };
    for (size_t i = 0; i < snaps.cells.size(); ++i) {
        const auto& s = snaps.cells[i];
        size_t b = static_cast<size_t>(bins[i]), k = tindex(s.type);
        for (size_t g = 0; g < G; ++g) sum[(b * K + k) * G + g] += s.expression[g];
        psum[b * K + k].x += s.position.x;
        psum[b * K + k].y += s.position.y;
        ++count[b * K + k];
    }
    for (size_t b = 0; b < B; ++b)
        for (size_t k = 0; k < K; ++k)
            if (count[b * K + k] == 0)
                throw BinningError("cell type '" + types[k] + "' has no cells in bin " +
                                   std::to_string(b));

    DatasetBuilder builder;
    for (size_t b = 0; b < B; ++b)
        for (size_t k = 0; k < K; ++k) {
            double n = static_cast<double>(count[b * K + k]);
            Vec2 p{psum[b * K + k].x / n, psum[b * K + k].y / n};
            for (size_t g = 0; g < G; ++g)
                builder.add_row({types[k], types[k], static_cast<double>(b), p.x, p.y,
                                 snaps.genes[g], sum[(b * K + k) * G + g] / n});
        }
    return builder.build();
}

inline const char* kSnapshotHeader = "cell_id,cell_type,pseudotime,x,y,gene,value";

inline SnapshotSet parse_snapshots_csv(const std::string& text) {
    struct Raw {
        std::string type;
        double pt = 0.0;
        Vec2 pos;
        std::map<std::string, double> values;
    };
    std::map<std::string, Raw> by_cell;
    std::set<std::string> gene_set;
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
            if (line != kSnapshotHeader)
                throw ParseError("expected snapshot header '" + std::string(kSnapshotHeader) +
                                 "'");
            saw_header = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 7)
            throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
        Raw& r = by_cell[f[0]];
        r.type = f[1];
        r.pt = parse_double(f[2], "pseudotime");
        r.pos = Vec2{parse_double(f[3], "x"), parse_double(f[4], "y")};
        if (r.values.count(f[5]))
            throw DuplicateEntry("duplicate gene " + f[5] + " for cell " + f[0]);
        r.values[f[5]] = parse_double(f[6], "value");
        gene_set.insert(f[5]);
    }
    if (!saw_header) throw ParseError("empty snapshot file");

    SnapshotSet out;
    out.genes.assign(gene_set.begin(), gene_set.end());
    for (auto& [cell, raw] : by_cell) {
        Snapshot s;
        s.cell = cell;
        s.type = raw.type;
        s.pseudotime = raw.pt;
        s.position = raw.pos;
        for (const auto& g : out.genes) {
            auto it = raw.values.find(g);
            if (it == raw.values.end())
                throw IncompleteGrid("cell " + cell + " missing gene " + g);
            s.expression.push_back(it->second);
        }
        out.cells.push_back(std::move(s));
    }
    return out;
}

inline SnapshotSet load_snapshots(const std::string& path) {
    return parse_snapshots_csv(read_file(path));
}

}  // namespace staged
