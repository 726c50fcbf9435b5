#pragma once

#include <random>
#include <string>
#include <vector>

#include "staged/dataset.hpp"
#include "staged/grn.hpp"

namespace testutil {

// Small random-but-deterministic dataset for fixture tests.
inline staged::Dataset random_dataset(uint64_t seed, size_t n_cells = 3, size_t n_genes = 2,
                                      size_t n_times = 4, double t0 = 0.0, double h = 0.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(0.0, 2.0);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    staged::DatasetBuilder b;
    for (size_t c = 0; c < n_cells; ++c) {
        std::string cell = "c" + std::to_string(c);
        std::string type = (c % 2 == 0) ? "A" : "B";
        double px = coord(rng), py = coord(rng);
        for (size_t t = 0; t < n_times; ++t)
            for (size_t g = 0; g < n_genes; ++g)
                b.add_row({cell, type, t0 + static_cast<double>(t) * h, px, py,
                           "g" + std::to_string(g), val(rng)});
    }
    return b.build();
}

inline staged::GrnSpec simple_grn(const std::vector<std::string>& genes) {
    staged::GrnSpec spec;
    spec.genes = genes;
    std::sort(spec.genes.begin(), spec.genes.end());
    spec.x_max.assign(spec.genes.size(), 1.0);
    spec.decay.assign(spec.genes.size(), 0.0);
    spec.init.assign(spec.genes.size(), 0.0);
    return spec;
}

}  // namespace testutil
