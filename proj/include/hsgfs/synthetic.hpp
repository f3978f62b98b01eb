#pragma once

// Planted-feature benchmark generator. Each sample's true class drives the
// values of a known informative feature subset (class-conditional means, small
// spread); every other feature is uniform noise. The returned ground-truth
// mask makes subset-recovery measurable, which no real-world dataset offers.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsgfs/dataset.hpp"
#include "hsgfs/knn.hpp"
#include "hsgfs/rng.hpp"

namespace hsgfs {

struct SyntheticSpec {
    std::size_t n_samples = 300;
    std::size_t n_features = 50;
    std::size_t n_informative = 10;
    int class_count = 2;
    double noise_rate = 0.0;  // probability a stored label is redrawn among the other classes
    std::uint64_t seed = 1;
};

inline void validate(const SyntheticSpec& s) {
    if (s.class_count < 2) throw std::invalid_argument("synthetic spec needs >= 2 classes");
    if (s.n_informative < 1)
        throw std::invalid_argument("synthetic spec needs >= 1 informative feature");
    if (s.n_informative > s.n_features)
        throw std::invalid_argument("n_informative exceeds n_features");
    if (s.noise_rate < 0.0 || s.noise_rate >= 1.0)
        throw std::invalid_argument("noise_rate must lie in [0, 1)");
    if (s.n_samples < 2 * static_cast<std::size_t>(s.class_count))
        throw std::invalid_argument("need at least 2 samples per class");
}

// Class-conditional mean of an informative dimension. Rotating the class
// offset with the dimension index gives every pair of classes a separated
// mean on most informative features.
inline double synthetic_center(int label, std::size_t dim, int class_count) {
    const int slot = (label + static_cast<int>(dim % static_cast<std::size_t>(class_count))) %
                     class_count;
    return static_cast<double>(slot + 1) / static_cast<double>(class_count + 1);
}

// Spread of informative features; the gap between adjacent class centers is
// 1/(class_count+1), so this keeps classes separated but overlapping a little.
constexpr double synthetic_sigma = 0.12;

inline std::pair<Dataset, Mask> generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);

    std::vector<std::size_t> perm(spec.n_features);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(perm, rng);
    Mask truth(spec.n_features, 0);
    for (std::size_t i = 0; i < spec.n_informative; ++i) truth[perm[i]] = 1;

    Dataset d;
    d.n_features = spec.n_features;
    d.n_samples = spec.n_samples;
    d.class_count = spec.class_count;
    for (int c = 0; c < spec.class_count; ++c) d.label_names.push_back("c" + std::to_string(c));
    d.samples.reserve(spec.n_samples);
    d.labels.reserve(spec.n_samples);

    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        const int true_class = static_cast<int>(i % static_cast<std::size_t>(spec.class_count));
        std::vector<double> row(spec.n_features);
        for (std::size_t dim = 0; dim < spec.n_features; ++dim) {
            if (truth[dim])
                row[dim] = synthetic_center(true_class, dim, spec.class_count) +
                           synthetic_sigma * next_gaussian(rng);
            else
                row[dim] = next_unit(rng);
        }
        int label = true_class;
        if (spec.noise_rate > 0.0 && next_unit(rng) < spec.noise_rate) {
            const std::size_t offset =
                next_int(rng, 1, static_cast<std::size_t>(spec.class_count) - 1);
            label = (true_class + static_cast<int>(offset)) % spec.class_count;
        }
        d.samples.push_back(std::move(row));
        d.labels.push_back(label);
    }
    validate(d);
    return {std::move(d), std::move(truth)};
}

// Full-precision CSV dump in the loader's format: header row, comma delimiter,
// label column last. Feature columns are named f0..f{n-1}.
inline void write_dataset_csv(const Dataset& d, const std::string& path,
                              const std::string& label_column = "class") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset CSV: " + path);
    for (std::size_t f = 0; f < d.n_features; ++f) out << 'f' << f << ',';
    out << label_column << '\n';
    char buf[40];
    for (std::size_t i = 0; i < d.n_samples; ++i) {
        for (std::size_t f = 0; f < d.n_features; ++f) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.samples[i][f]);
            out << buf << ',';
        }
        out << d.label_names[static_cast<std::size_t>(d.labels[i])] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Companion dump of the planted truth: one informative feature index per line.
inline void write_truth_csv(const Mask& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write truth CSV: " + path);
    out << "informative_feature\n";
    for (std::size_t f = 0; f < truth.size(); ++f)
        if (truth[f]) out << f << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hsgfs
