#pragma once

// Offline filter ranking: per-feature mutual information with the class
// label, estimated from equal-width histograms. Computed once per run on
// training data only, before the search starts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsgfs/dataset.hpp"

namespace hsgfs {

struct FeatureRanking {
    std::vector<std::size_t> order;  // feature indices, best first
    std::vector<double> scores;      // non-increasing along order, nats
};

namespace detail {

// MI between one binned feature column and the labels, in natural-log units.
inline double column_mutual_information(const Dataset& d, std::size_t col,
                                        std::size_t bins) {
    double lo = d.samples[0][col], hi = d.samples[0][col];
    for (const auto& row : d.samples) {
        lo = std::min(lo, row[col]);
        hi = std::max(hi, row[col]);
    }
    if (!(hi > lo)) return 0.0;  // constant column carries no information

    const std::size_t n_classes = static_cast<std::size_t>(d.class_count);
    std::vector<double> joint(bins * n_classes, 0.0);
    std::vector<double> p_bin(bins, 0.0);
    std::vector<double> p_class(n_classes, 0.0);
    const double width = (hi - lo) / static_cast<double>(bins);
    const double w = 1.0 / static_cast<double>(d.n_samples);
    for (std::size_t i = 0; i < d.n_samples; ++i) {
        std::size_t b = static_cast<std::size_t>((d.samples[i][col] - lo) / width);
        b = std::min(b, bins - 1);  // the max value lands in the last bin
        const std::size_t c = static_cast<std::size_t>(d.labels[i]);
        joint[b * n_classes + c] += w;
        p_bin[b] += w;
        p_class[c] += w;
    }

    double mi = 0.0;
    for (std::size_t b = 0; b < bins; ++b)
        for (std::size_t c = 0; c < n_classes; ++c) {
            const double pxy = joint[b * n_classes + c];
            if (pxy > 0.0) mi += pxy * std::log(pxy / (p_bin[b] * p_class[c]));
        }
    return std::max(mi, 0.0);  // guard against -0 from rounding
}

}  // namespace detail

// Ranks all features by mutual information with the label. Deterministic:
// score ties break toward the lower feature index.
inline FeatureRanking rank_features(const Dataset& train, std::size_t bins = 10) {
    if (train.n_samples < 2) throw std::invalid_argument("need at least 2 samples to rank");
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");

    std::vector<double> mi(train.n_features);
    for (std::size_t col = 0; col < train.n_features; ++col)
        mi[col] = detail::column_mutual_information(train, col, bins);

    FeatureRanking r;
    r.order.resize(train.n_features);
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        if (mi[a] != mi[b]) return mi[a] > mi[b];
        return a < b;
    });
    r.scores.resize(train.n_features);
    for (std::size_t i = 0; i < train.n_features; ++i) r.scores[i] = mi[r.order[i]];
    return r;
}

inline void write_ranking_csv(const FeatureRanking& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ranking to " + path);
    out << "rank,feature,score\n";
    for (std::size_t i = 0; i < r.order.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", r.scores[i]);
        out << i << ',' << r.order[i] << ',' << buf << '\n';
    }
}

}  // namespace hsgfs
