#pragma once

// Wrapper fitness: k-NN classification accuracy of a feature mask on a fixed
// holdout split. Everything here is pure and stateless; ties in neighbor
// distance and in the majority vote break toward the lowest training-row
// index and the lowest class id, so seeded runs stay reproducible.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hsgfs/dataset.hpp"

namespace hsgfs {

using Mask = std::vector<std::uint8_t>;

struct KnnConfig {
    std::size_t k = 3;
    enum class Metric { Euclidean } distance = Metric::Euclidean;
};

struct FitnessValue {
    double accuracy = 0.0;
    std::size_t n_selected = 0;
};

// Total order on solutions: higher accuracy first, fewer features on ties.
inline bool fitness_better(const FitnessValue& a, const FitnessValue& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.n_selected < b.n_selected;
}

inline bool fitness_at_least(const FitnessValue& a, const FitnessValue& b) {
    return !fitness_better(b, a);
}

inline std::size_t count_selected(const Mask& mask) {
    std::size_t n = 0;
    for (const auto b : mask) n += b ? 1 : 0;
    return n;
}

inline std::vector<std::size_t> selected_indices(const Mask& mask) {
    std::vector<std::size_t> idx;
    for (std::size_t d = 0; d < mask.size(); ++d)
        if (mask[d]) idx.push_back(d);
    return idx;
}

namespace detail {

inline int knn_predict_indexed(const Dataset& train, const std::vector<double>& query,
                               std::size_t k, const std::vector<std::size_t>& features) {
    // (squared distance, training-row index); the index part settles ties
    std::vector<std::pair<double, std::size_t>> dist(train.n_samples);
    for (std::size_t i = 0; i < train.n_samples; ++i) {
        const std::vector<double>& row = train.samples[i];
        double s = 0.0;
        for (const std::size_t d : features) {
            const double diff = row[d] - query[d];
            s += diff * diff;
        }
        dist[i] = {s, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<std::size_t> votes(static_cast<std::size_t>(train.class_count), 0);
    for (std::size_t i = 0; i < k; ++i)
        ++votes[static_cast<std::size_t>(train.labels[dist[i].second])];
    int winner = 0;
    for (int c = 1; c < train.class_count; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(winner)])
            winner = c;  // strict > keeps the lowest class id on ties
    return winner;
}

}  // namespace detail

// Majority class among the k nearest training rows, with distances computed
// only over features the mask selects.
inline int knn_predict(const Dataset& train, const std::vector<double>& query,
                       std::size_t k, const Mask& mask) {
    if (mask.size() != train.n_features)
        throw std::invalid_argument("mask length does not match n_features");
    const std::vector<std::size_t> features = selected_indices(mask);
    if (features.empty()) throw std::invalid_argument("mask selects no features");
    if (k < 1 || k > train.n_samples)
        throw std::invalid_argument("k must lie in [1, train.n_samples]");
    return detail::knn_predict_indexed(train, query, k, features);
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("predicted and truth lengths differ");
    if (predicted.empty()) throw std::invalid_argument("accuracy of empty sequences is undefined");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// Fitness of a mask: k-NN accuracy over every test row. The all-zero mask
// scores 0 without touching the classifier.
inline FitnessValue wrapper_fitness(const Mask& mask, const SplitPair& split,
                                    const KnnConfig& cfg) {
    if (mask.size() != split.train.n_features)
        throw std::invalid_argument("mask length does not match n_features");
    if (cfg.k < 1 || cfg.k > split.train.n_samples)
        throw std::invalid_argument("k must lie in [1, train.n_samples]");
    const std::vector<std::size_t> features = selected_indices(mask);
    FitnessValue fv;
    fv.n_selected = features.size();
    if (features.empty()) return fv;

    std::size_t hits = 0;
    for (std::size_t q = 0; q < split.test.n_samples; ++q) {
        const int pred = detail::knn_predict_indexed(split.train, split.test.samples[q],
                                                     cfg.k, features);
        if (pred == split.test.labels[q]) ++hits;
    }
    fv.accuracy = static_cast<double>(hits) / static_cast<double>(split.test.n_samples);
    return fv;
}

}  // namespace hsgfs
