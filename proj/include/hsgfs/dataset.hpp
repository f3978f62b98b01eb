#pragma once

// Tabular dataset ingestion: CSV loading, min-max normalization and
// deterministic stratified train/test splitting. All types are immutable
// after construction and safe to share across threads.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsgfs/rng.hpp"

namespace hsgfs {

// Labeled tabular samples. Labels are contiguous integers 0..class_count-1;
// the original label strings live in label_names for reporting.
struct Dataset {
    std::vector<std::vector<double>> samples;
    std::vector<int> labels;
    std::size_t n_features = 0;
    std::size_t n_samples = 0;
    int class_count = 0;
    std::vector<std::string> label_names;  // index -> original label
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

}  // namespace detail

inline void validate(const Dataset& d) {
    if (d.n_features < 1) throw std::invalid_argument("dataset has no feature columns");
    if (d.n_samples < 2) throw std::invalid_argument("dataset has fewer than 2 samples");
    if (d.class_count < 2) throw std::invalid_argument("dataset has fewer than 2 classes");
    if (d.labels.size() != d.n_samples)
        throw std::invalid_argument("label count does not match sample count");
    for (const auto& row : d.samples)
        if (row.size() != d.n_features)
            throw std::invalid_argument("row arity does not match n_features");
}

// Loads a comma-separated file whose first row is a header. label_column names
// the label column by header name, or by 0-based index when it parses as an
// integer. Labels are remapped to contiguous ids in order of first appearance.
// Row numbers in error messages are 1-based physical line numbers.
inline Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = detail::split_csv_line(line);

    std::size_t label_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == label_column) label_idx = c;
    if (label_idx == header.size()) {
        std::size_t idx = 0;
        const auto res = std::from_chars(label_column.data(),
                                         label_column.data() + label_column.size(), idx);
        if (res.ec == std::errc() && res.ptr == label_column.data() + label_column.size() &&
            idx < header.size())
            label_idx = idx;
    }
    if (label_idx == header.size())
        throw std::runtime_error(path + ": label column '" + label_column + "' not found in header");
    if (header.size() < 2)
        throw std::runtime_error(path + ": header has no feature columns besides the label");

    Dataset d;
    d.n_features = header.size() - 1;
    std::unordered_map<std::string, int> label_ids;

    std::size_t row_no = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path + ": row " + std::to_string(row_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        std::vector<double> row;
        row.reserve(d.n_features);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) continue;
            double v = 0.0;
            if (!detail::parse_double(cells[c], v))
                throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                         ", column '" + header[c] + "' (" + std::to_string(c + 1) +
                                         "): non-numeric value '" + cells[c] + "'");
            row.push_back(v);
        }
        const std::string& label = cells[label_idx];
        auto it = label_ids.find(label);
        if (it == label_ids.end()) {
            it = label_ids.emplace(label, static_cast<int>(d.label_names.size())).first;
            d.label_names.push_back(label);
        }
        d.samples.push_back(std::move(row));
        d.labels.push_back(it->second);
    }
    d.n_samples = d.samples.size();
    d.class_count = static_cast<int>(d.label_names.size());
    if (d.class_count < 2)
        throw std::runtime_error(path + ": fewer than 2 classes in label column '" +
                                 header[label_idx] + "'");
    validate(d);
    return d;
}

// Rescales every feature column to [0, 1]. Constant columns map to all-zeros.
// Idempotent: a second application is an exact no-op.
inline Dataset min_max_normalize(const Dataset& d) {
    Dataset out = d;
    for (std::size_t c = 0; c < d.n_features; ++c) {
        double lo = d.samples[0][c], hi = d.samples[0][c];
        for (const auto& row : d.samples) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < d.n_samples; ++r)
            out.samples[r][c] = range > 0.0 ? (d.samples[r][c] - lo) / range : 0.0;
    }
    return out;
}

// Deterministic per-class split: round-half-up(train_fraction * class_size)
// rows go to train, repaired so both sides keep at least one row per class.
// Identical (d, fraction, seed) always produces identical membership.
inline SplitPair stratified_split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    validate(d);

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(d.class_count));
    for (std::size_t i = 0; i < d.n_samples; ++i)
        by_class[static_cast<std::size_t>(d.labels[i])].push_back(i);
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < 2)
            throw std::invalid_argument("class '" + d.label_names[c] +
                                        "' has fewer than 2 samples; cannot stratify");

    Rng rng(seed);
    std::vector<bool> in_train(d.n_samples, false);
    for (auto& members : by_class) {
        shuffle(members, rng);
        std::size_t n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(members.size()) + 0.5));
        n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
        for (std::size_t i = 0; i < n_train; ++i) in_train[members[i]] = true;
    }

    SplitPair sp;
    sp.seed = seed;
    for (Dataset* half : {&sp.train, &sp.test}) {
        half->n_features = d.n_features;
        half->class_count = d.class_count;
        half->label_names = d.label_names;
    }
    for (std::size_t i = 0; i < d.n_samples; ++i) {
        Dataset& half = in_train[i] ? sp.train : sp.test;
        half.samples.push_back(d.samples[i]);
        half.labels.push_back(d.labels[i]);
    }
    sp.train.n_samples = sp.train.samples.size();
    sp.test.n_samples = sp.test.samples.size();
    return sp;
}

}  // namespace hsgfs
