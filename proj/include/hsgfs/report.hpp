#pragma once

// Experiment harness: run seeded (algorithm, seed) grids over one dataset and
// assemble a ComparisonReport written as JSON (full, with convergence curves)
// and CSV (summary rows plus median/IQR aggregates). The CSV carries no
// timing, so a fixed spec reproduces it byte for byte; wall time lives only
// in the JSON. A report round-trips through its JSON without loss, which is
// also how external results get merged in after the fact.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsgfs/dataset.hpp"
#include "hsgfs/knn.hpp"
#include "hsgfs/optimizer.hpp"
#include "hsgfs/parallel.hpp"
#include "hsgfs/ranking.hpp"
#include "hsgfs/rng.hpp"
#include "hsgfs/synthetic.hpp"

namespace hsgfs {

using Json = nlohmann::json;

struct DatasetSource {
    enum class Kind { none, csv, synthetic };
    Kind kind = Kind::none;
    std::string csv_path;
    std::string label_column = "class";
    SyntheticSpec synthetic;
};

struct ExperimentSpec {
    std::string name = "experiment";
    DatasetSource data;
    std::vector<Algorithm> algorithms{Algorithm::Hsgfs};
    std::size_t n_seeds = 10;       // seed indices 0..n_seeds-1 under the master seed
    std::uint64_t master_seed = 1;
    double train_fraction = 2.0 / 3.0;
    KnnConfig knn;
    HsgfsConfig optimizer;
    std::size_t ranking_bins = 10;
    std::string external_csv;       // optional result file to merge
    bool include_external = false;  // fold external rows into the aggregates
    std::string output_dir = ".";
    std::string dump_ranking;       // optional CSV path for seed index 0's ranking
    std::size_t workers = 1;        // fitness-batch threads inside each run
};

inline void validate(const ExperimentSpec& spec) {
    if (spec.data.kind == DatasetSource::Kind::none)
        throw std::invalid_argument("no dataset source configured (csv or synthetic)");
    if (spec.algorithms.empty()) throw std::invalid_argument("need at least one algorithm");
    for (std::size_t i = 0; i < spec.algorithms.size(); ++i)
        for (std::size_t j = i + 1; j < spec.algorithms.size(); ++j)
            if (spec.algorithms[i] == spec.algorithms[j])
                throw std::invalid_argument("duplicate algorithm in spec");
    if (spec.n_seeds < 1) throw std::invalid_argument("need at least one seed");
    if (spec.name.empty()) throw std::invalid_argument("experiment name is empty");
    validate(spec.optimizer);
    if (spec.data.kind == DatasetSource::Kind::synthetic) validate(spec.data.synthetic);
}

struct ReportRow {
    std::string algorithm;
    std::uint64_t seed = 0;            // seed index here; external rows keep their own value
    std::uint64_t optimizer_seed = 0;  // derived child seed (0 for external rows)
    std::uint64_t split_seed = 0;
    double accuracy = 0.0;  // [0, 1]; rendered as a percentage in the CSV
    std::size_t n_selected = 0;
    double fraction_used = 0.0;  // n_selected / n_features
    std::uint64_t evaluations = 0;
    double wall_time = 0.0;  // seconds, JSON only
    bool external = false;
    std::vector<double> convergence;
    std::string best_mask;  // '0'/'1' per feature, empty for external rows
};

struct AggregateRow {
    std::string algorithm;
    std::size_t n_runs = 0;
    double median_accuracy = 0.0;
    double iqr_accuracy = 0.0;
    double median_n_selected = 0.0;
    double iqr_n_selected = 0.0;
    double median_fraction = 0.0;
    double iqr_fraction = 0.0;
};

struct ComparisonReport {
    std::string name;
    std::string dataset_desc;
    std::size_t n_features = 0;
    std::size_t n_samples = 0;
    double train_fraction = 0.0;
    std::uint64_t master_seed = 0;
    std::size_t n_seeds = 0;
    bool include_external = false;
    Json config_echo;  // knn and optimizer settings, for the record
    std::vector<ReportRow> rows;
    std::vector<AggregateRow> aggregates;
};

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sequence");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Tukey hinges: quartiles are medians of the lower and upper halves, each
// half including the middle element when the count is odd.
inline std::pair<double, double> quartiles(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("quartiles of empty sequence");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const std::vector<double> lower(v.begin(), v.begin() + static_cast<std::ptrdiff_t>((n + 1) / 2));
    const std::vector<double> upper(v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    return {median_of(lower), median_of(upper)};
}

// Median/IQR per algorithm over the rows that count: internal rows always,
// external rows only when include_external is set. Group order follows first
// appearance in the row list.
inline std::vector<AggregateRow> compute_aggregates(const std::vector<ReportRow>& rows,
                                                    bool include_external) {
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (r.external && !include_external) continue;
        if (std::find(order.begin(), order.end(), r.algorithm) == order.end())
            order.push_back(r.algorithm);
    }
    std::vector<AggregateRow> out;
    for (const auto& name : order) {
        std::vector<double> acc, nsel, frac;
        for (const auto& r : rows) {
            if (r.algorithm != name || (r.external && !include_external)) continue;
            acc.push_back(r.accuracy);
            nsel.push_back(static_cast<double>(r.n_selected));
            frac.push_back(r.fraction_used);
        }
        AggregateRow a;
        a.algorithm = name;
        a.n_runs = acc.size();
        a.median_accuracy = median_of(acc);
        a.median_n_selected = median_of(nsel);
        a.median_fraction = median_of(frac);
        const auto [acc_q1, acc_q3] = quartiles(acc);
        const auto [nsel_q1, nsel_q3] = quartiles(nsel);
        const auto [frac_q1, frac_q3] = quartiles(frac);
        a.iqr_accuracy = acc_q3 - acc_q1;
        a.iqr_n_selected = nsel_q3 - nsel_q1;
        a.iqr_fraction = frac_q3 - frac_q1;
        out.push_back(std::move(a));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string mask_to_string(const Mask& m) {
    std::string s(m.size(), '0');
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) s[i] = '1';
    return s;
}

inline Json report_to_json(const ComparisonReport& rep) {
    Json j;
    j["name"] = rep.name;
    j["dataset"] = rep.dataset_desc;
    j["n_features"] = rep.n_features;
    j["n_samples"] = rep.n_samples;
    j["train_fraction"] = rep.train_fraction;
    j["master_seed"] = rep.master_seed;
    j["n_seeds"] = rep.n_seeds;
    j["include_external"] = rep.include_external;
    j["config"] = rep.config_echo;
    j["rows"] = Json::array();
    for (const auto& r : rep.rows) {
        Json row;
        row["algorithm"] = r.algorithm;
        row["seed"] = r.seed;
        row["optimizer_seed"] = r.optimizer_seed;
        row["split_seed"] = r.split_seed;
        row["accuracy"] = r.accuracy;
        row["n_selected"] = r.n_selected;
        row["fraction_used"] = r.fraction_used;
        row["evaluations"] = r.evaluations;
        row["wall_time"] = r.wall_time;
        row["external"] = r.external;
        row["convergence"] = r.convergence;
        row["best_mask"] = r.best_mask;
        j["rows"].push_back(std::move(row));
    }
    j["aggregates"] = Json::array();
    for (const auto& a : rep.aggregates) {
        Json agg;
        agg["algorithm"] = a.algorithm;
        agg["n_runs"] = a.n_runs;
        agg["median_accuracy"] = a.median_accuracy;
        agg["iqr_accuracy"] = a.iqr_accuracy;
        agg["median_n_selected"] = a.median_n_selected;
        agg["iqr_n_selected"] = a.iqr_n_selected;
        agg["median_fraction_used"] = a.median_fraction;
        agg["iqr_fraction_used"] = a.iqr_fraction;
        j["aggregates"].push_back(std::move(agg));
    }
    return j;
}

inline ComparisonReport report_from_json(const Json& j) {
    ComparisonReport rep;
    rep.name = j.at("name").get<std::string>();
    rep.dataset_desc = j.at("dataset").get<std::string>();
    rep.n_features = j.at("n_features").get<std::size_t>();
    rep.n_samples = j.at("n_samples").get<std::size_t>();
    rep.train_fraction = j.at("train_fraction").get<double>();
    rep.master_seed = j.at("master_seed").get<std::uint64_t>();
    rep.n_seeds = j.at("n_seeds").get<std::size_t>();
    rep.include_external = j.at("include_external").get<bool>();
    rep.config_echo = j.at("config");
    for (const auto& row : j.at("rows")) {
        ReportRow r;
        r.algorithm = row.at("algorithm").get<std::string>();
        r.seed = row.at("seed").get<std::uint64_t>();
        r.optimizer_seed = row.at("optimizer_seed").get<std::uint64_t>();
        r.split_seed = row.at("split_seed").get<std::uint64_t>();
        r.accuracy = row.at("accuracy").get<double>();
        r.n_selected = row.at("n_selected").get<std::size_t>();
        r.fraction_used = row.at("fraction_used").get<double>();
        r.evaluations = row.at("evaluations").get<std::uint64_t>();
        r.wall_time = row.at("wall_time").get<double>();
        r.external = row.at("external").get<bool>();
        r.convergence = row.at("convergence").get<std::vector<double>>();
        r.best_mask = row.at("best_mask").get<std::string>();
        rep.rows.push_back(std::move(r));
    }
    for (const auto& agg : j.at("aggregates")) {
        AggregateRow a;
        a.algorithm = agg.at("algorithm").get<std::string>();
        a.n_runs = agg.at("n_runs").get<std::size_t>();
        a.median_accuracy = agg.at("median_accuracy").get<double>();
        a.iqr_accuracy = agg.at("iqr_accuracy").get<double>();
        a.median_n_selected = agg.at("median_n_selected").get<double>();
        a.iqr_n_selected = agg.at("iqr_n_selected").get<double>();
        a.median_fraction = agg.at("median_fraction_used").get<double>();
        a.iqr_fraction = agg.at("iqr_fraction_used").get<double>();
        rep.aggregates.push_back(std::move(a));
    }
    return rep;
}

inline ComparisonReport load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report JSON: " + path);
    Json j;
    in >> j;
    return report_from_json(j);
}

namespace detail {

inline std::string percent_cell(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", accuracy * 100.0);
    return buf;
}

inline std::string fixed_cell(double value, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace detail

// Summary CSV. Per-run rows come first (kind "run"), then one "median" and
// one "iqr" row per aggregated algorithm. Accuracy cells are percentages to
// 2 decimals; in IQR rows the accuracy column holds percentage points
// without the '%' sign. Cells that do not apply stay empty.
inline std::string render_csv(const ComparisonReport& rep) {
    std::string out = "kind,algorithm,seed,accuracy_pct,n_selected,fraction_used,evaluations,external\n";
    for (const auto& r : rep.rows) {
        out += "run," + r.algorithm + ',' + std::to_string(r.seed) + ',';
        out += detail::percent_cell(r.accuracy) + ',' + std::to_string(r.n_selected) + ',';
        out += detail::fixed_cell(r.fraction_used, 4) + ',';
        if (!r.external) out += std::to_string(r.evaluations);
        out += r.external ? ",1\n" : ",0\n";
    }
    for (const auto& a : rep.aggregates) {
        out += "median," + a.algorithm + ",," + detail::percent_cell(a.median_accuracy) + ',';
        out += detail::fixed_cell(a.median_n_selected, 1) + ',';
        out += detail::fixed_cell(a.median_fraction, 4) + ",,\n";
        out += "iqr," + a.algorithm + ",," + detail::fixed_cell(a.iqr_accuracy * 100.0, 2) + ',';
        out += detail::fixed_cell(a.iqr_n_selected, 1) + ',';
        out += detail::fixed_cell(a.iqr_fraction, 4) + ",,\n";
    }
    return out;
}

// Writes {dir}/{name}.json and {dir}/{name}.csv, creating the directory if
// needed. Returns the two paths.
inline std::pair<std::string, std::string> write_report_files(const ComparisonReport& rep,
                                                              const std::string& dir) {
    const std::string base = dir.empty() ? std::string(".") : dir;
    std::filesystem::create_directories(base);
    const std::string json_path = base + "/" + rep.name + ".json";
    const std::string csv_path = base + "/" + rep.name + ".csv";
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report JSON: " + json_path);
        out << report_to_json(rep).dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed: " + json_path);
    }
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report CSV: " + csv_path);
        out << render_csv(rep);
        if (!out) throw std::runtime_error("write failed: " + csv_path);
    }
    return {json_path, csv_path};
}

// ---------------------------------------------------------------------------
// External results
// ---------------------------------------------------------------------------

// Reads rows produced by other tools: header "algorithm,seed,accuracy,
// n_selected", accuracy as a fraction in [0,1]. Malformed rows are rejected
// with their 1-based line number.
inline std::vector<ReportRow> import_external_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open external results: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("external results file is empty: " + path);
    {
        const auto header = detail::split_csv_line(line);
        const std::vector<std::string> expected{"algorithm", "seed", "accuracy", "n_selected"};
        if (std::vector<std::string>(header.begin(), header.end()) != expected)
            throw std::runtime_error(path +
                                     ": expected header 'algorithm,seed,accuracy,n_selected'");
    }
    std::vector<ReportRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::string where = path + " line " + std::to_string(line_no);
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 4)
            throw std::runtime_error(where + ": expected 4 columns, got " +
                                     std::to_string(cells.size()));
        ReportRow r;
        r.algorithm = cells[0];
        if (r.algorithm.empty()) throw std::runtime_error(where + ": empty algorithm name");
        try {
            r.seed = std::stoull(cells[1]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": bad seed '" + cells[1] + "'");
        }
        double acc = 0.0;
        if (!detail::parse_double(cells[2], acc))
            throw std::runtime_error(where + ": bad accuracy '" + cells[2] + "'");
        if (acc < 0.0 || acc > 1.0)
            throw std::runtime_error(where + ": accuracy " + cells[2] + " outside [0, 1]");
        r.accuracy = acc;
        try {
            r.n_selected = std::stoull(cells[3]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": bad n_selected '" + cells[3] + "'");
        }
        if (r.n_selected < 1) throw std::runtime_error(where + ": n_selected must be >= 1");
        r.external = true;
        rows.push_back(std::move(r));
    }
    return rows;
}

// Appends external rows to an existing report, recomputes fraction-used
// against the report's feature count and refreshes the aggregates.
inline void merge_external_rows(ComparisonReport& rep, std::vector<ReportRow> rows,
                                bool include_external) {
    for (auto& r : rows) {
        if (r.n_selected > rep.n_features)
            throw std::runtime_error("external row (algorithm=" + r.algorithm + ", seed=" +
                                     std::to_string(r.seed) + "): n_selected " +
                                     std::to_string(r.n_selected) + " exceeds n_features " +
                                     std::to_string(rep.n_features));
        r.fraction_used =
            static_cast<double>(r.n_selected) / static_cast<double>(rep.n_features);
        rep.rows.push_back(std::move(r));
    }
    rep.include_external = include_external;
    rep.aggregates = compute_aggregates(rep.rows, include_external);
}

// ---------------------------------------------------------------------------
// Experiment execution
// ---------------------------------------------------------------------------

inline Dataset load_dataset(const DatasetSource& src) {
    switch (src.kind) {
        case DatasetSource::Kind::csv:
            return load_csv(src.csv_path, src.label_column);
        case DatasetSource::Kind::synthetic:
            return generate_synthetic(src.synthetic).first;
        case DatasetSource::Kind::none:
            break;
    }
    throw std::invalid_argument("no dataset source configured (csv or synthetic)");
}

inline std::string describe_dataset(const DatasetSource& src) {
    Json j;
    if (src.kind == DatasetSource::Kind::csv) {
        j["csv"] = src.csv_path;
        j["label_column"] = src.label_column;
    } else {
        j["synthetic"] = {{"n_samples", src.synthetic.n_samples},
                          {"n_features", src.synthetic.n_features},
                          {"n_informative", src.synthetic.n_informative},
                          {"class_count", src.synthetic.class_count},
                          {"noise_rate", src.synthetic.noise_rate},
                          {"seed", src.synthetic.seed}};
    }
    return j.dump();
}

// Baseline budget equalization: with local search on (and actually active,
// i.e. floor(5n/100) >= 1) HSGFS spends two evaluations per particle per
// iteration, so BPSO/BGSA get twice the iterations. Evaluation totals then
// match exactly: N(1 + 2*iters) each.
inline HsgfsConfig equalized_config(const HsgfsConfig& base, std::size_t n_features) {
    HsgfsConfig cfg = base;
    const bool ls_active = base.local_search_enabled && (5 * n_features) / 100 >= 1;
    if (ls_active) cfg.max_iter *= 2;
    return cfg;
}

// Runs the full (algorithm, seed-index) grid. Per seed index, the stratified
// split is derived from the master seed's "split" stream and shared by all
// algorithms (paired comparison); each algorithm draws its own child seed
// from its name, so adding one never perturbs the others. Train and test are
// normalized independently, feature ranking comes from the normalized train
// half only.
inline ComparisonReport run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const Dataset base = load_dataset(spec.data);

    ComparisonReport rep;
    rep.name = spec.name;
    rep.dataset_desc = describe_dataset(spec.data);
    rep.n_features = base.n_features;
    rep.n_samples = base.n_samples;
    rep.train_fraction = spec.train_fraction;
    rep.master_seed = spec.master_seed;
    rep.n_seeds = spec.n_seeds;
    rep.config_echo = {{"knn_k", spec.knn.k},
                       {"population", spec.optimizer.population},
                       {"max_iter", spec.optimizer.max_iter},
                       {"g0", spec.optimizer.g0},
                       {"alpha", spec.optimizer.alpha},
                       {"epsilon", spec.optimizer.epsilon},
                       {"v_max", spec.optimizer.v_max},
                       {"memory_capacity", spec.optimizer.memory_capacity},
                       {"local_search", spec.optimizer.local_search_enabled},
                       {"ranking_bins", spec.ranking_bins}};

    const std::size_t workers = resolve_workers(spec.workers);
    std::vector<std::vector<ReportRow>> by_algo(spec.algorithms.size());

    for (std::size_t i = 0; i < spec.n_seeds; ++i) {
        const std::uint64_t split_seed = derive_seed(spec.master_seed, "split", i);
        SplitPair split = stratified_split(base, spec.train_fraction, split_seed);
        split.train = min_max_normalize(split.train);
        split.test = min_max_normalize(split.test);
        const FeatureRanking ranking = rank_features(split.train, spec.ranking_bins);
        if (i == 0 && !spec.dump_ranking.empty()) write_ranking_csv(ranking, spec.dump_ranking);

        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            const Algorithm algo = spec.algorithms[a];
            const char* name = algorithm_name(algo);
            const std::uint64_t run_seed = derive_seed(spec.master_seed, name, i);
            try {
                RunResult rr;
                switch (algo) {
                    case Algorithm::Hsgfs:
                        rr = hsgfs_run(split, ranking, spec.optimizer, spec.knn, run_seed,
                                       workers);
                        break;
                    case Algorithm::Bpso:
                        rr = bpso_run(split, equalized_config(spec.optimizer, base.n_features),
                                      spec.knn, run_seed, BpsoParams{}, workers);
                        break;
                    case Algorithm::Bgsa:
                        rr = bgsa_run(split, equalized_config(spec.optimizer, base.n_features),
                                      spec.knn, run_seed, workers);
                        break;
                }
                ReportRow row;
                row.algorithm = name;
                row.seed = i;
                row.optimizer_seed = rr.seed;
                row.split_seed = split_seed;
                row.accuracy = rr.best_fitness.accuracy;
                row.n_selected = rr.n_selected;
                row.fraction_used =
                    static_cast<double>(rr.n_selected) / static_cast<double>(base.n_features);
                row.evaluations = rr.evaluations;
                row.wall_time = rr.wall_time;
                row.convergence = rr.convergence;
                row.best_mask = mask_to_string(rr.best_position);
                by_algo[a].push_back(std::move(row));
            } catch (const std::exception& e) {
                throw std::runtime_error("algorithm=" + std::string(name) + " seed_index=" +
                                         std::to_string(i) + ": " + e.what());
            }
        }
    }
    for (auto& bucket : by_algo)
        for (auto& row : bucket) rep.rows.push_back(std::move(row));

    rep.include_external = spec.include_external;
    if (!spec.external_csv.empty())
        merge_external_rows(rep, import_external_results(spec.external_csv),
                            spec.include_external);
    else
        rep.aggregates = compute_aggregates(rep.rows, rep.include_external);
    return rep;
}

// ---------------------------------------------------------------------------
// key=value spec files
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_bool(const std::string& s, bool& out) {
    if (s == "on" || s == "true" || s == "yes" || s == "1") {
        out = true;
        return true;
    }
    if (s == "off" || s == "false" || s == "no" || s == "0") {
        out = false;
        return true;
    }
    return false;
}

inline std::uint64_t parse_u64_or_throw(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": expected an unsigned integer, got '" + value + "'");
    }
}

inline double parse_double_or_throw(const std::string& value, const std::string& where) {
    double v = 0.0;
    if (!parse_double(value, v))
        throw std::runtime_error(where + ": expected a number, got '" + value + "'");
    return v;
}

inline void require_source(DatasetSource& data, DatasetSource::Kind kind,
                           const std::string& where) {
    if (data.kind != DatasetSource::Kind::none && data.kind != kind)
        throw std::runtime_error(where + ": dataset source already set to " +
                                 (data.kind == DatasetSource::Kind::csv ? "csv" : "synthetic"));
    data.kind = kind;
}

}  // namespace detail

// Applies one key=value setting. Shared by the spec-file loader and the CLI
// so both surfaces accept the same vocabulary.
inline void apply_spec_entry(ExperimentSpec& spec, const std::string& key,
                             const std::string& value, const std::string& where) {
    using detail::parse_double_or_throw;
    using detail::parse_u64_or_throw;
    const auto src_csv = [&] {
        detail::require_source(spec.data, DatasetSource::Kind::csv, where);
    };
    const auto src_synth = [&] {
        detail::require_source(spec.data, DatasetSource::Kind::synthetic, where);
    };

    if (key == "name") {
        spec.name = value;
    } else if (key == "csv") {
        src_csv();
        spec.data.csv_path = value;
    } else if (key == "label_col") {
        src_csv();
        spec.data.label_column = value;
    } else if (key == "synth_samples") {
        src_synth();
        spec.data.synthetic.n_samples = parse_u64_or_throw(value, where);
    } else if (key == "synth_features") {
        src_synth();
        spec.data.synthetic.n_features = parse_u64_or_throw(value, where);
    } else if (key == "synth_informative") {
        src_synth();
        spec.data.synthetic.n_informative = parse_u64_or_throw(value, where);
    } else if (key == "synth_classes") {
        src_synth();
        spec.data.synthetic.class_count =
            static_cast<int>(parse_u64_or_throw(value, where));
    } else if (key == "synth_noise") {
        src_synth();
        spec.data.synthetic.noise_rate = parse_double_or_throw(value, where);
    } else if (key == "synth_seed") {
        src_synth();
        spec.data.synthetic.seed = parse_u64_or_throw(value, where);
    } else if (key == "algorithms" || key == "algo") {
        spec.algorithms.clear();
        std::string::size_type start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const std::string tok =
                detail::trim(value.substr(start, comma == std::string::npos ? std::string::npos
                                                                            : comma - start));
            if (!tok.empty()) spec.algorithms.push_back(parse_algorithm(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (spec.algorithms.empty())
            throw std::runtime_error(where + ": no algorithms listed");
    } else if (key == "seeds") {
        spec.n_seeds = parse_u64_or_throw(value, where);
    } else if (key == "master_seed" || key == "seed") {
        spec.master_seed = parse_u64_or_throw(value, where);
    } else if (key == "train_fraction") {
        spec.train_fraction = parse_double_or_throw(value, where);
    } else if (key == "k") {
        spec.knn.k = parse_u64_or_throw(value, where);
    } else if (key == "ranking_bins") {
        spec.ranking_bins = parse_u64_or_throw(value, where);
    } else if (key == "pop") {
        spec.optimizer.population = parse_u64_or_throw(value, where);
    } else if (key == "iters") {
        spec.optimizer.max_iter = parse_u64_or_throw(value, where);
    } else if (key == "g0") {
        spec.optimizer.g0 = parse_double_or_throw(value, where);
    } else if (key == "alpha") {
        spec.optimizer.alpha = parse_double_or_throw(value, where);
    } else if (key == "epsilon") {
        spec.optimizer.epsilon = parse_double_or_throw(value, where);
    } else if (key == "vmax") {
        spec.optimizer.v_max = parse_double_or_throw(value, where);
    } else if (key == "memory_cap") {
        spec.optimizer.memory_capacity = parse_u64_or_throw(value, where);
    } else if (key == "local_search") {
        if (!detail::parse_bool(value, spec.optimizer.local_search_enabled))
            throw std::runtime_error(where + ": expected on/off, got '" + value + "'");
    } else if (key == "external") {
        spec.external_csv = value;
    } else if (key == "include_external") {
        if (!detail::parse_bool(value, spec.include_external))
            throw std::runtime_error(where + ": expected on/off, got '" + value + "'");
    } else if (key == "out") {
        spec.output_dir = value;
    } else if (key == "dump_ranking") {
        spec.dump_ranking = value;
    } else if (key == "workers") {
        spec.workers = parse_u64_or_throw(value, where);
    } else {
        throw std::runtime_error(where + ": unknown key '" + key + "'");
    }
}

// Plain key=value file: one setting per line, '#' starts a comment line,
// blank lines ignored. Later lines override earlier ones.
inline ExperimentSpec load_spec_file(const std::string& path, ExperimentSpec base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        const std::string where = path + " line " + std::to_string(line_no);
        if (eq == std::string::npos)
            throw std::runtime_error(where + ": expected key=value");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(where + ": empty key");
        apply_spec_entry(base, key, value, where);
    }
    return base;
}

}  // namespace hsgfs
