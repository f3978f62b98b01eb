#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hsgfs/report.hpp"
#include "test_support.hpp"

using namespace hsgfs;
using Catch::Matchers::ContainsSubstring;

namespace {

ReportRow make_row(std::string algorithm, std::uint64_t seed, double accuracy,
                   std::size_t n_selected, double fraction, bool external = false) {
    ReportRow r;
    r.algorithm = std::move(algorithm);
    r.seed = seed;
    r.accuracy = accuracy;
    r.n_selected = n_selected;
    r.fraction_used = fraction;
    r.evaluations = 56;
    r.external = external;
    return r;
}

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.name = "small";
    spec.data.kind = DatasetSource::Kind::synthetic;
    spec.data.synthetic = SyntheticSpec{120, 25, 6, 2, 0.1, 11};
    spec.algorithms = {Algorithm::Hsgfs, Algorithm::Bpso, Algorithm::Bgsa};
    spec.n_seeds = 3;
    spec.master_seed = 5;
    spec.optimizer.population = 8;
    spec.optimizer.max_iter = 3;
    return spec;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

TEST_CASE("median: middle element, or mean of the middle pair") {
    REQUIRE(median_of({3.0}) == 3.0);
    REQUIRE(median_of({3.0, 1.0}) == 2.0);
    REQUIRE(median_of({4.0, 1.0, 2.0}) == 2.0);
    REQUIRE(median_of({10.0, 2.0, 1.0, 3.0}) == 2.5);
    REQUIRE_THROWS_AS(median_of({}), std::invalid_argument);
}

TEST_CASE("quartiles are hinge medians, sharing the middle element when odd") {
    REQUIRE(quartiles({4.0, 2.0, 1.0, 3.0}) == std::pair{1.5, 3.5});
    REQUIRE(quartiles({100.0, 1.0, 3.0, 2.0, 4.0}) == std::pair{2.0, 4.0});
    REQUIRE(quartiles({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}) == std::pair{2.5, 5.5});
    REQUIRE(quartiles({5.0}) == std::pair{5.0, 5.0});
    REQUIRE_THROWS_AS(quartiles({}), std::invalid_argument);
}

TEST_CASE("aggregates group by first appearance and honor the external flag") {
    std::vector<ReportRow> rows;
    rows.push_back(make_row("hsgfs", 0, 0.90, 4, 0.25));
    rows.push_back(make_row("hsgfs", 1, 0.80, 8, 0.50));
    rows.push_back(make_row("bpso", 0, 0.70, 5, 0.3125));
    rows.push_back(make_row("ga", 7, 0.99, 2, 0.125, true));

    const auto internal_only = compute_aggregates(rows, false);
    REQUIRE(internal_only.size() == 2);
    REQUIRE(internal_only[0].algorithm == "hsgfs");
    REQUIRE(internal_only[1].algorithm == "bpso");
    REQUIRE(internal_only[0].n_runs == 2);
    REQUIRE(internal_only[0].median_accuracy == Catch::Approx(0.85).margin(1e-12));
    REQUIRE(internal_only[0].iqr_accuracy == Catch::Approx(0.10).margin(1e-12));
    REQUIRE(internal_only[0].median_n_selected == 6.0);
    REQUIRE(internal_only[0].iqr_n_selected == 4.0);
    REQUIRE(internal_only[1].n_runs == 1);
    REQUIRE(internal_only[1].iqr_accuracy == 0.0);

    const auto with_external = compute_aggregates(rows, true);
    REQUIRE(with_external.size() == 3);
    REQUIRE(with_external[2].algorithm == "ga");
    REQUIRE(with_external[2].median_accuracy == 0.99);
}

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

TEST_CASE("CSV layout: run rows, then median and iqr rows with pinned formats") {
    ComparisonReport rep;
    rep.name = "fmt";
    rep.n_features = 16;
    rep.rows.push_back(make_row("hsgfs", 0, 0.90, 4, 0.25));
    rep.rows.push_back(make_row("hsgfs", 1, 0.80, 8, 0.50));
    rep.rows.push_back(make_row("ga", 7, 0.75, 2, 0.125, true));
    rep.rows[2].evaluations = 0;
    rep.aggregates = compute_aggregates(rep.rows, false);

    const auto lines = csv_lines(render_csv(rep));
    REQUIRE(lines.size() == 6);
    REQUIRE(lines[0] == "kind,algorithm,seed,accuracy_pct,n_selected,fraction_used,evaluations,external");
    REQUIRE(lines[1] == "run,hsgfs,0,90.00%,4,0.2500,56,0");
    REQUIRE(lines[2] == "run,hsgfs,1,80.00%,8,0.5000,56,0");
    // external rows carry no evaluation budget; the cell stays empty
    REQUIRE(lines[3] == "run,ga,7,75.00%,2,0.1250,,1");
    REQUIRE(lines[4] == "median,hsgfs,,85.00%,6.0,0.3750,,");
    // iqr accuracy is rendered in percentage points, no '%' sign
    REQUIRE(lines[5] == "iqr,hsgfs,,10.00,4.0,0.2500,,");
}

// ---------------------------------------------------------------------------
// Experiment runs
// ---------------------------------------------------------------------------

TEST_CASE("run_experiment pairs splits, derives per-algorithm seeds, equalizes budgets") {
    const ComparisonReport rep = run_experiment(small_spec());

    REQUIRE(rep.n_features == 25);
    REQUIRE(rep.n_samples == 120);
    REQUIRE(rep.rows.size() == 9);
    REQUIRE(rep.aggregates.size() == 3);
    REQUIRE(rep.config_echo.at("knn_k") == 3);

    // rows are grouped per algorithm, in the order the experiment listed them
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(rep.rows[i].algorithm == "hsgfs");
    for (std::size_t i = 3; i < 6; ++i) REQUIRE(rep.rows[i].algorithm == "bpso");
    for (std::size_t i = 6; i < 9; ++i) REQUIRE(rep.rows[i].algorithm == "bgsa");

    for (std::size_t i = 0; i < 3; ++i) {
        const auto& h = rep.rows[i];
        const auto& p = rep.rows[i + 3];
        const auto& g = rep.rows[i + 6];
        REQUIRE(h.seed == i);
        // one shared split per seed index keeps the comparison paired
        REQUIRE(h.split_seed == derive_seed(5, "split", i));
        REQUIRE(p.split_seed == h.split_seed);
        REQUIRE(g.split_seed == h.split_seed);
        // child run seeds come from the algorithm name
        REQUIRE(h.optimizer_seed == derive_seed(5, "hsgfs", i));
        REQUIRE(p.optimizer_seed == derive_seed(5, "bpso", i));
        REQUIRE(g.optimizer_seed == derive_seed(5, "bgsa", i));
        // 25 features keep local search active, so baselines run 2x iterations
        // and every engine spends exactly N(1 + 2*iters) evaluations
        REQUIRE(h.evaluations == 8 * (1 + 2 * 3));
        REQUIRE(p.evaluations == 8 * (1 + 2 * 3));
        REQUIRE(g.evaluations == 8 * (1 + 2 * 3));
        REQUIRE(h.convergence.size() == 4);
        REQUIRE(p.convergence.size() == 7);
        REQUIRE(h.best_mask.size() == 25);
        REQUIRE(h.accuracy >= 0.0);
        REQUIRE(h.accuracy <= 1.0);
        REQUIRE(h.fraction_used == static_cast<double>(h.n_selected) / 25.0);
    }
}

TEST_CASE("repeated experiments render byte-identical CSV") {
    const ComparisonReport a = run_experiment(small_spec());
    const ComparisonReport b = run_experiment(small_spec());
    REQUIRE(render_csv(a) == render_csv(b));

    // everything except wall time matches field by field
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE(a.rows[i].accuracy == b.rows[i].accuracy);
        REQUIRE(a.rows[i].n_selected == b.rows[i].n_selected);
        REQUIRE(a.rows[i].convergence == b.rows[i].convergence);
        REQUIRE(a.rows[i].best_mask == b.rows[i].best_mask);
    }
}

TEST_CASE("medians in the report match a recomputation from its own rows") {
    ExperimentSpec spec = small_spec();
    spec.algorithms = {Algorithm::Hsgfs};
    spec.n_seeds = 5;
    const ComparisonReport rep = run_experiment(spec);

    std::vector<double> acc, nsel;
    for (const auto& r : rep.rows) {
        acc.push_back(r.accuracy);
        nsel.push_back(static_cast<double>(r.n_selected));
    }
    std::sort(acc.begin(), acc.end());
    std::sort(nsel.begin(), nsel.end());
    REQUIRE(rep.aggregates.size() == 1);
    REQUIRE(rep.aggregates[0].n_runs == 5);
    REQUIRE(rep.aggregates[0].median_accuracy == acc[2]);
    REQUIRE(rep.aggregates[0].median_n_selected == nsel[2]);
    // hinges over 5 values: lower half {0,1,2} and upper half {2,3,4}
    REQUIRE(rep.aggregates[0].iqr_accuracy == acc[3] - acc[1]);
}

TEST_CASE("a single run still yields one row and degenerate aggregates") {
    ExperimentSpec spec = small_spec();
    spec.algorithms = {Algorithm::Hsgfs};
    spec.n_seeds = 1;
    const ComparisonReport rep = run_experiment(spec);
    REQUIRE(rep.rows.size() == 1);
    REQUIRE(rep.aggregates.size() == 1);
    REQUIRE(rep.aggregates[0].median_accuracy == rep.rows[0].accuracy);
    REQUIRE(rep.aggregates[0].iqr_accuracy == 0.0);
}

TEST_CASE("experiment spec validation") {
    ExperimentSpec spec = small_spec();
    spec.data.kind = DatasetSource::Kind::none;
    REQUIRE_THROWS_WITH(validate(spec), ContainsSubstring("dataset source"));

    spec = small_spec();
    spec.algorithms = {Algorithm::Hsgfs, Algorithm::Hsgfs};
    REQUIRE_THROWS_WITH(validate(spec), ContainsSubstring("duplicate algorithm"));

    spec = small_spec();
    spec.n_seeds = 0;
    REQUIRE_THROWS_AS(validate(spec), std::invalid_argument);

    spec = small_spec();
    spec.name = "";
    REQUIRE_THROWS_AS(validate(spec), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Serialization round trips
// ---------------------------------------------------------------------------

TEST_CASE("JSON round trip preserves the report and its CSV rendering") {
    ExperimentSpec spec = small_spec();
    spec.n_seeds = 2;
    const ComparisonReport rep = run_experiment(spec);

    const ComparisonReport back = report_from_json(report_to_json(rep));
    REQUIRE(back.name == rep.name);
    REQUIRE(back.n_features == rep.n_features);
    REQUIRE(back.master_seed == rep.master_seed);
    REQUIRE(back.rows.size() == rep.rows.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        REQUIRE(back.rows[i].algorithm == rep.rows[i].algorithm);
        REQUIRE(back.rows[i].seed == rep.rows[i].seed);
        REQUIRE(back.rows[i].accuracy == rep.rows[i].accuracy);
        REQUIRE(back.rows[i].convergence == rep.rows[i].convergence);
        REQUIRE(back.rows[i].best_mask == rep.rows[i].best_mask);
        REQUIRE(back.rows[i].wall_time == rep.rows[i].wall_time);
    }
    REQUIRE(render_csv(back) == render_csv(rep));
}

TEST_CASE("write_report_files produces loadable JSON next to the CSV") {
    namespace fs = std::filesystem;
    const fs::path dir = test_support::scratch_dir() / "reports" / "nested";

    ExperimentSpec spec = small_spec();
    spec.algorithms = {Algorithm::Hsgfs};
    spec.n_seeds = 2;
    spec.optimizer.max_iter = 2;
    const ComparisonReport rep = run_experiment(spec);
    const auto [json_path, csv_path] = write_report_files(rep, dir.string());

    REQUIRE(fs::path(json_path).filename() == "small.json");
    REQUIRE(fs::path(csv_path).filename() == "small.csv");
    REQUIRE(slurp(csv_path) == render_csv(rep));

    const ComparisonReport loaded = load_report_json(json_path);
    REQUIRE(render_csv(loaded) == render_csv(rep));

    // CSV run rows agree with the JSON rows they summarize
    const auto lines = csv_lines(slurp(csv_path));
    for (std::size_t i = 0; i < loaded.rows.size(); ++i) {
        const auto& r = loaded.rows[i];
        const std::string expected = "run," + r.algorithm + ',' + std::to_string(r.seed);
        REQUIRE(lines[i + 1].substr(0, expected.size()) == expected);
    }
}

// ---------------------------------------------------------------------------
// External results
// ---------------------------------------------------------------------------

TEST_CASE("external result import: happy path and malformed rows") {
    const auto dir = test_support::scratch_dir();
    const std::string good = test_support::write_file(
        "ext_good.csv",
        "algorithm,seed,accuracy,n_selected\n"
        "ga,1,0.9125,7\n"
        "\n"
        " sa , 2 , 0.88 , 12 \n");
    const auto rows = import_external_results(good);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].algorithm == "ga");
    REQUIRE(rows[0].seed == 1);
    REQUIRE(rows[0].accuracy == 0.9125);
    REQUIRE(rows[0].n_selected == 7);
    REQUIRE(rows[0].external);
    REQUIRE(rows[1].algorithm == "sa");

    const std::string bad_header =
        test_support::write_file("ext_header.csv", "algo,seed,acc,n\nga,1,0.9,7\n");
    REQUIRE_THROWS_WITH(import_external_results(bad_header),
                        ContainsSubstring("algorithm,seed,accuracy,n_selected"));

    const std::string bad_acc = test_support::write_file(
        "ext_acc.csv", "algorithm,seed,accuracy,n_selected\nga,1,0.9,7\nga,2,abc,7\n");
    REQUIRE_THROWS_WITH(import_external_results(bad_acc),
                        ContainsSubstring("line 3") && ContainsSubstring("bad accuracy"));

    const std::string out_of_range = test_support::write_file(
        "ext_range.csv", "algorithm,seed,accuracy,n_selected\nga,1,1.2,7\n");
    REQUIRE_THROWS_WITH(import_external_results(out_of_range),
                        ContainsSubstring("outside [0, 1]"));

    const std::string short_row = test_support::write_file(
        "ext_cols.csv", "algorithm,seed,accuracy,n_selected\nga,1,0.9\n");
    REQUIRE_THROWS_WITH(import_external_results(short_row),
                        ContainsSubstring("expected 4 columns"));

    REQUIRE_THROWS_WITH(import_external_results((dir / "missing_ext.csv").string()),
                        ContainsSubstring("cannot open"));
}

TEST_CASE("merged external rows render in the CSV; aggregates obey the flag") {
    ExperimentSpec spec = small_spec();
    spec.algorithms = {Algorithm::Hsgfs};
    spec.n_seeds = 2;
    spec.optimizer.max_iter = 2;
    ComparisonReport rep = run_experiment(spec);

    std::vector<ReportRow> ext;
    ext.push_back(make_row("ga", 3, 0.95, 5, 0.0, true));
    ext[0].evaluations = 0;

    ComparisonReport excluded = rep;
    merge_external_rows(excluded, ext, false);
    REQUIRE(excluded.rows.size() == 3);
    REQUIRE(excluded.rows.back().fraction_used == 5.0 / 25.0);
    REQUIRE(excluded.aggregates.size() == 1);  // ga kept out of the summary
    REQUIRE_THAT(render_csv(excluded), ContainsSubstring("run,ga,3,95.00%,5,0.2000,,1"));

    ComparisonReport included = rep;
    merge_external_rows(included, ext, true);
    REQUIRE(included.aggregates.size() == 2);
    REQUIRE(included.aggregates[1].algorithm == "ga");
    REQUIRE(included.include_external);

    std::vector<ReportRow> oversized;
    oversized.push_back(make_row("ga", 4, 0.9, 26, 0.0, true));
    REQUIRE_THROWS_WITH(merge_external_rows(included, oversized, true),
                        ContainsSubstring("exceeds n_features"));
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

TEST_CASE("spec files: comments, overrides and every key in one place") {
    const std::string path = test_support::write_file("exp.spec",
                                                      "# comparison setup\n"
                                                      "name = demo\n"
                                                      "synth_samples = 90\n"
                                                      "synth_features = 30\n"
                                                      "synth_informative = 5\n"
                                                      "synth_classes = 3\n"
                                                      "synth_noise = 0.05\n"
                                                      "synth_seed = 4\n"
                                                      "\n"
                                                      "algorithms = hsgfs, bpso\n"
                                                      "seeds = 4\n"
                                                      "master_seed = 9\n"
                                                      "train_fraction = 0.75\n"
                                                      "k = 5\n"
                                                      "ranking_bins = 8\n"
                                                      "pop = 12\n"
                                                      "iters = 6\n"
                                                      "g0 = 2.0\n"
                                                      "alpha = 10\n"
                                                      "epsilon = 1e-8\n"
                                                      "vmax = 4\n"
                                                      "memory_cap = 7\n"
                                                      "local_search = off\n"
                                                      "workers = 2\n"
                                                      "out = results\n"
                                                      "iters = 8\n");  // later line wins
    const ExperimentSpec spec = load_spec_file(path);
    REQUIRE(spec.name == "demo");
    REQUIRE(spec.data.kind == DatasetSource::Kind::synthetic);
    REQUIRE(spec.data.synthetic.n_samples == 90);
    REQUIRE(spec.data.synthetic.class_count == 3);
    REQUIRE(spec.data.synthetic.noise_rate == 0.05);
    REQUIRE(spec.algorithms == std::vector<Algorithm>{Algorithm::Hsgfs, Algorithm::Bpso});
    REQUIRE(spec.n_seeds == 4);
    REQUIRE(spec.master_seed == 9);
    REQUIRE(spec.train_fraction == 0.75);
    REQUIRE(spec.knn.k == 5);
    REQUIRE(spec.ranking_bins == 8);
    REQUIRE(spec.optimizer.population == 12);
    REQUIRE(spec.optimizer.max_iter == 8);
    REQUIRE(spec.optimizer.g0 == 2.0);
    REQUIRE(spec.optimizer.memory_capacity == 7);
    REQUIRE_FALSE(spec.optimizer.local_search_enabled);
    REQUIRE(spec.workers == 2);
    REQUIRE(spec.output_dir == "results");
}

TEST_CASE("spec file errors carry the file name and line number") {
    const std::string unknown = test_support::write_file("bad_key.spec", "name = x\nfoo = 1\n");
    REQUIRE_THROWS_WITH(load_spec_file(unknown),
                        ContainsSubstring("line 2") && ContainsSubstring("unknown key 'foo'"));

    const std::string no_eq = test_support::write_file("no_eq.spec", "just a line\n");
    REQUIRE_THROWS_WITH(load_spec_file(no_eq), ContainsSubstring("expected key=value"));

    const std::string conflict =
        test_support::write_file("conflict.spec", "csv = data.csv\nsynth_samples = 10\n");
    REQUIRE_THROWS_WITH(load_spec_file(conflict),
                        ContainsSubstring("already set to csv"));

    const std::string bad_int = test_support::write_file("bad_int.spec", "seeds = many\n");
    REQUIRE_THROWS_WITH(load_spec_file(bad_int), ContainsSubstring("unsigned integer"));
}

TEST_CASE("budget equalization doubles iterations only while local search is live") {
    HsgfsConfig base;
    base.max_iter = 15;
    REQUIRE(equalized_config(base, 50).max_iter == 30);
    REQUIRE(equalized_config(base, 20).max_iter == 30);  // floor(100/100) = 1
    REQUIRE(equalized_config(base, 19).max_iter == 15);  // floor(95/100) = 0
    base.local_search_enabled = false;
    REQUIRE(equalized_config(base, 50).max_iter == 15);
}
