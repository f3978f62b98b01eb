// Benchmark harness. Four subcommands:
//   run      one algorithm, one seed index, report written as JSON + CSV
//   compare  (algorithm, seed) grid from flags and/or a key=value spec file
//   synth    emit a planted-feature synthetic dataset to CSV
//   import   merge an external result CSV into an existing report JSON
// Exit code 0 on success, 1 with a diagnostic on stderr otherwise. The
// HSGFS_OUTPUT_DIR environment variable overrides the output directory of
// run/compare/import; nothing else is read from the environment.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsgfs/hsgfs.hpp"

namespace {

// Flags shared by run and compare. Each option funnels through
// apply_spec_entry so the CLI and spec files accept identical vocabulary.
struct ExperimentFlags {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        cmd->add_option_function<std::string>(
            flag,
            [this, key](const std::string& v) { entries.emplace_back(key, v); },
            help);
    }

    void apply(hsgfs::ExperimentSpec& spec) const {
        for (const auto& [key, value] : entries)
            hsgfs::apply_spec_entry(spec, key, value, "--" + key);
    }
};

void add_shared_options(CLI::App* cmd, ExperimentFlags& flags) {
    flags.add(cmd, "--data", "csv", "Dataset CSV path (header row, label column included)");
    flags.add(cmd, "--label-col", "label_col", "Label column, by name or 0-based index");
    flags.add(cmd, "--synth-samples", "synth_samples", "Synthetic dataset: sample count");
    flags.add(cmd, "--synth-features", "synth_features", "Synthetic dataset: feature count");
    flags.add(cmd, "--synth-informative", "synth_informative",
              "Synthetic dataset: informative feature count");
    flags.add(cmd, "--synth-classes", "synth_classes", "Synthetic dataset: class count");
    flags.add(cmd, "--synth-noise", "synth_noise", "Synthetic dataset: label noise rate [0,1)");
    flags.add(cmd, "--synth-seed", "synth_seed", "Synthetic dataset: generator seed");
    flags.add(cmd, "--name", "name", "Report name (output files are <name>.json/.csv)");
    flags.add(cmd, "--train-fraction", "train_fraction",
              "Per-class fraction sent to train (default 2/3)");
    flags.add(cmd, "--k", "k", "k-NN neighbor count, 2..6 (default 3)");
    flags.add(cmd, "--ranking-bins", "ranking_bins", "Filter-ranking histogram bins (default 10)");
    flags.add(cmd, "--pop", "pop", "Population size (default 20)");
    flags.add(cmd, "--iters", "iters", "Iteration count (default 15)");
    flags.add(cmd, "--g0", "g0", "Initial gravitational constant (default 1)");
    flags.add(cmd, "--alpha", "alpha", "Gravitational decay coefficient (default 20)");
    flags.add(cmd, "--epsilon", "epsilon", "Small positive guard value (default 1e-9)");
    flags.add(cmd, "--vmax", "vmax", "Velocity clamp (default 6)");
    flags.add(cmd, "--memory-cap", "memory_cap", "Memory archive capacity (0 = population size)");
    flags.add(cmd, "--dump-ranking", "dump_ranking",
              "Write the seed-index-0 feature ranking to this CSV");
    flags.add(cmd, "--workers", "workers", "Fitness evaluation threads (0 = hardware)");
    flags.add(cmd, "--out", "out", "Output directory (default .)");
    cmd->add_flag_callback(
        "--no-local-search",
        [&flags] { flags.entries.emplace_back("local_search", "off"); },
        "Disable the ranking-guided local search");
}

// The CLI restricts k to the 2..6 range the benchmark protocol sweeps; the
// library itself only requires k >= 1, so the bound lives at the user surface.
void check_cli_k(const hsgfs::ExperimentSpec& spec) {
    if (spec.knn.k < 2 || spec.knn.k > 6)
        throw std::runtime_error("--k must lie in 2..6, got " + std::to_string(spec.knn.k));
}

void apply_output_dir_override(hsgfs::ExperimentSpec& spec) {
    if (const char* dir = std::getenv("HSGFS_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
        spec.output_dir = dir;
}

int finish_experiment(const hsgfs::ExperimentSpec& spec) {
    const hsgfs::ComparisonReport report = hsgfs::run_experiment(spec);
    const auto [json_path, csv_path] = hsgfs::write_report_files(report, spec.output_dir);
    for (const auto& a : report.aggregates)
        std::cout << a.algorithm << ": median accuracy "
                  << hsgfs::detail::percent_cell(a.median_accuracy) << ", median features "
                  << hsgfs::detail::fixed_cell(a.median_n_selected, 1) << " ("
                  << hsgfs::detail::fixed_cell(a.median_fraction * 100.0, 2) << "% of "
                  << report.n_features << ")\n";
    std::cout << "wrote " << json_path << " and " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-selection benchmark: hybrid swarm/gravitation search with k-NN fitness"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Run one algorithm once and write its report");
    ExperimentFlags run_flags;
    std::string run_algo = "hsgfs";
    std::string run_seed = "1";
    std::string run_classifier = "knn";
    run_cmd->add_option("--algo", run_algo, "Algorithm: hsgfs, bpso or bgsa (default hsgfs)");
    run_cmd->add_option("--seed", run_seed, "Master seed for this run (default 1)");
    run_cmd->add_option("--classifier", run_classifier, "Wrapper classifier (knn only)");
    add_shared_options(run_cmd, run_flags);

    // --- compare -----------------------------------------------------------
    auto* cmp_cmd = app.add_subcommand("compare", "Run an (algorithm, seed) grid and write its report");
    ExperimentFlags cmp_flags;
    std::string cmp_spec_path;
    std::string cmp_algos;
    std::string cmp_seeds;
    std::string cmp_master;
    std::string cmp_external;
    bool cmp_include_external = false;
    cmp_cmd->add_option("--spec", cmp_spec_path, "key=value spec file; flags override its entries");
    cmp_cmd->add_option("--algo", cmp_algos, "Comma list of algorithms (default hsgfs,bpso,bgsa)");
    cmp_cmd->add_option("--seeds", cmp_seeds, "Number of seed indices (default 10)");
    cmp_cmd->add_option("--master-seed", cmp_master, "Master seed spawning all child seeds");
    cmp_cmd->add_option("--external", cmp_external,
                        "External result CSV (algorithm,seed,accuracy,n_selected) to merge");
    cmp_cmd->add_flag("--include-external", cmp_include_external,
                      "Fold external rows into the aggregates");
    add_shared_options(cmp_cmd, cmp_flags);

    // --- synth -------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-feature dataset CSV");
    hsgfs::SyntheticSpec synth_spec;
    std::string synth_out = "synthetic.csv";
    std::string synth_truth;
    synth_cmd->add_option("--samples", synth_spec.n_samples, "Sample count (default 300)");
    synth_cmd->add_option("--features", synth_spec.n_features, "Feature count (default 50)");
    synth_cmd->add_option("--informative", synth_spec.n_informative,
                          "Informative feature count (default 10)");
    synth_cmd->add_option("--classes", synth_spec.class_count, "Class count (default 2)");
    synth_cmd->add_option("--noise", synth_spec.noise_rate, "Label noise rate [0,1) (default 0)");
    synth_cmd->add_option("--seed", synth_spec.seed, "Generator seed (default 1)");
    synth_cmd->add_option("--out", synth_out, "Output CSV path (default synthetic.csv)");
    synth_cmd->add_option("--truth", synth_truth,
                          "Also write the informative feature indices to this CSV");

    // --- import ------------------------------------------------------------
    auto* imp_cmd = app.add_subcommand("import", "Merge external results into an existing report");
    std::string imp_report;
    std::string imp_external;
    std::string imp_name;
    std::string imp_out = ".";
    bool imp_include_external = false;
    imp_cmd->add_option("--report", imp_report, "Existing report JSON")->required();
    imp_cmd->add_option("--external", imp_external,
                        "External result CSV (algorithm,seed,accuracy,n_selected)")
        ->required();
    imp_cmd->add_option("--name", imp_name, "Merged report name (default: old name + \"-merged\")");
    imp_cmd->add_option("--out", imp_out, "Output directory (default .)");
    imp_cmd->add_flag("--include-external", imp_include_external,
                      "Fold external rows into the aggregates");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            hsgfs::ExperimentSpec spec;
            spec.name = "run";
            spec.n_seeds = 1;
            run_flags.apply(spec);
            hsgfs::apply_spec_entry(spec, "algo", run_algo, "--algo");
            if (spec.algorithms.size() != 1)
                throw std::runtime_error("--algo: run takes exactly one algorithm");
            hsgfs::apply_spec_entry(spec, "master_seed", run_seed, "--seed");
            if (run_classifier != "knn")
                throw std::runtime_error("--classifier: only 'knn' is available, got '" +
                                         run_classifier + "'");
            check_cli_k(spec);
            apply_output_dir_override(spec);
            return finish_experiment(spec);
        }
        if (cmp_cmd->parsed()) {
            hsgfs::ExperimentSpec spec;
            spec.name = "compare";
            spec.algorithms = {hsgfs::Algorithm::Hsgfs, hsgfs::Algorithm::Bpso,
                               hsgfs::Algorithm::Bgsa};
            if (!cmp_spec_path.empty()) spec = hsgfs::load_spec_file(cmp_spec_path, spec);
            cmp_flags.apply(spec);
            if (!cmp_algos.empty()) hsgfs::apply_spec_entry(spec, "algo", cmp_algos, "--algo");
            if (!cmp_seeds.empty()) hsgfs::apply_spec_entry(spec, "seeds", cmp_seeds, "--seeds");
            if (!cmp_master.empty())
                hsgfs::apply_spec_entry(spec, "master_seed", cmp_master, "--master-seed");
            if (!cmp_external.empty()) spec.external_csv = cmp_external;
            if (cmp_include_external) spec.include_external = true;
            check_cli_k(spec);
            apply_output_dir_override(spec);
            return finish_experiment(spec);
        }
        if (synth_cmd->parsed()) {
            const auto [dataset, truth] = hsgfs::generate_synthetic(synth_spec);
            hsgfs::write_dataset_csv(dataset, synth_out);
            std::cout << "wrote " << synth_out << " (" << dataset.n_samples << " samples, "
                      << dataset.n_features << " features, " << dataset.class_count
                      << " classes)\n";
            if (!synth_truth.empty()) {
                hsgfs::write_truth_csv(truth, synth_truth);
                std::cout << "wrote " << synth_truth << "\n";
            }
            return 0;
        }
        if (imp_cmd->parsed()) {
            hsgfs::ComparisonReport report = hsgfs::load_report_json(imp_report);
            hsgfs::merge_external_rows(report, hsgfs::import_external_results(imp_external),
                                       imp_include_external);
            report.name = imp_name.empty() ? report.name + "-merged" : imp_name;
            std::string out_dir = imp_out;
            if (const char* dir = std::getenv("HSGFS_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
                out_dir = dir;
            const auto [json_path, csv_path] = hsgfs::write_report_files(report, out_dir);
            std::cout << "wrote " << json_path << " and " << csv_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
