#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "npss/errors.hpp"
#include "npss/evaluate.hpp"
#include "npss/matrix_io.hpp"
#include "npss/pvalues.hpp"
#include "npss/report.hpp"
#include "npss/strategies.hpp"

namespace npss::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

ActivationMatrix load(const std::string& path) { return load_matrix(path, format_from_path(path)); }

// Flags shared by every subcommand that runs a scan.
struct ScanFlags {
    std::string statistic = "hc";
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t max_alternations = 100;
    double tolerance = 1e-12;
    bool no_gate = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--statistic", statistic, "Scoring statistic")
            ->check(CLI::IsMember({"hc", "bj"}))
            ->capture_default_str();
        cmd.add_option("--restarts", restarts, "Random restarts per scan")->capture_default_str();
        cmd.add_option("--seed", seed, "Seed")->capture_default_str();
        cmd.add_option("--max-alternations", max_alternations, "Alternation cap per restart")->capture_default_str();
        cmd.add_option("--tolerance", tolerance, "Minimum score gain for a step to count")->capture_default_str();
        cmd.add_flag("--no-gate", no_gate, "Score under-representation of small p-values too");
    }

    ScanConfig config() const {
        ScanConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.max_alternations = max_alternations;
        cfg.score_tolerance = tolerance;
        cfg.score_cfg.statistic = parse_statistic(statistic);
        cfg.score_cfg.one_sided_gate = !no_gate;
        cfg.validate();
        return cfg;
    }
};

fs::path csv_sibling(const fs::path& json_path) {
    fs::path csv = json_path;
    if (csv.extension() == ".json") {
        csv.replace_extension(".csv");
    } else {
        csv += ".csv";
    }
    return csv;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-parametric subset scanning of activation matrices", "npss"};
    app.set_config("--config", "", "TOML/INI file whose keys mirror the flags (flags win)");
    app.require_subcommand(1);

    std::function<void()> action;

    // pvalues
    auto* pv = app.add_subcommand("pvalues", "Compute empirical p-values of a test matrix");
    std::string pv_reference, pv_test, pv_tail = "right", pv_out;
    std::uint64_t pv_seed = 0;
    pv->add_option("--reference", pv_reference, "Reference activation matrix")->required();
    pv->add_option("--test", pv_test, "Test activation matrix")->required();
    pv->add_option("--tail", pv_tail, "Tail")->check(CLI::IsMember({"left", "right", "two"}))->capture_default_str();
    pv->add_option("--seed", pv_seed, "Seed for tie-range draws")->capture_default_str();
    pv->add_option("--out", pv_out, "Output p-value file")->required();
    pv->callback([&] {
        action = [&] {
            const auto p = empirical_pvalues(load(pv_reference), load(pv_test), parse_tail(pv_tail), pv_seed);
            save_pvalues(p, pv_out);
        };
    });

    // scan
    auto* sc = app.add_subcommand("scan", "Scan a p-value file for its most anomalous subset");
    std::string sc_pvalues, sc_out;
    ScanFlags sc_flags;
    sc->add_option("--pvalues", sc_pvalues, "p-value file")->required();
    sc->add_option("--out", sc_out, "Output ScanResult JSON")->required();
    sc_flags.add_to(*sc);
    sc->callback([&] {
        action = [&] {
            const ScanConfig cfg = sc_flags.config();
            const PValueMatrix p = load_pvalues(sc_pvalues);
            json doc = to_json(scan(p, cfg));
            doc["config"] = {{"pvalues", sc_pvalues},
                             {"pvalue_seed", p.seed()},
                             {"reference_size", p.reference_size()},
                             {"scan", to_json(cfg)}};
            write_json(doc, sc_out);
        };
    });

    // run
    auto* rn = app.add_subcommand("run", "Compute p-values and run a scanning strategy");
    std::string rn_reference, rn_test, rn_method = "scan2", rn_out;
    std::size_t rn_k = 3;
    ScanFlags rn_flags;
    rn->add_option("--reference", rn_reference, "Reference activation matrix")->required();
    rn->add_option("--test", rn_test, "Test activation matrix")->required();
    rn->add_option("--method", rn_method, "Strategy")
        ->check(CLI::IsMember({"scanL", "scanR", "scanLR", "scan2"}))
        ->capture_default_str();
    rn->add_option("--k", rn_k, "Iterations for scan2")->capture_default_str();
    rn->add_option("--out", rn_out, "Output StrategyResult JSON")->required();
    rn_flags.add_to(*rn);
    rn->callback([&] {
        action = [&] {
            const ScanConfig cfg = rn_flags.config();
            StrategySpec spec{parse_strategy(rn_method), rn_k};
            json doc = to_json(run_strategy(load(rn_reference), load(rn_test), spec, cfg));
            doc["config"] = {{"reference", rn_reference}, {"test", rn_test}, {"method", rn_method},
                             {"k", rn_k},                 {"scan", to_json(cfg)}};
            write_json(doc, rn_out);
        };
    });

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score a strategy result against labels");
    std::string ev_result, ev_labels, ev_out;
    ev->add_option("--result", ev_result, "StrategyResult JSON")->required();
    ev->add_option("--labels", ev_labels, "Label CSV (id,label) in test-row order")->required();
    ev->add_option("--out", ev_out, "Output TrialMetrics JSON")->required();
    ev->callback([&] {
        action = [&] {
            const StrategyResult result = strategy_result_from_json(read_json(ev_result));
            const LabelVector labels = load_labels(ev_labels);
            if (result.test_rows != labels.size()) {
                throw LabelMismatchError("result covers " + std::to_string(result.test_rows) +
                                         " test rows but the label file has " + std::to_string(labels.size()));
            }
            std::map<std::string, std::size_t> position;
            for (std::size_t i = 0; i < labels.size(); ++i) position.emplace(labels.ids()[i], i);
            std::vector<std::size_t> flagged;
            for (const auto& id : result.flagged_row_ids) {
                auto it = position.find(id);
                if (it == position.end()) throw LabelMismatchError("no label for flagged row '" + id + "'");
                flagged.push_back(it->second);
            }
            TrialMetrics m = compute_metrics(flagged, labels, labels.size());
            if (result.nodes > 0) add_node_metrics(m, result, result.nodes);
            json doc = to_json(m);
            doc["schema_version"] = kSchemaVersion;
            doc["config"] = {{"result", ev_result}, {"labels", ev_labels}, {"strategy", to_string(result.strategy)}};
            write_json(doc, ev_out);
        };
    });

    // experiment
    auto* ex = app.add_subcommand("experiment", "Repeated-trial detection experiment");
    std::string ex_reference, ex_clean, ex_anomalous, ex_method = "scan2", ex_out;
    std::size_t ex_k = 3, ex_trials = 10, ex_test_size = 800;
    double ex_anom_frac = 0.1;
    ScanFlags ex_flags;
    ex->add_option("--reference", ex_reference, "Reference activation matrix")->required();
    ex->add_option("--clean", ex_clean, "Clean pool")->required();
    ex->add_option("--anomalous", ex_anomalous, "Anomalous pool")->required();
    ex->add_option("--method", ex_method, "Strategy")
        ->check(CLI::IsMember({"scanL", "scanR", "scanLR", "scan2"}))
        ->capture_default_str();
    ex->add_option("--k", ex_k, "Iterations for scan2")->capture_default_str();
    ex->add_option("--trials", ex_trials, "Number of sampled test sets")->capture_default_str();
    ex->add_option("--test-size", ex_test_size, "Rows per test set")->capture_default_str();
    ex->add_option("--anom-frac", ex_anom_frac, "Fraction of anomalous rows")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    ex->add_option("--out", ex_out, "Output report JSON (CSV written alongside)")->required();
    ex_flags.add_to(*ex);
    ex->callback([&] {
        action = [&] {
            const ScanConfig cfg = ex_flags.config();
            ExperimentConfig config{ex_trials, ex_test_size, ex_anom_frac, ex_flags.seed};
            const auto report = run_experiment(load(ex_reference), load(ex_clean), load(ex_anomalous),
                                               StrategySpec{parse_strategy(ex_method), ex_k}, config, cfg);
            json doc = to_json(report);
            doc["config"]["inputs"] = {{"reference", ex_reference}, {"clean", ex_clean}, {"anomalous", ex_anomalous}};
            write_json(doc, ex_out);
            write_text(experiment_csv(report), csv_sibling(ex_out));
        };
    });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("npss");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << app.help();
        report_error(err, "UsageError", e.what());
        return kValidation;
    }

    try {
        if (action) action();
        return kOk;
    } catch (const IoError& e) {
        report_error(err, e.kind(), e.what());
        return kIo;
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what());
        return kValidation;
    } catch (const std::exception& e) {
        report_error(err, "InternalError", e.what());
        return kValidation;
    }
}

}  // namespace npss::cli
