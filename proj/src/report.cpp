#include "npss/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "npss/errors.hpp"

namespace npss {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

json summary_json(const MetricSummary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

json to_json(const ScoreConfig& cfg) {
    return {{"statistic", to_string(cfg.statistic)},
            {"alpha_grid", cfg.alpha_grid},
            {"one_sided_gate", cfg.one_sided_gate}};
}

json to_json(const ScanConfig& cfg) {
    return {{"restarts", cfg.restarts},
            {"max_alternations", cfg.max_alternations},
            {"score_tolerance", cfg.score_tolerance},
            {"seed", cfg.seed},
            {"score", to_json(cfg.score_cfg)}};
}

json to_json(const ScanResult& r) {
    return {{"schema_version", kSchemaVersion},
            {"score", r.score},
            {"alpha", r.best_alpha},
            {"rows", r.row_ids},
            {"row_indices", r.rows},
            {"cols", r.cols},
            {"statistic", to_string(r.statistic)},
            {"tail", to_string(r.tail)},
            {"seed", r.seed},
            {"restarts", r.restarts},
            {"restart_index", r.restart_index},
            {"alternations", r.alternations}};
}

json to_json(const StrategyResult& r) {
    json per_scan = json::array();
    for (const auto& s : r.per_scan) per_scan.push_back(to_json(s));
    return {{"schema_version", kSchemaVersion},
            {"strategy", to_string(r.strategy)},
            {"k", r.k},
            {"seed", r.seed},
            {"test_rows", r.test_rows},
            {"nodes", r.nodes},
            {"flagged_row_ids", r.flagged_row_ids},
            {"flagged_rows", r.flagged_rows},
            {"per_scan", per_scan},
            {"node_sets", r.node_sets}};
}

StrategyResult strategy_result_from_json(const json& doc) {
    try {
        StrategyResult r;
        r.strategy = parse_strategy(doc.at("strategy").get<std::string>());
        r.k = doc.at("k").get<std::size_t>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.test_rows = doc.at("test_rows").get<std::size_t>();
        r.nodes = doc.at("nodes").get<std::size_t>();
        r.flagged_row_ids = doc.at("flagged_row_ids").get<std::vector<std::string>>();
        r.flagged_rows = doc.at("flagged_rows").get<std::vector<std::size_t>>();
        r.node_sets = doc.at("node_sets").get<std::vector<std::vector<std::size_t>>>();
        for (const auto& s : doc.at("per_scan")) {
            ScanResult scan;
            scan.score = s.at("score").get<double>();
            scan.best_alpha = s.at("alpha").get<double>();
            scan.row_ids = s.at("rows").get<std::vector<std::string>>();
            scan.rows = s.at("row_indices").get<std::vector<std::size_t>>();
            scan.cols = s.at("cols").get<std::vector<std::size_t>>();
            scan.statistic = parse_statistic(s.at("statistic").get<std::string>());
            scan.tail = parse_tail(s.at("tail").get<std::string>());
            scan.seed = s.at("seed").get<std::uint64_t>();
            scan.restarts = s.at("restarts").get<std::size_t>();
            scan.restart_index = s.at("restart_index").get<std::size_t>();
            scan.alternations = s.at("alternations").get<std::size_t>();
            r.per_scan.push_back(std::move(scan));
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed strategy result: ") + e.what());
    }
}

json to_json(const TrialMetrics& m) {
    json doc = {{"precision", m.precision},
                {"recall", m.recall},
                {"size", m.size},
                {"node_size", m.node_size},
                {"constituent_node_sizes", m.constituent_node_sizes},
                {"tp", m.tp},
                {"n_flagged", m.n_flagged},
                {"n_anomalous", m.n_anomalous},
                {"test_size", m.test_size},
                {"precision_degenerate", m.precision_degenerate},
                {"recall_degenerate", m.recall_degenerate}};
    doc["inode"] = m.inode ? json(*m.inode) : json(nullptr);
    return doc;
}

json to_json(const ExperimentReport& r) {
    json trials = json::array();
    for (std::size_t t = 0; t < r.trials.size(); ++t) {
        json row = to_json(r.trials[t]);
        row["trial"] = t;
        row["sample_seed"] = r.sample_seeds[t];
        row["scan_seed"] = r.scan_seeds[t];
        trials.push_back(std::move(row));
    }
    json summary = {{"precision", summary_json(r.precision)},
                    {"recall", summary_json(r.recall)},
                    {"size", summary_json(r.size)},
                    {"node_size", summary_json(r.node_size)}};
    if (r.inode) summary["inode"] = summary_json(*r.inode);

    return {{"schema_version", kSchemaVersion},
            {"config",
             {{"strategy", to_string(r.strategy.kind)},
              {"k", r.strategy.k},
              {"trials", r.config.trials},
              {"test_size", r.config.test_size},
              {"anom_frac", r.config.anom_frac},
              {"seed", r.config.seed},
              {"nodes", r.nodes},
              {"reference_size", r.reference_size},
              {"scan", to_json(r.scan_cfg)}}},
            {"std_convention", "population"},
            {"trials", trials},
            {"summary", summary},
            {"node_frequency", r.node_frequency},
            {"node_frequency_by_scan", r.node_frequency_by_scan}};
}

std::string experiment_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "kind,trial,n_anomalous,n_flagged,tp,precision,recall,size,node_size,inode\n";
    for (std::size_t t = 0; t < r.trials.size(); ++t) {
        const auto& m = r.trials[t];
        out << "trial," << t << ',' << m.n_anomalous << ',' << m.n_flagged << ',' << m.tp << ','
            << fmt_double(m.precision) << ',' << fmt_double(m.recall) << ',' << fmt_double(m.size) << ','
            << fmt_double(m.node_size) << ',' << (m.inode ? std::to_string(*m.inode) : "") << '\n';
    }
    auto summary_row = [&](const char* kind, auto pick) {
        out << kind << ",,,,," << fmt_double(pick(r.precision)) << ',' << fmt_double(pick(r.recall)) << ','
            << fmt_double(pick(r.size)) << ',' << fmt_double(pick(r.node_size)) << ','
            << (r.inode ? fmt_double(pick(*r.inode)) : "") << '\n';
    };
    summary_row("mean", [](const MetricSummary& s) { return s.mean; });
    summary_row("std", [](const MetricSummary& s) { return s.std; });
    return out.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

void write_json(const json& doc, const std::filesystem::path& path) { write_text(doc.dump(2) + "\n", path); }

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace npss
