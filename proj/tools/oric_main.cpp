// oric — streaming categorical interaction miner.
//
// Subcommands: init, update, select, emit, plan, simulate, eval. Each performs
// one pipeline step and writes a deterministic report; all randomness is
// seeded, so identical flags and inputs give byte-identical outputs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oric/dataio.hpp"
#include "oric/estimator.hpp"
#include "oric/oracle.hpp"
#include "oric/planner.hpp"
#include "oric/stream_synth.hpp"

namespace fs = std::filesystem;
using namespace oric;

namespace {

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::string fmt_count(double value) {
    char buf[64];
    if (value < 1e15)
        std::snprintf(buf, sizeof buf, "%.0f", value);
    else
        std::snprintf(buf, sizeof buf, "%.6e", value);
    return buf;
}

// Report sink: stdout plus an optional file copy.
struct Report {
    std::ostringstream text;

    template <class T>
    Report& operator<<(const T& value) {
        text << value;
        return *this;
    }

    void flush(const std::optional<std::string>& path) {
        std::cout << text.str();
        if (path) {
            std::ofstream out(*path, std::ios::trunc);
            if (!out)
                throw OricError(Errc::io_error, "cannot write " + *path);
            out << text.str();
        }
    }
};

fs::path default_encoder_path(const std::string& model_path) {
    return fs::path(model_path + ".encoder.json");
}

struct HyperFlags {
    std::uint32_t chains = 10000;
    std::uint32_t max_length = 20;
    std::uint32_t max_tail_size = 4;
    std::uint32_t top_frequent = 100;
    std::uint32_t top_confident = 50;
    double decay = 1.0;
    std::uint64_t seed = 42;

    void attach(CLI::App& cmd) {
        cmd.add_option("--chains", chains, "Chains per class per update (M)")
            ->capture_default_str();
        cmd.add_option("--max-length", max_length, "Maximum chain length (L)")
            ->capture_default_str();
        cmd.add_option("--tail-size", max_tail_size,
                       "Stop a chain once its tail has at most this many items")
            ->capture_default_str();
        cmd.add_option("--top-frequent", top_frequent,
                       "Frequent-pattern candidates kept per selection (d_freq)")
            ->capture_default_str();
        cmd.add_option("--top-confident", top_confident,
                       "Confident interactions kept per selection (d_conf)")
            ->capture_default_str();
        cmd.add_option("--decay", decay, "Per-period decay of history (gamma)")
            ->capture_default_str();
        cmd.add_option("--seed", seed, "Base RNG seed")->capture_default_str();
    }

    OricConfig to_config() const {
        OricConfig cfg;
        cfg.chains.num_chains = chains;
        cfg.chains.max_length = max_length;
        cfg.chains.max_tail_size = max_tail_size;
        cfg.chains.rng_seed = seed;
        cfg.top_frequent = top_frequent;
        cfg.top_confident = top_confident;
        cfg.decay = decay;
        return cfg;
    }
};

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

// Planted-pattern flag: "f0=1&f3=2@pos=0.5,0.6;neg=0.1" — single values
// broadcast over all periods.
synth::PlantedPattern parse_planted(const std::string& text,
                                    std::span<const std::string> schema,
                                    std::uint32_t periods) {
    const auto at = text.find('@');
    if (at == std::string::npos)
        throw OricError(Errc::invalid_config,
                        "planted spec needs '@pos=...;neg=...': " + text);
    synth::PlantedPattern planted;
    planted.pattern = Pattern::parse(text.substr(0, at), schema);

    auto parse_schedule = [&](const std::string& part) {
        std::vector<double> values;
        for (const auto& tok : split_list(part, ','))
            values.push_back(std::stod(tok));
        if (values.size() == 1) values.assign(periods, values[0]);
        if (values.size() < periods)
            throw OricError(Errc::schedule_too_short,
                            "schedule '" + part + "' shorter than --periods");
        return values;
    };

    for (const auto& clause : split_list(text.substr(at + 1), ';')) {
        if (clause.rfind("pos=", 0) == 0)
            planted.freq_pos = parse_schedule(clause.substr(4));
        else if (clause.rfind("neg=", 0) == 0)
            planted.freq_neg = parse_schedule(clause.substr(4));
        else
            throw OricError(Errc::invalid_config,
                            "unknown schedule clause '" + clause + "'");
    }
    if (planted.freq_pos.empty() || planted.freq_neg.empty())
        throw OricError(Errc::invalid_config,
                        "planted spec needs both pos= and neg= schedules");
    return planted;
}

void write_selection(Report& report, const Selection& selection,
                     std::span<const std::string> schema,
                     const std::string& format) {
    if (format == "rows") {
        report << "# oric-selection v1\n";
        report << "# pattern\tfreq_pos\tfreq_neg\tconfidence\tstatus\tpruned_by\n";
        auto row = [&](const RankedInteraction& ri, const char* status) {
            report << ri.pattern.to_string(schema) << '\t' << fmt(ri.freq_pos)
                   << '\t' << fmt(ri.freq_neg) << '\t' << fmt(ri.confidence)
                   << '\t' << status << '\t'
                   << (ri.pruned_by ? ri.pruned_by->to_string(schema) : "-")
                   << '\n';
        };
        for (const auto& ri : selection.selected) row(ri, "selected");
        for (const auto& ri : selection.pruned) row(ri, "pruned");
        return;
    }

    report << "rank  confidence  freq_pos  freq_neg  interaction\n";
    std::size_t rank = 1;
    for (const auto& ri : selection.selected) {
        char line[256];
        std::snprintf(line, sizeof line, "%4zu  %10.6f  %8.6f  %8.6f  %s\n",
                      rank++, ri.confidence, ri.freq_pos, ri.freq_neg,
                      ri.pattern.to_string(schema).c_str());
        report << line;
    }
    for (const auto& ri : selection.pruned) {
        char line[256];
        std::snprintf(line, sizeof line, "   -  %10.6f  %8.6f  %8.6f  %s (pruned by %s)\n",
                      ri.confidence, ri.freq_pos, ri.freq_neg,
                      ri.pattern.to_string(schema).c_str(),
                      ri.pruned_by->to_string(schema).c_str());
        report << line;
    }
}

// Reads the selected patterns (canonical strings) out of a rows-format file.
std::set<std::string> read_selected_patterns(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw OricError(Errc::io_error, "cannot open " + path);
    std::set<std::string> patterns;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_list(line, '\t');
        if (fields.size() < 5)
            throw OricError(Errc::malformed_row,
                            path + ": expected a rows-format selection file");
        if (fields[4] == "selected") patterns.insert(fields[0]);
    }
    return patterns;
}

struct CommonPaths {
    std::string model;
    std::string encoder;

    fs::path encoder_path() const {
        return encoder.empty() ? default_encoder_path(model) : fs::path(encoder);
    }
};

int cmd_init(const CommonPaths& paths, const HyperFlags& hyper,
             const std::string& features, const std::string& features_from,
             const std::string& label_column, std::uint32_t rare_threshold) {
    OricConfig cfg = hyper.to_config();
    for (const auto& warning : cfg.validate())
        std::cerr << "warning: " << warning << '\n';

    std::vector<std::string> schema;
    if (!features.empty()) schema = split_list(features, ',');
    if (!features_from.empty()) {
        std::ifstream in(features_from);
        if (!in)
            throw OricError(Errc::io_error, "cannot open " + features_from);
        std::string header;
        if (!std::getline(in, header))
            throw OricError(Errc::malformed_row, features_from + " is empty");
        for (auto& name : split_list(header, ',')) {
            if (!name.empty() && name.back() == '\r') name.pop_back();
            if (name != label_column) schema.push_back(name);
        }
    }

    OricModel model(cfg, schema);
    io::save_model_file(model, paths.model);
    io::LabelEncoder encoder(rare_threshold);
    if (!schema.empty()) encoder.bind_schema(schema);
    io::save_encoder_file(encoder, paths.encoder_path());

    Report report;
    report << "model " << paths.model << " initialized\n";
    report << "features " << schema.size() << "\n";
    report.flush(std::nullopt);
    return 0;
}

int cmd_update(const CommonPaths& paths, const std::string& data,
               const std::string& label_column,
               const std::vector<std::string>& numeric, unsigned threads,
               const std::optional<std::string>& report_path,
               const std::string& format) {
    auto model = io::load_model_file(paths.model);
    auto encoder = io::load_encoder_file(paths.encoder_path());
    const auto batch = io::ingest_csv(data, label_column, encoder,
                                      model.period() + 1, numeric);
    const auto result = model.update(batch, threads);
    io::save_model_file(model, paths.model);
    io::save_encoder_file(encoder, paths.encoder_path());

    Report report;
    if (format == "rows") {
        report << "# oric-update v1\n";
        report << "period\t" << result.period << '\n';
        report << "rows_positive\t" << result.rows_positive << '\n';
        report << "rows_negative\t" << result.rows_negative << '\n';
        report << "tails_positive\t" << result.tails_positive << '\n';
        report << "tails_negative\t" << result.tails_negative << '\n';
        report << "new_patterns\t" << result.new_patterns << '\n';
        report << "evicted\t" << result.evicted << '\n';
        report << "registry_size\t" << result.registry_size << '\n';
        report << "class_missing\t"
               << (!result.has_positive   ? "positive"
                   : !result.has_negative ? "negative"
                                          : "none")
               << '\n';
    } else {
        report << "period " << result.period << ": " << result.rows_positive
               << " positive / " << result.rows_negative
               << " negative rows, " << result.new_patterns
               << " new patterns, registry " << result.registry_size << "\n";
        if (!result.has_positive || !result.has_negative)
            report << "note: one class missing; its statistics were only decayed\n";
    }
    report.flush(report_path);
    return 0;
}

int cmd_select(const CommonPaths& paths, std::optional<std::uint32_t> top,
               const std::optional<std::string>& out, const std::string& format) {
    const auto model = io::load_model_file(paths.model);
    const auto selection = top ? model.select(*top) : model.select();
    Report report;
    write_selection(report, selection, model.schema(), format);
    report.flush(out);
    return 0;
}

int cmd_emit(const CommonPaths& paths, const std::string& data,
             const std::string& label_column, std::optional<std::uint32_t> top,
             const std::string& out,
             const std::optional<std::string>& report_path) {
    const auto model = io::load_model_file(paths.model);
    // Emission is read-only: encode with a throwaway copy so feature
    // generation never advances the encoder state an update will rely on.
    auto encoder = io::load_encoder_file(paths.encoder_path());
    const auto batch =
        io::ingest_csv(data, label_column, encoder, model.period() + 1);
    const auto selection = top ? model.select(*top) : model.select();
    const auto emission =
        io::emit_interaction_features(batch, selection.selected, out);

    Report report;
    report << "# oric-emit v1\n";
    report << "# pattern\tpositive_rate\n";
    for (const auto& [pattern, rate] : emission.positive_rates)
        report << pattern << '\t' << fmt(rate) << '\n';
    report.flush(report_path);
    return 0;
}

int cmd_plan(double theta, double eta1, double eta2, double p1, double p2,
             std::uint32_t horizon, std::uint32_t l_max,
             const std::optional<std::string>& out, const std::string& format) {
    planner::PlannerSpec spec;
    spec.theta = theta;
    spec.eta1 = eta1;
    spec.eta2 = eta2;
    spec.p1 = p1;
    spec.p2 = p2;
    spec.horizon = horizon;
    const auto result = planner::plan(spec, l_max);

    Report report;
    if (format == "rows") {
        report << "# oric-plan v1\n";
        report << "chain_length\t" << result.chain_length << '\n';
        report << "chain_count\t" << fmt_count(result.chain_count) << '\n';
        report << "detect_prob_frequent\t" << fmt(result.detect_prob_frequent)
               << '\n';
        report << "detect_prob_infrequent\t"
               << fmt(result.detect_prob_infrequent) << '\n';
        report << "multi_update_fp_bound\t" << fmt(result.multi_update_fp_bound)
               << '\n';
    } else {
        report << "chain length L* = " << result.chain_length
               << ", chains M* = " << fmt_count(result.chain_count) << "\n";
        report << "P(detect frequent)   >= " << fmt(result.detect_prob_frequent)
               << "\n";
        report << "P(detect infrequent) <= "
               << fmt(result.detect_prob_infrequent) << " per update\n";
        report << "multi-update false-positive bound: "
               << fmt(result.multi_update_fp_bound) << " over " << horizon
               << " updates\n";
    }
    report.flush(out);
    return 0;
}

int cmd_simulate(const std::string& out_dir, std::uint32_t periods,
                 std::uint32_t rows, std::uint32_t features,
                 std::uint32_t categories, double positive_rate,
                 std::uint64_t seed, const std::vector<std::string>& planted) {
    synth::StreamSpec spec;
    spec.num_features = features;
    spec.categories_per_feature = categories;
    spec.rows_per_period = rows;
    spec.horizon = periods;
    spec.positive_rate = positive_rate;
    spec.rng_seed = seed;
    const auto schema = spec.schema();
    for (const auto& text : planted)
        spec.planted.push_back(parse_planted(text, schema, periods));

    fs::create_directories(out_dir);
    Report report;
    for (std::uint32_t t = 1; t <= periods; ++t) {
        const auto batch = synth::generate_period(spec, t);
        const auto path = fs::path(out_dir) / ("period_" + std::to_string(t) + ".csv");
        io::write_batch_csv(batch, path);
        report << path.string() << '\t' << batch.row_count() << " rows\n";
    }
    report.flush(std::nullopt);
    return 0;
}

int cmd_eval_jaccard(const std::string& a, const std::string& b,
                     const std::optional<std::string>& out) {
    const auto sa = read_selected_patterns(a);
    const auto sb = read_selected_patterns(b);
    std::size_t inter = 0;
    for (const auto& p : sa) inter += sb.count(p);
    const std::size_t uni = sa.size() + sb.size() - inter;
    const double jaccard = uni == 0 ? 1.0 : double(inter) / double(uni);

    Report report;
    report << "# oric-eval-jaccard v1\n";
    report << "intersection\t" << inter << '\n';
    report << "union\t" << uni << '\n';
    report << "jaccard\t" << fmt(jaccard) << '\n';
    report.flush(out);
    return 0;
}

int cmd_eval_exact(const CommonPaths& paths, const std::string& data,
                   const std::string& label_column,
                   std::optional<std::uint32_t> top,
                   const std::optional<std::string>& out) {
    const auto model = io::load_model_file(paths.model);
    auto encoder = io::load_encoder_file(paths.encoder_path()); // throwaway
    const auto batch =
        io::ingest_csv(data, label_column, encoder, model.period() + 1);
    const auto selection = top ? model.select(*top) : model.select();

    std::vector<Pattern> patterns;
    for (const auto& ri : selection.selected) patterns.push_back(ri.pattern);
    const auto exact = oracle::exact_scan(batch, patterns);

    Report report;
    report << "# oric-eval-exact v1\n";
    report << "# pattern\test_freq_pos\texact_freq_pos\test_freq_neg\t"
              "exact_freq_neg\test_conf\texact_conf\n";
    for (const auto& ri : selection.selected) {
        const auto& st = exact.at(ri.pattern);
        report << ri.pattern.to_string(model.schema()) << '\t'
               << fmt(ri.freq_pos) << '\t' << fmt(st.freq_pos) << '\t'
               << fmt(ri.freq_neg) << '\t' << fmt(st.freq_neg) << '\t'
               << fmt(ri.confidence) << '\t'
               << (st.confidence ? fmt(*st.confidence) : std::string("-"))
               << '\n';
    }
    report.flush(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oric — online random intersection chains"};
    app.require_subcommand(1);

    CommonPaths paths;
    HyperFlags hyper;
    std::string data;
    std::string label_column = "label";
    std::string format = "table";
    std::vector<std::string> numeric;
    unsigned threads = 1;
    std::uint32_t rare_threshold = 1;
    std::optional<std::string> report_path;
    std::optional<std::uint32_t> top;

    auto add_model = [&](CLI::App* cmd, bool with_encoder = true) {
        cmd->add_option("--model", paths.model, "Model file")->required();
        if (with_encoder)
            cmd->add_option("--encoder", paths.encoder,
                            "Encoder file (default: <model>.encoder.json)");
    };

    // init
    std::string features, features_from;
    auto* init = app.add_subcommand("init", "Create a fresh model and encoder");
    add_model(init);
    auto* features_opt =
        init->add_option("--features", features, "Comma-separated feature names");
    init->add_option("--features-from", features_from,
                     "CSV whose header (minus the label column) becomes the schema")
        ->excludes(features_opt);
    init->add_option("--label-column", label_column, "Label column name")
        ->capture_default_str();
    init->add_option("--rare-threshold", rare_threshold,
                     "Occurrences below this map to category 0 (\"others\")")
        ->capture_default_str();
    hyper.attach(*init);

    // update
    auto* update = app.add_subcommand("update", "Consume one period's batch");
    add_model(update);
    update->add_option("--data", data, "Batch CSV")->required();
    update->add_option("--label-column", label_column, "Label column name")
        ->capture_default_str();
    update->add_option("--numeric", numeric,
                       "Columns carried as numeric (ignored by mining)");
    update->add_option("--threads", threads, "Chain-generation threads")
        ->capture_default_str();
    update->add_option("--report", report_path, "Also write the report here");
    update->add_option("--format", format, "table | rows")
        ->check(CLI::IsMember({"table", "rows"}))
        ->capture_default_str();

    // select
    auto* select = app.add_subcommand("select", "Rank and select interactions");
    add_model(select, false);
    select->add_option("--top", top, "Override the configured d_conf");
    select->add_option("--out", report_path, "Also write the report here");
    select->add_option("--format", format, "table | rows")
        ->check(CLI::IsMember({"table", "rows"}))
        ->capture_default_str();

    // emit
    std::string out_file;
    auto* emit = app.add_subcommand(
        "emit", "Write binary interaction features for a batch");
    add_model(emit);
    emit->add_option("--data", data, "Batch CSV")->required();
    emit->add_option("--label-column", label_column, "Label column name")
        ->capture_default_str();
    emit->add_option("--top", top, "Override the configured d_conf");
    emit->add_option("--out", out_file, "Feature CSV to write")->required();
    emit->add_option("--report", report_path, "Also write the rate report here");

    // plan
    double theta = 0.5, eta1 = 0.05, eta2 = 0.05, p1 = 0.5, p2 = 0.0;
    std::uint32_t horizon = 1, l_max = 64;
    auto* plan = app.add_subcommand("plan", "Plan (L, M) for detection budgets");
    plan->add_option("--theta", theta, "Frequency threshold")->capture_default_str();
    plan->add_option("--eta1", eta1, "Miss budget")->capture_default_str();
    plan->add_option("--eta2", eta2, "Per-update false-positive budget")
        ->capture_default_str();
    plan->add_option("--p1", p1, "Smallest frequency >= theta")->required();
    plan->add_option("--p2", p2, "Largest frequency < theta")->required();
    plan->add_option("--horizon", horizon, "Updates T for the eta2*T bound")
        ->capture_default_str();
    plan->add_option("--max-length-cap", l_max, "Largest L to scan")
        ->capture_default_str();
    plan->add_option("--out", report_path, "Also write the report here");
    plan->add_option("--format", format, "table | rows")
        ->check(CLI::IsMember({"table", "rows"}))
        ->capture_default_str();

    // simulate
    std::string out_dir;
    std::uint32_t periods = 5, rows = 10000, features_n = 8, categories = 8;
    double positive_rate = 0.5;
    std::uint64_t seed = 42;
    std::vector<std::string> planted;
    auto* simulate =
        app.add_subcommand("simulate", "Generate a synthetic labeled stream");
    simulate->add_option("--out-dir", out_dir, "Directory for period CSVs")
        ->required();
    simulate->add_option("--periods", periods, "Periods to generate")
        ->capture_default_str();
    simulate->add_option("--rows", rows, "Rows per period")->capture_default_str();
    simulate->add_option("--features", features_n, "Categorical features")
        ->capture_default_str();
    simulate->add_option("--categories", categories, "Categories per feature")
        ->capture_default_str();
    simulate->add_option("--positive-rate", positive_rate, "P(label = 1)")
        ->capture_default_str();
    simulate->add_option("--seed", seed, "Stream seed")->capture_default_str();
    simulate->add_option(
        "--planted", planted,
        "Planted interaction, e.g. 'f0=1&f3=2@pos=0.5,0.6;neg=0.1'");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate selections");
    eval->require_subcommand(1);
    std::string file_a, file_b;
    auto* jaccard = eval->add_subcommand(
        "jaccard", "Jaccard index between two selection files");
    jaccard->add_option("--a", file_a, "Selection rows file")->required();
    jaccard->add_option("--b", file_b, "Selection rows file")->required();
    jaccard->add_option("--out", report_path, "Also write the report here");

    auto* exact = eval->add_subcommand(
        "exact", "Estimated-vs-exact frequencies and confidence on a batch");
    add_model(exact);
    exact->add_option("--data", data, "Batch CSV")->required();
    exact->add_option("--label-column", label_column, "Label column name")
        ->capture_default_str();
    exact->add_option("--top", top, "Override the configured d_conf");
    exact->add_option("--out", report_path, "Also write the report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (init->parsed())
            return cmd_init(paths, hyper, features, features_from, label_column,
                            rare_threshold);
        if (update->parsed())
            return cmd_update(paths, data, label_column, numeric, threads,
                              report_path, format);
        if (select->parsed())
            return cmd_select(paths, top, report_path, format);
        if (emit->parsed())
            return cmd_emit(paths, data, label_column, top, out_file, report_path);
        if (plan->parsed())
            return cmd_plan(theta, eta1, eta2, p1, p2, horizon, l_max,
                            report_path, format);
        if (simulate->parsed())
            return cmd_simulate(out_dir, periods, rows, features_n, categories,
                                positive_rate, seed, planted);
        if (eval->parsed()) {
            if (jaccard->parsed())
                return cmd_eval_jaccard(file_a, file_b, report_path);
            if (exact->parsed())
                return cmd_eval_exact(paths, data, label_column, top, report_path);
        }
    } catch (const OricError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
