#include "oric/dataio.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oric {
namespace io {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;
constexpr int kEncoderVersion = 1;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string checksum_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw OricError(Errc::io_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OricError(Errc::io_error, "cannot write " + path.string());
    out << bytes;
    if (!out.good())
        throw OricError(Errc::io_error, "short write to " + path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

// Wraps a body object in the versioned, checksummed envelope.
std::string envelope(const char* format, int version, json body) {
    const std::string body_dump = body.dump();
    json root;
    root["format"] = format;
    root["version"] = version;
    root["checksum"] = checksum_hex(body_dump);
    root["body"] = std::move(body);
    return root.dump(1) + "\n";
}

json open_envelope(const std::string& bytes, const char* format, int version) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::exception& e) {
        throw OricError(Errc::corrupt_file, std::string("unparseable file: ") + e.what());
    }
    if (!root.is_object() || !root.contains("format") || !root.contains("version") ||
        !root.contains("checksum") || !root.contains("body"))
        throw OricError(Errc::corrupt_file, "missing envelope fields");
    if (root["format"] != format)
        throw OricError(Errc::corrupt_file,
                        "expected a " + std::string(format) + " file");
    if (root["version"] != version)
        throw OricError(Errc::version_mismatch,
                        "file version " + root["version"].dump() +
                            ", supported version " + std::to_string(version));
    if (root["checksum"] != checksum_hex(root["body"].dump()))
        throw OricError(Errc::corrupt_file, "checksum mismatch");
    return root["body"];
}

} // namespace

std::string double_to_text(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", value);
    return buf;
}

double double_from_text(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + text.size())
        throw OricError(Errc::corrupt_file, "bad float literal '" + text + "'");
    return value;
}

LabelEncoder::LabelEncoder(std::uint32_t rare_threshold)
    : rare_threshold_(rare_threshold) {
    if (rare_threshold_ < 1)
        throw OricError(Errc::invalid_config, "rare threshold must be >= 1");
}

void LabelEncoder::bind_schema(std::vector<std::string> schema) {
    if (schema_.empty()) {
        schema_ = std::move(schema);
        codes_.resize(schema_.size());
        counts_.resize(schema_.size());
        next_code_.assign(schema_.size(), 1); // 0 is reserved for "others"
        return;
    }
    if (schema != schema_)
        throw OricError(Errc::schema_mismatch,
                        "categorical columns differ from the encoder schema");
}

CategoryCode LabelEncoder::encode(std::size_t feature, const std::string& raw) {
    if (feature >= counts_.size())
        throw OricError(Errc::schema_mismatch,
                        "feature index " + std::to_string(feature) +
                            " outside the encoder schema");
    auto& count = counts_[feature][raw];
    ++count;
    auto& codes = codes_[feature];
    if (const auto it = codes.find(raw); it != codes.end()) return it->second;
    if (count < rare_threshold_) return 0;
    const CategoryCode code = next_code_[feature]++;
    codes.emplace(raw, code);
    return code;
}

std::optional<CategoryCode> LabelEncoder::code_of(std::size_t feature,
                                                  const std::string& raw) const {
    if (feature >= codes_.size()) return std::nullopt;
    const auto it = codes_[feature].find(raw);
    if (it == codes_[feature].end()) return std::nullopt;
    return it->second;
}

LabeledBatch ingest_csv(const std::filesystem::path& path,
                        const std::string& label_column, LabelEncoder& encoder,
                        std::uint32_t period,
                        const std::vector<std::string>& numeric_columns) {
    std::ifstream in(path);
    if (!in)
        throw OricError(Errc::io_error, "cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw OricError(Errc::malformed_row, path.string() + " has no header row");
    const auto header = split_csv_line(line);

    std::size_t label_col = header.size();
    std::vector<std::size_t> cat_cols;
    std::vector<std::size_t> num_cols;
    LabeledBatch batch;
    batch.period = period;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == label_column) {
            label_col = c;
        } else if (std::find(numeric_columns.begin(), numeric_columns.end(),
                             header[c]) != numeric_columns.end()) {
            num_cols.push_back(c);
            batch.numeric_names.push_back(header[c]);
        } else {
            cat_cols.push_back(c);
            batch.schema.push_back(header[c]);
        }
    }
    if (label_col == header.size())
        throw OricError(Errc::missing_label_column,
                        "no column named '" + label_column + "' in " + path.string());

    encoder.bind_schema(batch.schema);
    batch.columns.resize(cat_cols.size());
    batch.numeric_columns.resize(num_cols.size());

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw OricError(Errc::malformed_row,
                            path.string() + " row " + std::to_string(row) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(header.size()));

        const auto& label = fields[label_col];
        if (label == "0")
            batch.labels.push_back(0);
        else if (label == "1")
            batch.labels.push_back(1);
        else
            throw OricError(Errc::non_binary_label,
                            path.string() + " row " + std::to_string(row) +
                                ": label '" + label + "' is not 0/1");

        for (std::size_t j = 0; j < cat_cols.size(); ++j)
            batch.columns[j].push_back(encoder.encode(j, fields[cat_cols[j]]));
        for (std::size_t j = 0; j < num_cols.size(); ++j) {
            const auto& text = fields[num_cols[j]];
            try {
                batch.numeric_columns[j].push_back(std::stod(text));
            } catch (const std::exception&) {
                throw OricError(Errc::malformed_row,
                                path.string() + " row " + std::to_string(row) +
                                    ": bad numeric value '" + text + "'");
            }
        }
    }
    batch.validate();
    return batch;
}

EmissionReport
emit_interaction_features(const LabeledBatch& batch,
                          const std::vector<RankedInteraction>& interactions,
                          const std::filesystem::path& out_path) {
    batch.validate();
    for (const auto& ri : interactions)
        for (const auto& item : ri.pattern.items())
            if (item.feature >= batch.feature_count())
                throw OricError(Errc::schema_mismatch,
                                "interaction references feature " +
                                    std::to_string(item.feature) +
                                    " outside the batch schema");

    std::ofstream out(out_path, std::ios::trunc);
    if (!out)
        throw OricError(Errc::io_error, "cannot write " + out_path.string());

    out << "row";
    for (const auto& ri : interactions)
        out << ',' << ri.pattern.to_string(batch.schema);
    out << '\n';

    EmissionReport report;
    report.rows = batch.row_count();
    std::vector<std::uint64_t> hits(interactions.size(), 0);
    for (std::size_t r = 0; r < batch.row_count(); ++r) {
        out << r;
        for (std::size_t j = 0; j < interactions.size(); ++j) {
            bool contained = true;
            for (const auto& item : interactions[j].pattern.items())
                if (batch.columns[item.feature][r] != item.category) {
                    contained = false;
                    break;
                }
            hits[j] += contained;
            out << ',' << (contained ? '1' : '0');
        }
        out << '\n';
    }
    if (!out.good())
        throw OricError(Errc::io_error, "short write to " + out_path.string());

    for (std::size_t j = 0; j < interactions.size(); ++j)
        report.positive_rates.emplace_back(
            interactions[j].pattern.to_string(batch.schema),
            report.rows ? double(hits[j]) / double(report.rows) : 0.0);
    return report;
}

void write_batch_csv(const LabeledBatch& batch, const std::filesystem::path& path) {
    batch.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw OricError(Errc::io_error, "cannot write " + path.string());
    for (const auto& name : batch.schema) out << name << ',';
    out << "label\n";
    for (std::size_t r = 0; r < batch.row_count(); ++r) {
        for (std::size_t f = 0; f < batch.feature_count(); ++f)
            out << batch.columns[f][r] << ',';
        out << int(batch.labels[r]) << '\n';
    }
    if (!out.good())
        throw OricError(Errc::io_error, "short write to " + path.string());
}

std::string save_model(const OricModel& model) {
    json body;
    const auto& cfg = model.config();
    body["config"] = {
        {"num_chains", cfg.chains.num_chains},
        {"max_length", cfg.chains.max_length},
        {"max_tail_size", cfg.chains.max_tail_size},
        {"rng_seed", cfg.chains.rng_seed},
        {"top_frequent", cfg.top_frequent},
        {"top_confident", cfg.top_confident},
        {"decay", double_to_text(cfg.decay)},
    };
    body["schema"] = model.schema();
    body["period"] = model.period();
    body["priors"] = {
        {"pos", double_to_text(model.priors().pos)},
        {"neg", double_to_text(model.priors().neg)},
    };

    std::vector<const Pattern*> order;
    order.reserve(model.registry().size());
    for (const auto& [pattern, stats] : model.registry()) order.push_back(&pattern);
    std::sort(order.begin(), order.end(),
              [](const Pattern* a, const Pattern* b) { return *a < *b; });

    json registry = json::array();
    for (const Pattern* pattern : order) {
        const auto& stats = model.registry().at(*pattern);
        json items = json::array();
        for (const auto& item : pattern->items())
            items.push_back({item.feature, item.category});
        registry.push_back({
            {"items", std::move(items)},
            {"kp", double_to_text(stats.k_pos)},
            {"ip", double_to_text(stats.i_pos)},
            {"kn", double_to_text(stats.k_neg)},
            {"in", double_to_text(stats.i_neg)},
            {"first", stats.first_seen},
            {"last", stats.last_updated},
        });
    }
    body["registry"] = std::move(registry);
    return envelope("oric-model", kModelVersion, std::move(body));
}

OricModel load_model(const std::string& bytes) {
    const json body = open_envelope(bytes, "oric-model", kModelVersion);
    try {
        OricConfig cfg;
        const auto& jc = body.at("config");
        cfg.chains.num_chains = jc.at("num_chains").get<std::uint32_t>();
        cfg.chains.max_length = jc.at("max_length").get<std::uint32_t>();
        cfg.chains.max_tail_size = jc.at("max_tail_size").get<std::uint32_t>();
        cfg.chains.rng_seed = jc.at("rng_seed").get<std::uint64_t>();
        cfg.top_frequent = jc.at("top_frequent").get<std::uint32_t>();
        cfg.top_confident = jc.at("top_confident").get<std::uint32_t>();
        cfg.decay = double_from_text(jc.at("decay").get<std::string>());

        auto schema = body.at("schema").get<std::vector<std::string>>();
        const auto period = body.at("period").get<std::uint32_t>();
        ClassPriors priors;
        priors.pos = double_from_text(body.at("priors").at("pos").get<std::string>());
        priors.neg = double_from_text(body.at("priors").at("neg").get<std::string>());

        std::unordered_map<Pattern, PatternStats> registry;
        for (const auto& entry : body.at("registry")) {
            std::vector<Item> items;
            for (const auto& ji : entry.at("items"))
                items.push_back(Item{ji.at(0).get<FeatureIndex>(),
                                     ji.at(1).get<CategoryCode>()});
            PatternStats stats;
            stats.k_pos = double_from_text(entry.at("kp").get<std::string>());
            stats.i_pos = double_from_text(entry.at("ip").get<std::string>());
            stats.k_neg = double_from_text(entry.at("kn").get<std::string>());
            stats.i_neg = double_from_text(entry.at("in").get<std::string>());
            stats.first_seen = entry.at("first").get<std::uint32_t>();
            stats.last_updated = entry.at("last").get<std::uint32_t>();
            if (!registry.emplace(Pattern::from_items(std::move(items)), stats).second)
                throw OricError(Errc::corrupt_file, "duplicate registry pattern");
        }
        return OricModel(cfg, std::move(schema), period, priors, std::move(registry));
    } catch (const json::exception& e) {
        throw OricError(Errc::corrupt_file, std::string("bad model body: ") + e.what());
    }
}

void save_model_file(const OricModel& model, const std::filesystem::path& path) {
    write_file(path, save_model(model));
}

OricModel load_model_file(const std::filesystem::path& path) {
    return load_model(read_file(path));
}

std::string save_encoder(const LabelEncoder& encoder) {
    json body;
    body["rare_threshold"] = encoder.rare_threshold_;
    body["schema"] = encoder.schema_;
    json features = json::array();
    for (std::size_t f = 0; f < encoder.schema_.size(); ++f) {
        json codes = json::object();
        for (const auto& [raw, code] : encoder.codes_[f]) codes[raw] = code;
        json counts = json::object();
        for (const auto& [raw, count] : encoder.counts_[f]) counts[raw] = count;
        features.push_back({{"codes", std::move(codes)},
                            {"counts", std::move(counts)},
                            {"next_code", encoder.next_code_[f]}});
    }
    body["features"] = std::move(features);
    return envelope("oric-encoder", kEncoderVersion, std::move(body));
}

LabelEncoder load_encoder(const std::string& bytes) {
    const json body = open_envelope(bytes, "oric-encoder", kEncoderVersion);
    try {
        LabelEncoder encoder(body.at("rare_threshold").get<std::uint32_t>());
        encoder.bind_schema(body.at("schema").get<std::vector<std::string>>());
        const auto& features = body.at("features");
        if (features.size() != encoder.schema_.size())
            throw OricError(Errc::corrupt_file, "encoder feature count mismatch");
        for (std::size_t f = 0; f < features.size(); ++f) {
            for (const auto& [raw, code] : features[f].at("codes").items())
                encoder.codes_[f][raw] = code.get<CategoryCode>();
            for (const auto& [raw, count] : features[f].at("counts").items())
                encoder.counts_[f][raw] = count.get<std::uint64_t>();
            encoder.next_code_[f] = features[f].at("next_code").get<CategoryCode>();
        }
        return encoder;
    } catch (const json::exception& e) {
        throw OricError(Errc::corrupt_file,
                        std::string("bad encoder body: ") + e.what());
    }
}

void save_encoder_file(const LabelEncoder& encoder,
                       const std::filesystem::path& path) {
    write_file(path, save_encoder(encoder));
}

LabelEncoder load_encoder_file(const std::filesystem::path& path) {
    return load_encoder(read_file(path));
}

} // namespace io
} // namespace oric
