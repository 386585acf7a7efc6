#pragma once
// Batch ingestion (CSV with online label encoding), interaction feature
// emission, and versioned checksummed persistence for models and encoders.
// Decayed counts are stored as hex-float text so round-trips are bit-exact.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oric/estimator.hpp"
#include "oric/pattern.hpp"

namespace oric {
namespace io {

// Per-feature string -> dense code mapping. Code 0 is reserved for "others":
// a category maps to 0 until its running count reaches the rare threshold,
// after which it receives the next free code. Assigned codes never change.
class LabelEncoder {
public:
    explicit LabelEncoder(std::uint32_t rare_threshold = 1);

    // Pins the categorical schema on first use; later batches must match.
    void bind_schema(std::vector<std::string> schema);
    const std::vector<std::string>& schema() const noexcept { return schema_; }
    std::uint32_t rare_threshold() const noexcept { return rare_threshold_; }

    // Counts one occurrence of `raw` and returns its code.
    CategoryCode encode(std::size_t feature, const std::string& raw);
    // Lookup without counting; empty when the category has no assigned code.
    std::optional<CategoryCode> code_of(std::size_t feature,
                                        const std::string& raw) const;

    friend std::string save_encoder(const LabelEncoder& encoder);
    friend LabelEncoder load_encoder(const std::string& bytes);

private:
    std::uint32_t rare_threshold_ = 1;
    std::vector<std::string> schema_;
    std::vector<std::map<std::string, CategoryCode>> codes_;
    std::vector<std::map<std::string, std::uint64_t>> counts_;
    std::vector<CategoryCode> next_code_;
};

// Reads a headered CSV, label-encodes every column except the label and the
// listed numeric columns (carried through as doubles), and returns the batch.
// The encoder is updated in place.
LabeledBatch ingest_csv(const std::filesystem::path& path,
                        const std::string& label_column, LabelEncoder& encoder,
                        std::uint32_t period = 1,
                        const std::vector<std::string>& numeric_columns = {});

struct EmissionReport {
    std::size_t rows = 0;
    // (canonical pattern string, fraction of rows containing it)
    std::vector<std::pair<std::string, double>> positive_rates;
};

// Writes a CSV with a row index column and one 0/1 column per interaction
// (named by the canonical pattern string, e.g. "f3=17&f7=2").
EmissionReport
emit_interaction_features(const LabeledBatch& batch,
                          const std::vector<RankedInteraction>& interactions,
                          const std::filesystem::path& out_path);

// Writes a batch as CSV (schema columns, then "label").
void write_batch_csv(const LabeledBatch& batch, const std::filesystem::path& path);

std::string save_model(const OricModel& model);
OricModel load_model(const std::string& bytes);
void save_model_file(const OricModel& model, const std::filesystem::path& path);
OricModel load_model_file(const std::filesystem::path& path);

std::string save_encoder(const LabelEncoder& encoder);
LabelEncoder load_encoder(const std::string& bytes);
void save_encoder_file(const LabelEncoder& encoder, const std::filesystem::path& path);
LabelEncoder load_encoder_file(const std::filesystem::path& path);

// Lossless double <-> text (hex-float form).
std::string double_to_text(double value);
double double_from_text(const std::string& text);

} // namespace io
} // namespace oric
