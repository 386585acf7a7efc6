#include "oric/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

namespace oric {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::empty_pattern: return "EmptyPattern";
    case Errc::duplicate_feature: return "DuplicateFeature";
    case Errc::rank_out_of_range: return "RankOutOfRange";
    case Errc::empty_class: return "EmptyClass";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::empty_model: return "EmptyModel";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::empty_history: return "EmptyHistory";
    case Errc::schedule_too_short: return "ScheduleTooShort";
    case Errc::planner_overflow: return "Overflow";
    case Errc::infeasible_plan: return "Infeasible";
    case Errc::missing_label_column: return "MissingLabelColumn";
    case Errc::malformed_row: return "MalformedRow";
    case Errc::non_binary_label: return "NonBinaryLabel";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::corrupt_file: return "CorruptFile";
    case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

Pattern Pattern::from_items(std::vector<Item> raw) {
    if (raw.empty())
        throw OricError(Errc::empty_pattern, "a pattern needs at least one item");
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].feature == raw[i - 1].feature)
            throw OricError(Errc::duplicate_feature,
                            "two items on feature " + std::to_string(raw[i].feature));
    }
    return Pattern(std::move(raw));
}

Pattern Pattern::from_pairs(
    std::initializer_list<std::pair<FeatureIndex, CategoryCode>> pairs) {
    std::vector<Item> items;
    items.reserve(pairs.size());
    for (const auto& [f, c] : pairs) items.push_back(Item{f, c});
    return from_items(std::move(items));
}

bool Pattern::contains(const Item& item) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), item,
                               [](const Item& a, const Item& b) {
                                   return a.feature < b.feature;
                               });
    return it != items_.end() && *it == item;
}

bool Pattern::contains_all(const Pattern& other) const {
    return std::includes(items_.begin(), items_.end(), other.items_.begin(),
                         other.items_.end());
}

std::string Pattern::to_string(std::span<const std::string> schema) const {
    std::string out;
    for (const auto& item : items_) {
        if (!out.empty()) out += '&';
        if (item.feature < schema.size())
            out += schema[item.feature];
        else
            out += std::to_string(item.feature);
        out += '=';
        out += std::to_string(item.category);
    }
    return out;
}

std::string Pattern::to_string() const { return to_string({}); }

Pattern Pattern::parse(const std::string& text,
                       std::span<const std::string> schema) {
    std::vector<Item> items;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t amp = text.find('&', pos);
        std::string part = text.substr(pos, amp == std::string::npos ? amp : amp - pos);
        std::size_t eq = part.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= part.size())
            throw OricError(Errc::malformed_row, "bad pattern item '" + part + "'");
        std::string name = part.substr(0, eq);
        std::string code = part.substr(eq + 1);

        FeatureIndex feature = 0;
        auto named = std::find(schema.begin(), schema.end(), name);
        if (named != schema.end()) {
            feature = static_cast<FeatureIndex>(named - schema.begin());
        } else {
            auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), feature);
            if (ec != std::errc{} || p != name.data() + name.size())
                throw OricError(Errc::schema_mismatch,
                                "unknown feature '" + name + "' in pattern");
        }
        CategoryCode category = 0;
        auto [p, ec] = std::from_chars(code.data(), code.data() + code.size(), category);
        if (ec != std::errc{} || p != code.data() + code.size())
            throw OricError(Errc::malformed_row, "bad category code '" + code + "'");
        items.push_back(Item{feature, category});

        if (amp == std::string::npos) break;
        pos = amp + 1;
    }
    return from_items(std::move(items));
}

std::vector<Item> Chain::node_at(std::uint32_t rank) const {
    if (rank < 1 || rank > length)
        throw OricError(Errc::rank_out_of_range,
                        "rank " + std::to_string(rank) + " not in [1, " +
                            std::to_string(length) + "]");
    std::vector<Item> node;
    for (std::size_t j = 0; j < items.size(); ++j)
        if (counts[j] >= rank) node.push_back(items[j]);
    return node;
}

Chain::Occurrence Chain::occurrence(const Pattern& s) const {
    std::uint32_t k = length;
    for (const auto& item : s.items()) {
        // Generated chains index items by feature; fall back to binary search
        // for hand-built chains.
        std::size_t j = items.size();
        if (item.feature < items.size() && items[item.feature].feature == item.feature) {
            j = item.feature;
        } else {
            auto it = std::lower_bound(items.begin(), items.end(), item,
                                       [](const Item& a, const Item& b) {
                                           return a.feature < b.feature;
                                       });
            if (it != items.end() && it->feature == item.feature)
                j = static_cast<std::size_t>(it - items.begin());
        }
        if (j == items.size() || items[j].category != item.category)
            return Occurrence{0, false};
        k = std::min(k, counts[j]);
    }
    return Occurrence{k, k == length};
}

void Chain::validate() const {
    if (items.size() != counts.size())
        throw OricError(Errc::invalid_config, "chain items/counts length mismatch");
    if (length < 1)
        throw OricError(Errc::invalid_config, "chain length must be >= 1");
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] < 1 || counts[j] > length)
            throw OricError(Errc::invalid_config,
                            "chain count out of [1, length] at index " +
                                std::to_string(j));
    for (std::size_t j = 1; j < items.size(); ++j)
        if (items[j].feature <= items[j - 1].feature)
            throw OricError(Errc::invalid_config, "chain items not sorted by feature");
}

void LabeledBatch::validate() const {
    if (schema.size() != columns.size())
        throw OricError(Errc::schema_mismatch, "schema/columns size mismatch");
    for (std::size_t f = 0; f < columns.size(); ++f)
        if (columns[f].size() != labels.size())
            throw OricError(Errc::schema_mismatch,
                            "column '" + schema[f] + "' row count mismatch");
    if (numeric_names.size() != numeric_columns.size())
        throw OricError(Errc::schema_mismatch, "numeric schema/columns mismatch");
    for (std::size_t f = 0; f < numeric_columns.size(); ++f)
        if (numeric_columns[f].size() != labels.size())
            throw OricError(Errc::schema_mismatch,
                            "numeric column '" + numeric_names[f] + "' row count mismatch");
    for (auto y : labels)
        if (y != 0 && y != 1)
            throw OricError(Errc::non_binary_label,
                            "label " + std::to_string(int(y)) + " is not 0/1");
}

ClassView::ClassView(const LabeledBatch& batch, int label) : batch_(&batch) {
    for (std::size_t i = 0; i < batch.labels.size(); ++i)
        if (batch.labels[i] == label) rows_.push_back(static_cast<std::uint32_t>(i));
}

ClassSplit split_by_label(const LabeledBatch& batch) {
    return ClassSplit{ClassView(batch, 0), ClassView(batch, 1)};
}

double jaccard_index(std::span<const Pattern> a, std::span<const Pattern> b) {
    std::unordered_set<Pattern> sa(a.begin(), a.end());
    std::unordered_set<Pattern> sb(b.begin(), b.end());
    std::size_t inter = 0;
    for (const auto& p : sa) inter += sb.count(p);
    std::size_t uni = sa.size() + sb.size() - inter;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace oric
