#pragma once
// Core domain types: items, patterns, compressed intersection chains and
// labeled batches. Everything here is immutable after construction and safe
// to share across threads.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oric/errors.hpp"

namespace oric {

using FeatureIndex = std::uint32_t;
using CategoryCode = std::uint32_t;

// One (feature = category) component of an interaction.
struct Item {
    FeatureIndex feature = 0;
    CategoryCode category = 0;

    friend auto operator<=>(const Item&, const Item&) = default;
};

// Canonical set of items: nonempty, at most one item per feature, sorted by
// ascending feature index. Two patterns are equal iff their item sequences
// are identical.
class Pattern {
public:
    // Empty placeholder; every constructed pattern comes from the factories,
    // which enforce nonemptiness.
    Pattern() = default;

    // Canonicalizes `raw` (any order). Throws empty_pattern / duplicate_feature.
    static Pattern from_items(std::vector<Item> raw);
    static Pattern from_pairs(
        std::initializer_list<std::pair<FeatureIndex, CategoryCode>> pairs);

    const std::vector<Item>& items() const noexcept { return items_; }
    std::size_t order() const noexcept { return items_.size(); }

    bool contains(const Item& item) const;
    // True iff every item of `other` is also an item of *this.
    bool contains_all(const Pattern& other) const;
    bool is_proper_superset_of(const Pattern& other) const {
        return order() > other.order() && contains_all(other);
    }

    // "f3=17&f7=2" with schema names; index form "3=17&7=2" without.
    std::string to_string(std::span<const std::string> schema) const;
    std::string to_string() const;
    static Pattern parse(const std::string& text,
                         std::span<const std::string> schema);

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern& a, const Pattern& b) {
        return a.items_ <=> b.items_;
    }

private:
    explicit Pattern(std::vector<Item> items) : items_(std::move(items)) {}
    std::vector<Item> items_;
};

// Spec-facing alias for the canonicalizing constructor.
inline Pattern pattern_from_items(std::vector<Item> raw) {
    return Pattern::from_items(std::move(raw));
}

// Random intersection chain, compressed as [item, count]: `items` is the head
// node, counts[j] is how many nodes item j survived. Node r (1-based) is
// exactly {items[j] : counts[j] >= r}, so node r+1 is a subset of node r.
struct Chain {
    std::vector<Item> items;
    std::vector<std::uint32_t> counts;
    std::uint32_t length = 1;

    struct Occurrence {
        std::uint32_t count = 0;        // number of nodes containing the pattern
        bool contained_in_tail = false; // count == length
    };

    // Materializes node r. Throws rank_out_of_range unless 1 <= r <= length.
    std::vector<Item> node_at(std::uint32_t rank) const;
    std::vector<Item> tail() const { return node_at(length); }

    // k = min of the item counts if every item of s is present, else 0.
    Occurrence occurrence(const Pattern& s) const;

    // Checks the representation invariants; throws invalid_config on violation.
    void validate() const;
};

inline std::vector<Item> node_at(const Chain& chain, std::uint32_t rank) {
    return chain.node_at(rank);
}
inline Chain::Occurrence occurrence_count(const Chain& chain, const Pattern& s) {
    return chain.occurrence(s);
}

// One time period's columnar categorical data plus binary labels. Numeric
// columns may be carried along but never participate in mining.
struct LabeledBatch {
    std::vector<std::string> schema;                // categorical feature names
    std::vector<std::vector<CategoryCode>> columns; // [feature][row]
    std::vector<std::uint8_t> labels;               // 0/1 per row
    std::vector<std::string> numeric_names;
    std::vector<std::vector<double>> numeric_columns;
    std::uint32_t period = 1;

    std::size_t row_count() const noexcept { return labels.size(); }
    std::size_t feature_count() const noexcept { return columns.size(); }
    void validate() const;
};

// Read-only view of the rows of one class.
class ClassView {
public:
    ClassView(const LabeledBatch& batch, int label);

    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    std::size_t feature_count() const noexcept { return batch_->feature_count(); }

    // Value of categorical feature f in the i-th row of the view.
    CategoryCode value(FeatureIndex f, std::size_t i) const {
        return batch_->columns[f][rows_[i]];
    }
    std::uint32_t row_index(std::size_t i) const { return rows_[i]; }

private:
    const LabeledBatch* batch_;
    std::vector<std::uint32_t> rows_;
};

struct ClassSplit {
    ClassView negative;
    ClassView positive;
};
ClassSplit split_by_label(const LabeledBatch& batch);

// Eq.-style Jaccard index |A ∩ B| / |A ∪ B| over pattern sets; 1.0 when both
// are empty.
double jaccard_index(std::span<const Pattern> a, std::span<const Pattern> b);

} // namespace oric

template <>
struct std::hash<oric::Pattern> {
    std::size_t operator()(const oric::Pattern& p) const noexcept {
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (const auto& item : p.items()) {
            h ^= (static_cast<std::uint64_t>(item.feature) << 32) | item.category;
            h *= 0x100000001B3ull;
        }
        return static_cast<std::size_t>(h);
    }
};
