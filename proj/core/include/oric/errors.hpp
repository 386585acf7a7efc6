#pragma once

#include <stdexcept>
#include <string>

namespace oric {

enum class Errc {
    empty_pattern,
    duplicate_feature,
    rank_out_of_range,
    empty_class,
    schema_mismatch,
    empty_model,
    invalid_config,
    empty_history,
    schedule_too_short,
    planner_overflow,
    infeasible_plan,
    missing_label_column,
    malformed_row,
    non_binary_label,
    version_mismatch,
    corrupt_file,
    io_error,
};

const char* errc_name(Errc code);

class OricError : public std::runtime_error {
public:
    OricError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace oric
