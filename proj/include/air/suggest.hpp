#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "air/index.hpp"

namespace air {

struct SuggestConfig {
    std::size_t max_edit_distance = 2;
    std::size_t max_suggestions = 10;
    std::size_t min_prefix_length = 2;

    /// Throws InvalidOptions.
    void validate() const;
};

/// Levenshtein distance over Unicode scalar values.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Corrects every query term with df = 0 to its nearest vocabulary term
/// (distance, then higher df, then lexicographic). Returns the corrected
/// query, space-joined, or nothing when no term could be corrected.
std::optional<std::string> did_you_mean(const Index& index, std::span<const std::string> query_terms,
                                        const SuggestConfig& config);

/// Up to `k` vocabulary terms starting with the case-folded prefix, ordered
/// by df descending then term ascending.
std::vector<std::string> autosuggest(const Index& index, std::string_view prefix, std::size_t k,
                                     const SuggestConfig& config);

}  // namespace air
