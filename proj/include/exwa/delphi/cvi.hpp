#pragma once

// Content validity indices for a panel's 4-point relevance ratings.
//
// Ratings 1-2 count as "not relevant", 3-4 as "relevant". An item is valid
// when the number of experts rating it relevant reaches the agreement
// threshold for the panel size.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exwa::delphi {

inline constexpr double kDefaultAgreementProportion = 0.778;
inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 4;

/// Items x experts grid; ratings stored row-major by item.
class RatingMatrix {
public:
    RatingMatrix(std::vector<std::string> items, std::vector<std::string> experts, std::vector<int> ratings);

    const std::vector<std::string>& items() const noexcept { return items_; }
    const std::vector<std::string>& experts() const noexcept { return experts_; }
    std::size_t item_count() const noexcept { return items_.size(); }
    std::size_t expert_count() const noexcept { return experts_.size(); }

    int at(std::size_t item, std::size_t expert) const { return ratings_[item * experts_.size() + expert]; }
    std::span<const int> item_ratings(std::size_t item) const {
        return {ratings_.data() + item * experts_.size(), experts_.size()};
    }

private:
    std::vector<std::string> items_;
    std::vector<std::string> experts_;
    std::vector<int> ratings_;
};

struct ItemValidity {
    std::string item;
    int agreement_count = 0;
    double i_cvi = 0.0;
    bool valid = false;

    friend bool operator==(const ItemValidity&, const ItemValidity&) = default;
};

struct ValidityReport {
    std::vector<ItemValidity> per_item;
    double s_cvi_average = 0.0;
    double s_cvi_ua = 0.0;
    int universal_agreement_count = 0;
    int required_agreement = 0;
    std::size_t expert_count = 0;
};

/// Smallest agreement count whose proportion of the panel, at the 3-decimal
/// reporting precision, reaches `threshold_proportion`. With the default
/// 0.778 a 9-expert panel needs 7 agreements.
int required_agreement(int n_experts, double threshold_proportion = kDefaultAgreementProportion);

/// `item` and `item_index` only label error messages and the result.
ItemValidity compute_item_cvi(std::span<const int> ratings, int required, std::string item = {},
                              std::size_t item_index = 0);

ValidityReport compute_scale_cvi(const RatingMatrix& matrix,
                                 double threshold_proportion = kDefaultAgreementProportion);

/// Comma-separated survey: header row of expert labels (first cell names the
/// item column), then one row per item. Cells must be integers 1-4.
RatingMatrix parse_survey(std::string_view text);

std::string format_report(const ValidityReport& report);
nlohmann::json to_json(const ValidityReport& report);

}  // namespace exwa::delphi
