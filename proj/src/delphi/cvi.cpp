#include "exwa/delphi/cvi.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"

#include <cmath>
#include <sstream>

namespace exwa::delphi {

namespace {

bool is_relevant(int rating) { return rating >= 3; }

std::string describe_cell(const std::string& item, std::size_t item_index, std::size_t expert_index) {
    std::string where = "item " + std::to_string(item_index + 1);
    if (!item.empty()) where += " ('" + item + "')";
    return where + ", expert " + std::to_string(expert_index + 1);
}

}  // namespace

RatingMatrix::RatingMatrix(std::vector<std::string> items, std::vector<std::string> experts,
                           std::vector<int> ratings)
    : items_(std::move(items)), experts_(std::move(experts)), ratings_(std::move(ratings)) {
    if (items_.empty()) fail(ErrorKind::invalid_panel, "rating matrix has no items");
    if (experts_.empty()) fail(ErrorKind::invalid_panel, "rating matrix has no experts");
    if (ratings_.size() != items_.size() * experts_.size()) {
        fail(ErrorKind::shape, "rating grid has " + std::to_string(ratings_.size()) + " cells, expected " +
                                   std::to_string(items_.size() * experts_.size()));
    }
    for (std::size_t i = 0; i < items_.size(); ++i) {
        for (std::size_t e = 0; e < experts_.size(); ++e) {
            const int r = at(i, e);
            if (r < kMinRating || r > kMaxRating) {
                fail(ErrorKind::malformed_rating, describe_cell(items_[i], i, e) + ": rating " +
                                                      std::to_string(r) + " outside 1..4");
            }
        }
    }
}

int required_agreement(int n_experts, double threshold_proportion) {
    if (n_experts < 1) fail(ErrorKind::invalid_panel, "panel must have at least one expert");
    if (!(threshold_proportion > 0.0 && threshold_proportion <= 1.0)) {
        fail(ErrorKind::domain, "agreement threshold must lie in (0, 1]");
    }
    // Compare in thousandths: the threshold is itself a 3 dp figure.
    const long long target = std::llround(threshold_proportion * 1000.0);
    for (int k = 1; k < n_experts; ++k) {
        if (std::llround(1000.0 * k / n_experts) >= target) return k;
    }
    return n_experts;
}

ItemValidity compute_item_cvi(std::span<const int> ratings, int required, std::string item,
                              std::size_t item_index) {
    if (ratings.empty()) fail(ErrorKind::invalid_panel, "item has no ratings");
    if (required < 1 || static_cast<std::size_t>(required) > ratings.size()) {
        fail(ErrorKind::domain, "required agreement " + std::to_string(required) + " outside 1.." +
                                    std::to_string(ratings.size()));
    }
    int agree = 0;
    for (std::size_t e = 0; e < ratings.size(); ++e) {
        const int r = ratings[e];
        if (r < kMinRating || r > kMaxRating) {
            fail(ErrorKind::malformed_rating,
                 describe_cell(item, item_index, e) + ": rating " + std::to_string(r) + " outside 1..4");
        }
        if (is_relevant(r)) ++agree;
    }
    ItemValidity out;
    out.item = std::move(item);
    out.agreement_count = agree;
    out.i_cvi = static_cast<double>(agree) / static_cast<double>(ratings.size());
    out.valid = agree >= required;
    return out;
}

ValidityReport compute_scale_cvi(const RatingMatrix& matrix, double threshold_proportion) {
    const int n_experts = static_cast<int>(matrix.expert_count());
    ValidityReport report;
    report.required_agreement = required_agreement(n_experts, threshold_proportion);
    report.expert_count = matrix.expert_count();
    report.per_item.reserve(matrix.item_count());

    double sum = 0.0;
    for (std::size_t i = 0; i < matrix.item_count(); ++i) {
        auto v = compute_item_cvi(matrix.item_ratings(i), report.required_agreement, matrix.items()[i], i);
        if (v.agreement_count == n_experts) ++report.universal_agreement_count;
        sum += v.i_cvi;
        report.per_item.push_back(std::move(v));
    }
    const auto n_items = static_cast<double>(matrix.item_count());
    report.s_cvi_average = sum / n_items;
    report.s_cvi_ua = report.universal_agreement_count / n_items;
    return report;
}

RatingMatrix parse_survey(std::string_view text) {
    const auto rows = io::parse_csv(text);
    if (rows.empty()) fail(ErrorKind::schema, "survey is empty");

    const auto& header = rows.front().fields;
    if (header.size() < 2) fail(ErrorKind::schema, "survey header names no experts");
    std::vector<std::string> experts;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto label = io::trim(header[c]);
        if (label.empty()) fail(ErrorKind::schema, "empty expert label in header column " + std::to_string(c + 1));
        experts.push_back(std::move(label));
    }

    std::vector<std::string> items;
    std::vector<int> ratings;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            fail(ErrorKind::schema, "line " + std::to_string(row.line) + ": expected " +
                                        std::to_string(header.size()) + " cells, found " +
                                        std::to_string(row.fields.size()));
        }
        auto item = io::trim(row.fields[0]);
        if (item.empty()) fail(ErrorKind::schema, "line " + std::to_string(row.line) + ": empty item label");
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            const auto value = io::parse_integer(row.fields[c]);
            if (!value) {
                fail(ErrorKind::malformed_rating, "line " + std::to_string(row.line) + ", item '" + item +
                                                      "', expert '" + experts[c - 1] + "': '" +
                                                      io::trim(row.fields[c]) + "' is not an integer rating");
            }
            if (*value < kMinRating || *value > kMaxRating) {
                fail(ErrorKind::malformed_rating, "line " + std::to_string(row.line) + ", item '" + item +
                                                      "', expert '" + experts[c - 1] + "': rating " +
                                                      std::to_string(*value) + " outside 1..4");
            }
            ratings.push_back(static_cast<int>(*value));
        }
        items.push_back(std::move(item));
    }
    if (items.empty()) fail(ErrorKind::invalid_panel, "survey has no item rows");
    return RatingMatrix(std::move(items), std::move(experts), std::move(ratings));
}

std::string format_report(const ValidityReport& report) {
    std::size_t width = 4;
    for (const auto& v : report.per_item) width = std::max(width, v.item.size());

    std::ostringstream out;
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(w, s.size()), ' ');
        return s;
    };
    out << pad("Item", width) << "  Agreement  I-CVI  Validation\n";
    for (const auto& v : report.per_item) {
        out << pad(v.item, width) << "  " << pad(std::to_string(v.agreement_count), 9) << "  "
            << io::format_fixed(v.i_cvi, 3) << "  " << (v.valid ? "VALID" : "INVALID") << '\n';
    }
    out << "experts: " << report.expert_count << ", required agreement: " << report.required_agreement << '\n';
    out << "S-CVI/Average: " << io::format_fixed(report.s_cvi_average, 3) << '\n';
    out << "Universal agreement: " << report.universal_agreement_count << '\n';
    out << "S-CVI/UA: " << io::format_fixed(report.s_cvi_ua, 3) << '\n';
    return out.str();
}

nlohmann::json to_json(const ValidityReport& report) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& v : report.per_item) {
        items.push_back({{"item", v.item},
                         {"agreement_count", v.agreement_count},
                         {"i_cvi", v.i_cvi},
                         {"valid", v.valid}});
    }
    return {{"per_item", std::move(items)},
            {"expert_count", report.expert_count},
            {"required_agreement", report.required_agreement},
            {"s_cvi_average", report.s_cvi_average},
            {"s_cvi_ua", report.s_cvi_ua},
            {"universal_agreement_count", report.universal_agreement_count}};
}

}  // namespace exwa::delphi
