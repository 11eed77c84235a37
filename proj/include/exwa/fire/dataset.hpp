#pragma once

#include "exwa/matrix.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace exwa::fire {

struct FireRecord {
    int x_coord = 0;
    int y_coord = 0;
    int month = 1;  // jan = 1
    int day = 1;    // mon = 1
    double ffmc = 0.0;
    double dmc = 0.0;
    double dc = 0.0;
    double isi = 0.0;
    double temp = 0.0;
    double rh = 0.0;
    double wind = 0.0;
    double rain = 0.0;
    double area = 0.0;

    friend bool operator==(const FireRecord&, const FireRecord&) = default;
};

inline constexpr std::array<std::string_view, 13> kColumns{"X",  "Y",    "month", "day",  "FFMC", "DMC", "DC",
                                                           "ISI", "temp", "RH",    "wind", "rain", "area"};
inline constexpr std::array<std::string_view, 12> kFeatureOrder{"X",  "Y",   "month", "day", "FFMC", "DMC",
                                                                "DC", "ISI", "temp",  "RH",  "wind", "rain"};

struct Provenance {
    std::string source;
    std::size_t row_count = 0;
};

struct FireDataset {
    std::vector<FireRecord> records;
    Provenance provenance;

    std::size_t size() const noexcept { return records.size(); }
};

int month_from_token(std::string_view token);  // 0 when unknown
int day_from_token(std::string_view token);    // 0 when unknown
std::string_view month_token(int month);
std::string_view day_token(int day);

/// Header must name the 13 UCI columns (any order, case-insensitive).
FireDataset parse_dataset(std::string_view text, std::string source = {});
FireDataset load_dataset(const std::string& path);

/// Canonical UCI layout: fixed header, lowercase month/day tokens,
/// shortest round-trip decimals.
std::string serialize_dataset(const FireDataset& ds);

struct SplitConfig {
    double test_fraction = 0.6;
    std::uint64_t seed = 42;
};

struct Split {
    FireDataset train;
    FireDataset test;
    std::vector<std::size_t> train_rows;  // source row indices, ascending
    std::vector<std::size_t> test_rows;
};

/// Seeded uniform shuffle; the first round(f * n) shuffled rows form the
/// test set (clamped so both sides keep at least one row). Each side keeps
/// source order.
Split split(const FireDataset& ds, const SplitConfig& cfg);

enum class CalendarEncoding { ordinal, one_hot };
enum class TargetTransform { raw, log1p };

std::vector<std::string> feature_names(CalendarEncoding enc = CalendarEncoding::ordinal);
Matrix feature_matrix(const FireDataset& ds, CalendarEncoding enc = CalendarEncoding::ordinal);
std::vector<double> targets(const FireDataset& ds, TargetTransform t = TargetTransform::raw);
double inverse_target(double value, TargetTransform t);

enum class ScalingMode { min_max, z_score };

/// Per-column scaler fitted on training rows only. Constant columns map to 0.
/// Test values are not clamped.
class MinMaxScaler {
public:
    explicit MinMaxScaler(ScalingMode mode = ScalingMode::min_max) : mode_(mode) {}

    void fit(const Matrix& train);
    Matrix transform(const Matrix& m) const;
    Matrix inverse_transform(const Matrix& m) const;

    bool fitted() const noexcept { return fitted_; }
    ScalingMode mode() const noexcept { return mode_; }
    const std::vector<double>& lower() const noexcept { return lo_; }
    const std::vector<double>& upper() const noexcept { return hi_; }

    /// Columns whose fitted range (or spread) is zero.
    std::vector<bool> constant_columns() const;

private:
    ScalingMode mode_;
    bool fitted_ = false;
    // min/max for min_max; mean/stddev for z_score
    std::vector<double> lo_;
    std::vector<double> hi_;
};

MinMaxScaler fit_scaler(const Matrix& train, ScalingMode mode = ScalingMode::min_max);

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& header);

}  // namespace exwa::fire
