#include "exwa/fire/dataset.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"
#include "exwa/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace exwa::fire {

namespace {

constexpr std::array<std::string_view, 12> kMonths{"jan", "feb", "mar", "apr", "may", "jun",
                                                   "jul", "aug", "sep", "oct", "nov", "dec"};
constexpr std::array<std::string_view, 7> kDays{"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

std::string row_prefix(const std::string& source, std::size_t line) {
    return (source.empty() ? std::string() : source + ": ") + "row " + std::to_string(line);
}

}  // namespace

int month_from_token(std::string_view token) {
    const auto t = io::to_lower(io::trim(token));
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (t == kMonths[i]) return static_cast<int>(i + 1);
    }
    return 0;
}

int day_from_token(std::string_view token) {
    const auto t = io::to_lower(io::trim(token));
    for (std::size_t i = 0; i < kDays.size(); ++i) {
        if (t == kDays[i]) return static_cast<int>(i + 1);
    }
    return 0;
}

std::string_view month_token(int month) {
    if (month < 1 || month > 12) fail(ErrorKind::domain, "month " + std::to_string(month) + " outside 1..12");
    return kMonths[static_cast<std::size_t>(month - 1)];
}

std::string_view day_token(int day) {
    if (day < 1 || day > 7) fail(ErrorKind::domain, "day " + std::to_string(day) + " outside 1..7");
    return kDays[static_cast<std::size_t>(day - 1)];
}

FireDataset parse_dataset(std::string_view text, std::string source) {
    const auto rows = io::parse_csv(text);
    if (rows.empty()) fail(ErrorKind::schema, (source.empty() ? std::string("dataset") : source) + " is empty");

    std::array<std::size_t, 13> col{};
    col.fill(static_cast<std::size_t>(-1));
    const auto& header = rows.front().fields;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = io::to_lower(io::trim(header[c]));
        for (std::size_t k = 0; k < kColumns.size(); ++k) {
            if (name == io::to_lower(kColumns[k])) {
                if (col[k] != static_cast<std::size_t>(-1)) {
                    fail(ErrorKind::schema, "duplicate column '" + std::string(kColumns[k]) + "'");
                }
                col[k] = c;
            }
        }
    }
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (col[k] == static_cast<std::size_t>(-1)) {
            fail(ErrorKind::schema, "missing column '" + std::string(kColumns[k]) + "'");
        }
    }

    FireDataset ds;
    ds.records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto where = row_prefix(source, row.line);
        if (row.fields.size() != header.size()) {
            fail(ErrorKind::parse, where + ": expected " + std::to_string(header.size()) + " fields, found " +
                                       std::to_string(row.fields.size()));
        }
        auto field = [&](std::size_t k) -> const std::string& { return row.fields[col[k]]; };
        auto number = [&](std::size_t k) {
            const auto v = io::parse_double(field(k));
            if (!v) {
                fail(ErrorKind::parse, where + ": column '" + std::string(kColumns[k]) + "' value '" +
                                           io::trim(field(k)) + "' is not a number");
            }
            return *v;
        };
        auto integer = [&](std::size_t k) {
            const double v = number(k);
            if (v != std::floor(v)) {
                fail(ErrorKind::parse, where + ": column '" + std::string(kColumns[k]) + "' must be an integer");
            }
            return static_cast<int>(v);
        };

        FireRecord rec;
        rec.x_coord = integer(0);
        rec.y_coord = integer(1);
        rec.month = month_from_token(field(2));
        if (rec.month == 0) fail(ErrorKind::parse, where + ": unknown month '" + io::trim(field(2)) + "'");
        rec.day = day_from_token(field(3));
        if (rec.day == 0) fail(ErrorKind::parse, where + ": unknown day '" + io::trim(field(3)) + "'");
        rec.ffmc = number(4);
        rec.dmc = number(5);
        rec.dc = number(6);
        rec.isi = number(7);
        rec.temp = number(8);
        rec.rh = number(9);
        rec.wind = number(10);
        rec.rain = number(11);
        rec.area = number(12);
        if (rec.rh < 0.0 || rec.rh > 100.0) fail(ErrorKind::parse, where + ": RH outside 0..100");
        if (rec.area < 0.0) fail(ErrorKind::parse, where + ": negative burned area");
        if (rec.rain < 0.0) fail(ErrorKind::parse, where + ": negative rain");
        ds.records.push_back(rec);
    }
    ds.provenance = {std::move(source), ds.records.size()};
    return ds;
}

FireDataset load_dataset(const std::string& path) { return parse_dataset(io::read_file(path), path); }

std::string serialize_dataset(const FireDataset& ds) {
    std::ostringstream out;
    for (std::size_t k = 0; k < kColumns.size(); ++k) out << (k ? "," : "") << kColumns[k];
    out << '\n';
    for (const auto& r : ds.records) {
        out << r.x_coord << ',' << r.y_coord << ',' << month_token(r.month) << ',' << day_token(r.day) << ','
            << io::format_double(r.ffmc) << ',' << io::format_double(r.dmc) << ',' << io::format_double(r.dc) << ','
            << io::format_double(r.isi) << ',' << io::format_double(r.temp) << ',' << io::format_double(r.rh)
            << ',' << io::format_double(r.wind) << ',' << io::format_double(r.rain) << ','
            << io::format_double(r.area) << '\n';
    }
    return out.str();
}

Split split(const FireDataset& ds, const SplitConfig& cfg) {
    const std::size_t n = ds.size();
    if (n < 2) fail(ErrorKind::too_small, "need at least two records to split, have " + std::to_string(n));
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        fail(ErrorKind::domain, "test fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(cfg.seed);
    rng.shuffle(std::span<std::size_t>(order));

    auto n_test = static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    Split out;
    out.test_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(out.test_rows.begin(), out.test_rows.end());
    std::sort(out.train_rows.begin(), out.train_rows.end());
    for (auto i : out.train_rows) out.train.records.push_back(ds.records[i]);
    for (auto i : out.test_rows) out.test.records.push_back(ds.records[i]);
    out.train.provenance = {ds.provenance.source + " [train]", out.train.size()};
    out.test.provenance = {ds.provenance.source + " [test]", out.test.size()};
    return out;
}

std::vector<std::string> feature_names(CalendarEncoding enc) {
    std::vector<std::string> names;
    if (enc == CalendarEncoding::ordinal) {
        for (auto f : kFeatureOrder) names.emplace_back(f);
        return names;
    }
    names = {"X", "Y"};
    for (auto m : kMonths) names.push_back("month_" + std::string(m));
    for (auto d : kDays) names.push_back("day_" + std::string(d));
    for (std::size_t k = 4; k < kFeatureOrder.size(); ++k) names.emplace_back(kFeatureOrder[k]);
    return names;
}

Matrix feature_matrix(const FireDataset& ds, CalendarEncoding enc) {
    const auto names = feature_names(enc);
    Matrix m(ds.size(), names.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& r = ds.records[i];
        auto row = m.row(i);
        std::size_t c = 0;
        row[c++] = r.x_coord;
        row[c++] = r.y_coord;
        if (enc == CalendarEncoding::ordinal) {
            row[c++] = r.month;
            row[c++] = r.day;
        } else {
            row[c + static_cast<std::size_t>(r.month - 1)] = 1.0;
            c += 12;
            row[c + static_cast<std::size_t>(r.day - 1)] = 1.0;
            c += 7;
        }
        for (double v : {r.ffmc, r.dmc, r.dc, r.isi, r.temp, r.rh, r.wind, r.rain}) row[c++] = v;
    }
    return m;
}

std::vector<double> targets(const FireDataset& ds, TargetTransform t) {
    std::vector<double> y(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double a = ds.records[i].area;
        y[i] = t == TargetTransform::raw ? a : std::log1p(a);
    }
    return y;
}

double inverse_target(double value, TargetTransform t) { return t == TargetTransform::raw ? value : std::expm1(value); }

void MinMaxScaler::fit(const Matrix& train) {
    if (train.rows() == 0) fail(ErrorKind::too_small, "cannot fit a scaler on zero rows");
    const std::size_t cols = train.cols();
    lo_.assign(cols, 0.0);
    hi_.assign(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        if (mode_ == ScalingMode::min_max) {
            double lo = train(0, c);
            double hi = lo;
            for (std::size_t r = 1; r < train.rows(); ++r) {
                lo = std::min(lo, train(r, c));
                hi = std::max(hi, train(r, c));
            }
            lo_[c] = lo;
            hi_[c] = hi;
        } else {
            double mean = 0.0;
            for (std::size_t r = 0; r < train.rows(); ++r) mean += train(r, c);
            mean /= static_cast<double>(train.rows());
            double var = 0.0;
            for (std::size_t r = 0; r < train.rows(); ++r) var += (train(r, c) - mean) * (train(r, c) - mean);
            lo_[c] = mean;
            hi_[c] = std::sqrt(var / static_cast<double>(train.rows()));
        }
    }
    fitted_ = true;
}

std::vector<bool> MinMaxScaler::constant_columns() const {
    std::vector<bool> out(lo_.size());
    for (std::size_t c = 0; c < lo_.size(); ++c) {
        out[c] = mode_ == ScalingMode::min_max ? hi_[c] == lo_[c] : hi_[c] == 0.0;
    }
    return out;
}

Matrix MinMaxScaler::transform(const Matrix& m) const {
    if (!fitted_) fail(ErrorKind::usage, "scaler used before fit");
    if (m.cols() != lo_.size()) {
        fail(ErrorKind::shape, "scaler fitted on " + std::to_string(lo_.size()) + " columns, got " +
                                   std::to_string(m.cols()));
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double offset = lo_[c];
        const double span = mode_ == ScalingMode::min_max ? hi_[c] - lo_[c] : hi_[c];
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) = span == 0.0 ? 0.0 : (m(r, c) - offset) / span;
    }
    return out;
}

Matrix MinMaxScaler::inverse_transform(const Matrix& m) const {
    if (!fitted_) fail(ErrorKind::usage, "scaler used before fit");
    if (m.cols() != lo_.size()) fail(ErrorKind::shape, "inverse_transform column count mismatch");
    Matrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double span = mode_ == ScalingMode::min_max ? hi_[c] - lo_[c] : hi_[c];
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) = lo_[c] + m(r, c) * span;
    }
    return out;
}

MinMaxScaler fit_scaler(const Matrix& train, ScalingMode mode) {
    MinMaxScaler s(mode);
    s.fit(train);
    return s;
}

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& header) {
    std::ostringstream out;
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << io::csv_escape(header[c]);
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "," : "") << io::format_double(m(r, c));
        out << '\n';
    }
    return out.str();
}

}  // namespace exwa::fire
