#include <catch_amalgamated.hpp>

#include "exwa/error.hpp"
#include "exwa/group/hierarchy.hpp"
#include "exwa/io/csv.hpp"
#include "exwa/random.hpp"

#include <algorithm>
#include <numeric>

using namespace exwa;
using namespace exwa::group;
using Catch::Matchers::WithinAbs;

namespace {

WeightVector wv(std::vector<double> w, double xi = 0.0) { return {std::move(w), xi}; }

LabeledWeights labeled(std::vector<std::string> codes, std::vector<double> w) {
    return {std::move(codes), {}, wv(std::move(w))};
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exwa::Error");
    return ErrorKind::usage;
}

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = 0.05 + rng.uniform();
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
    return w;
}

/// Sort-based rank oracle: stable descending order.
std::vector<int> sort_ranks(const std::vector<double>& w) {
    std::vector<std::size_t> idx(w.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    std::vector<int> r(w.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<int>(k + 1);
    return r;
}

}  // namespace

TEST_CASE("aggregation examples") {
    const std::vector<WeightVector> same{wv({0.6, 0.4}), wv({0.6, 0.4})};
    auto a = aggregate_weights(same, Aggregation::arithmetic_mean);
    CHECK(a.weights == std::vector<double>{0.6, 0.4});

    const std::vector<WeightVector> mirror{wv({0.6, 0.4}, 0.1), wv({0.4, 0.6}, 0.3)};
    a = aggregate_weights(mirror, Aggregation::arithmetic_mean);
    CHECK_THAT(a.weights[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(a.weights[1], WithinAbs(0.5, 1e-15));
    CHECK(a.xi_star == 0.3);

    const std::vector<WeightVector> geo{wv({0.8, 0.2}), wv({0.2, 0.8})};
    a = aggregate_weights(geo, Aggregation::geometric_mean);
    CHECK_THAT(a.weights[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(a.weights[1], WithinAbs(0.5, 1e-12));
}

TEST_CASE("aggregation errors") {
    const std::vector<WeightVector> mismatch{wv({0.6, 0.4}), wv({0.2, 0.3, 0.5})};
    CHECK(kind_of([&] { aggregate_weights(mismatch, Aggregation::arithmetic_mean); }) == ErrorKind::shape);
    const std::vector<WeightVector> negative{wv({1.2, -0.2})};
    CHECK(kind_of([&] { aggregate_weights(negative, Aggregation::arithmetic_mean); }) == ErrorKind::domain);
    const std::vector<WeightVector> none;
    CHECK(kind_of([&] { aggregate_weights(none, Aggregation::arithmetic_mean); }) == ErrorKind::shape);
    CHECK(parse_aggregation("geometric") == Aggregation::geometric_mean);
    CHECK(parse_aggregation("arithmetic") == Aggregation::arithmetic_mean);
    CHECK(kind_of([] { parse_aggregation("median"); }) == ErrorKind::config);
}

TEST_CASE("aggregation ignores the order of decision-makers") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(5);
        std::vector<WeightVector> dms;
        const std::size_t k = 1 + rng.index(6);
        for (std::size_t i = 0; i < k; ++i) dms.push_back(wv(random_simplex(rng, n), rng.uniform()));
        for (auto method : {Aggregation::arithmetic_mean, Aggregation::geometric_mean}) {
            const auto base = aggregate_weights(dms, method);
            auto shuffled = dms;
            rng.shuffle(std::span<WeightVector>(shuffled));
            const auto again = aggregate_weights(shuffled, method);
            CHECK_THAT(std::accumulate(base.weights.begin(), base.weights.end(), 0.0), WithinAbs(1.0, 1e-9));
            CHECK(again.xi_star == base.xi_star);
            for (std::size_t j = 0; j < n; ++j) CHECK_THAT(again.weights[j], WithinAbs(base.weights[j], 1e-14));
        }
        // identical inputs are a fixed point of the arithmetic mean
        const std::vector<WeightVector> copies(3, dms.front());
        CHECK(aggregate_weights(copies, Aggregation::arithmetic_mean).weights == dms.front().weights);
    }
}

TEST_CASE("product rule on the reference performance-expectancy row") {
    const auto dims = labeled({"PE", "OTHER"}, {0.339, 0.661});
    const std::vector<LabeledWeights> locals{labeled({"PE1", "PE2", "PE3"}, {0.346, 0.292, 0.362}),
                                             labeled({"X1"}, {1.0})};
    const auto h = compute_global_weights(dims, locals);
    CHECK(io::format_fixed(h.dimensions[0].attributes[0].global_weight, 3) == "0.117");
    CHECK_THAT(h.dimensions[0].attributes[0].global_weight, WithinAbs(0.339 * 0.346, 1e-12));
}

TEST_CASE("reference global weights rank with PE1 first") {
    // PE1..PE3, EE1..EE3, SI1..SI3, EC1..EC4
    const std::vector<double> globals{0.117, 0.099, 0.070, 0.059, 0.072, 0.075, 0.034,
                                      0.095, 0.068, 0.092, 0.071, 0.101, 0.041};
    const std::vector<int> printed{1, 3, 9, 11, 7, 6, 12, 4, 10, 5, 8, 2, 13};
    const auto r = rank(globals);
    CHECK(r[0] == 1);
    // The printed ranks of SI1 (0.034) and EC4 (0.041) are swapped relative
    // to their printed weights; every other position agrees.
    for (std::size_t i = 0; i < globals.size(); ++i) {
        if (i == 6 || i == 12) continue;
        CHECK(r[i] == printed[i]);
    }
    CHECK(r[6] == 13);
    CHECK(r[12] == 12);
    CHECK(io::format_fixed(0.339 * 0.346, 3) == "0.117");
}

TEST_CASE("rank examples") {
    const std::vector<double> top3{0.117, 0.101, 0.099};
    CHECK(rank(top3) == std::vector<int>{1, 2, 3});
    const std::vector<double> ties{0.25, 0.25, 0.25, 0.25};
    CHECK(rank(ties) == std::vector<int>{1, 2, 3, 4});
    const std::vector<double> mixed{0.1, 0.7, 0.2};
    CHECK(rank(mixed) == std::vector<int>{3, 1, 2});
}

TEST_CASE("rank agrees with a stable sort and ignores positive rescaling") {
    Rng rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        std::vector<double> w(n);
        // coarse values so ties actually occur
        for (auto& x : w) x = static_cast<double>(rng.index(5)) / 4.0;
        const auto r = rank(w);
        CHECK(r == sort_ranks(w));
        const double scale = 0.01 + 100.0 * rng.uniform();
        std::vector<double> scaled = w;
        for (auto& x : scaled) x *= scale;
        CHECK(rank(scaled) == r);
    }
}

TEST_CASE("composition examples") {
    const auto single = compute_global_weights(labeled({"D"}, {1.0}), std::vector<LabeledWeights>{
                                                                          labeled({"A", "B"}, {0.3, 0.7})});
    CHECK(single.dimensions[0].attributes[0].global_weight == 0.3);
    CHECK(single.dimensions[0].attributes[1].global_weight == 0.7);

    const std::vector<LabeledWeights> locals{labeled({"A1", "A2"}, {0.6, 0.4}), labeled({"B1"}, {1.0})};
    const auto h = compute_global_weights(labeled({"A", "B"}, {0.5, 0.5}), locals);
    CHECK_THAT(h.dimensions[0].attributes[0].global_weight, WithinAbs(0.30, 1e-15));
    CHECK_THAT(h.dimensions[0].attributes[1].global_weight, WithinAbs(0.20, 1e-15));
    CHECK_THAT(h.dimensions[1].attributes[0].global_weight, WithinAbs(0.50, 1e-15));
    CHECK(h.dimensions[1].attributes[0].global_rank == 1);
    CHECK(h.dimensions[0].attributes[0].global_rank == 2);
    CHECK(h.dimensions[0].rank == 1);
    CHECK(h.dimensions[1].rank == 2);

    const auto text = format_hierarchy(h);
    CHECK(text.find("Global Ranking") != std::string::npos);
    CHECK(text.find("0.300") != std::string::npos);
    const auto doc = to_json(h);
    CHECK(doc["dimensions"].size() == 2);
}

TEST_CASE("composition errors") {
    const std::vector<LabeledWeights> one{labeled({"A1"}, {1.0})};
    CHECK(kind_of([&] { compute_global_weights(labeled({"A", "B"}, {0.5, 0.5}), one); }) == ErrorKind::shape);
    const std::vector<LabeledWeights> bad_sum{labeled({"A1", "A2"}, {0.5, 0.6})};
    CHECK(kind_of([&] { compute_global_weights(labeled({"A"}, {1.0}), bad_sum); }) == ErrorKind::domain);
    const std::vector<LabeledWeights> mislabeled{labeled({"A1"}, {0.5, 0.5})};
    CHECK(kind_of([&] { compute_global_weights(labeled({"A"}, {1.0}), mislabeled); }) == ErrorKind::shape);
}

TEST_CASE("random hierarchies keep the simplex invariants") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + rng.index(5);
        std::vector<std::string> dim_codes;
        for (std::size_t i = 0; i < d; ++i) dim_codes.push_back("D" + std::to_string(i));
        const auto dims = labeled(dim_codes, random_simplex(rng, d));
        std::vector<LabeledWeights> locals;
        std::size_t total = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t k = 1 + rng.index(5);
            std::vector<std::string> codes;
            for (std::size_t j = 0; j < k; ++j) codes.push_back(dim_codes[i] + "_" + std::to_string(j));
            locals.push_back(labeled(codes, random_simplex(rng, k)));
            total += k;
        }
        const auto h = compute_global_weights(dims, locals);
        double sum = 0.0;
        std::vector<int> global_ranks;
        for (std::size_t i = 0; i < d; ++i) {
            const auto& dim = h.dimensions[i];
            double within = 0.0;
            std::vector<int> local_ranks;
            for (std::size_t j = 0; j < dim.attributes.size(); ++j) {
                const auto& a = dim.attributes[j];
                CHECK_THAT(a.global_weight, WithinAbs(dim.weight * a.local_weight, 1e-12));
                within += a.global_weight;
                local_ranks.push_back(a.local_rank);
                global_ranks.push_back(a.global_rank);
            }
            CHECK_THAT(within, WithinAbs(dim.weight, 1e-9));
            std::sort(local_ranks.begin(), local_ranks.end());
            for (std::size_t j = 0; j < local_ranks.size(); ++j) CHECK(local_ranks[j] == static_cast<int>(j + 1));
            sum += within;
        }
        CHECK_THAT(sum, WithinAbs(1.0, 1e-9));
        std::sort(global_ranks.begin(), global_ranks.end());
        REQUIRE(global_ranks.size() == total);
        for (std::size_t j = 0; j < total; ++j) CHECK(global_ranks[j] == static_cast<int>(j + 1));
    }
}
