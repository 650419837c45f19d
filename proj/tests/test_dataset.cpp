#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "parsid/dataset.hpp"
#include "parsid/errors.hpp"
#include "parsid/rng.hpp"

using namespace parsid;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("random system structure") {
    SUBCASE("order one is a single real pole away from the unit circle") {
        auto rng = make_rng(1);
        const auto t = generate_random_system(1, rng);
        REQUIRE(t.order() == 1);
        CHECK(t.poles[0].imag() == 0.0);
        const double r = std::abs(t.poles[0].real());
        CHECK(r >= 0.3);
        CHECK(r <= 0.95);
    }
    SUBCASE("order ten is five conjugate pairs inside the disk") {
        auto rng = make_rng(2);
        const auto t = generate_random_system(10, rng);
        REQUIRE(t.order() == 10);
        for (int p = 0; p < 10; p += 2) {
            CHECK(t.poles[p].imag() > 0.0);
            CHECK(t.poles[p + 1] == std::conj(t.poles[p]));
            CHECK(t.coeff_a[p + 1] == std::conj(t.coeff_a[p]));
            CHECK(std::abs(t.poles[p]) < 1.0);
        }
    }
    SUBCASE("same seed, same system") {
        auto r1 = make_rng(77), r2 = make_rng(77);
        const auto a = generate_random_system(7, r1);
        const auto b = generate_random_system(7, r2);
        CHECK(a.poles == b.poles);
        CHECK(a.coeff_a == b.coeff_a);
        CHECK(a.feedthrough == b.feedthrough);
    }
    SUBCASE("order must be positive") {
        auto rng = make_rng(3);
        CHECK_THROWS_AS(generate_random_system(0, rng), std::invalid_argument);
    }
}

TEST_CASE("default synthetic dataset matches the experiment shape") {
    SyntheticConfig cfg;
    auto rng = make_rng(5);
    const auto [ds, truth] = generate_random_dataset(cfg, rng);
    REQUIRE(ds.chunk_count() == 4);
    for (const auto& c : ds.chunks) {
        CHECK(c.length() == 50);
        CHECK(c.observed.size() == 45);  // 10% of 50 missing
        for (double u : c.input) CHECK(std::abs(u) <= 5.0);
    }
    CHECK(ds.noise_bound_eps == 0.25);
    CHECK(ds.quantizer.cell_count() == 8);
    for (int i = 0; i < 4; ++i) {
        REQUIRE(truth.noisy_output[i].size() == 50);
        for (int k = 0; k < 50; ++k) {
            CHECK(truth.noisy_output[i][k] ==
                  doctest::Approx(truth.clean_output[i][k] + truth.noise[i][k]));
            CHECK(std::abs(truth.noise[i][k]) <= 0.25);
        }
        // stored levels are the quantized noisy outputs
        for (const auto& [k, lvl] : ds.chunks[i].observed)
            CHECK(lvl == quantize(ds.quantizer, truth.noisy_output[i][k - 1]).level_index);
    }
}

TEST_CASE("zero noise stores the clean output") {
    SyntheticConfig cfg;
    cfg.noise_bound = 0.0;
    auto rng = make_rng(6);
    const auto [ds, truth] = generate_random_dataset(cfg, rng);
    for (int i = 0; i < ds.chunk_count(); ++i)
        CHECK(truth.noisy_output[i] == truth.clean_output[i]);
}

TEST_CASE("observe behavior") {
    const auto spec = make_uniform(3, 3.0);
    std::vector<double> y(50);
    for (int k = 0; k < 50; ++k) y[k] = std::sin(0.3 * k) * 2.5;

    SUBCASE("no noise, nothing missing") {
        auto rng = make_rng(8);
        const auto obs = observe(y, spec, 0.0, 0.0, rng);
        CHECK(obs.observed.size() == 50);
        for (const auto& [k, lvl] : obs.observed)
            CHECK(lvl == quantize(spec, y[k - 1]).level_index);
    }
    SUBCASE("ten percent missing") {
        auto rng = make_rng(9);
        const auto obs = observe(y, spec, 0.0, 0.1, rng);
        CHECK(obs.observed.size() == 45);
    }
    SUBCASE("masks are seed-deterministic") {
        auto r1 = make_rng(10), r2 = make_rng(10);
        const auto a = observe(y, spec, 0.1, 0.2, r1);
        const auto b = observe(y, spec, 0.1, 0.2, r2);
        CHECK(a.observed == b.observed);
        CHECK(a.noise == b.noise);
    }
}

TEST_CASE("two column series loader") {
    SUBCASE("plain rows") {
        const auto path = temp_file("parsid_two_col.txt");
        std::ofstream(path) << "1.0 2.0\n3.0 4.0\n";
        const auto [u, y] = load_two_column_series(path.string());
        CHECK(u == std::vector<double>{1.0, 3.0});
        CHECK(y == std::vector<double>{2.0, 4.0});
        std::filesystem::remove(path);
    }
    SUBCASE("comment headers are skipped") {
        const auto path = temp_file("parsid_two_col_hdr.txt");
        std::ofstream(path) << "% header\n# another\n  \n5 6\n";
        const auto [u, y] = load_two_column_series(path.string());
        CHECK(u == std::vector<double>{5.0});
        CHECK(y == std::vector<double>{6.0});
        std::filesystem::remove(path);
    }
    SUBCASE("bad line reports its number") {
        const auto path = temp_file("parsid_two_col_bad.txt");
        std::ofstream(path) << "1 2\nnot numbers\n";
        try {
            load_two_column_series(path.string());
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
        std::filesystem::remove(path);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_two_column_series("/nonexistent/file.txt"), IoError);
    }
}

TEST_CASE("chunkify") {
    std::vector<double> u(1024), y(1024);
    for (int i = 0; i < 1024; ++i) {
        u[i] = i;
        y[i] = 2 * i;
    }
    SUBCASE("1024 samples in 20 chunks of 50, remainder dropped") {
        const auto chunks = chunkify(u, y, 50);
        REQUIRE(chunks.size() == 20);
        for (const auto& [cu, cy] : chunks) CHECK(cu.size() == 50);
        CHECK(chunks.back().first.back() == doctest::Approx(999.0));
    }
    SUBCASE("exact division") {
        const std::vector<double> a(100, 1.0), b(100, 2.0);
        CHECK(chunkify(a, b, 50).size() == 2);
    }
    SUBCASE("chunk longer than the series") {
        const std::vector<double> a(49, 1.0), b(49, 2.0);
        CHECK_THROWS_AS(chunkify(a, b, 50), std::invalid_argument);
    }
}

TEST_CASE("generation is bit-identical under one seed") {
    SyntheticConfig cfg;
    auto r1 = make_rng(123), r2 = make_rng(123);
    const auto [d1, t1] = generate_random_dataset(cfg, r1);
    const auto [d2, t2] = generate_random_dataset(cfg, r2);
    for (int i = 0; i < d1.chunk_count(); ++i) {
        CHECK(d1.chunks[i].input == d2.chunks[i].input);
        CHECK(d1.chunks[i].observed == d2.chunks[i].observed);
        CHECK(t1.noise[i] == t2.noise[i]);
    }
}

TEST_CASE("dataset csv export") {
    SyntheticConfig cfg;
    cfg.chunk_count = 1;
    cfg.chunk_length = 5;
    cfg.missing_fraction = 0.0;
    auto rng = make_rng(55);
    const auto [ds, truth] = generate_random_dataset(cfg, rng);
    const auto path = temp_file("parsid_ds.csv");
    export_dataset_csv(ds, path.string(), "{}");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# {}");
    std::getline(in, line);
    CHECK(line == "chunk,k,u,observed_flag,level_index,level_value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
