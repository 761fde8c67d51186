#include "support.hpp"

#include "io.hpp"

#include <cstdio>
#include <fstream>

using namespace qmc;
using qmc::io::json;

TEST_CASE("matrix JSON round trip") {
    std::mt19937_64 rng(71);
    Mat m = random_matrix(3, 2, rng);
    json j = io::matrix_to_json(m);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 2);
    // row-major order
    CHECK(j["re"][1].get<double>() == m(0, 1).real());
    CHECK(max_abs(io::matrix_from_json(json::parse(j.dump())) - m) < 1e-15);

    json real_only = {{"rows", 1}, {"cols", 2}, {"re", {1.0, 2.0}}};
    Mat r = io::matrix_from_json(real_only);
    CHECK(r(0, 1) == cplx(2.0, 0.0));
    json bad = {{"rows", 2}, {"cols", 2}, {"re", {1.0, 2.0}}};
    CHECK_THROWS_AS(io::matrix_from_json(bad), Error);
}

TEST_CASE("complex and isometry JSON") {
    cplx z(0.25, -1.5);
    CHECK(io::complex_from_json(io::complex_to_json(z)) == z);
    std::mt19937_64 rng(72);
    Isometry iso = random_isometry(3, 2, rng);
    Isometry back = io::isometry_from_json(json::parse(io::isometry_to_json(iso).dump()));
    CHECK(back.d == 3);
    CHECK(back.k == 2);
    CHECK(max_abs(back.v - iso.v) < 1e-15);

    json j = io::isometry_to_json(iso);
    j["k"] = 3;
    CHECK_THROWS_AS(io::isometry_from_json(j), Error);
    json scaled = io::isometry_to_json(iso);
    scaled["kraus"][0]["re"][0] = 5.0;
    CHECK_THROWS_AS(io::isometry_from_json(scaled), Error);
}

TEST_CASE("file reading") {
    CHECK_THROWS(io::read_json_file("/nonexistent/path.json"));
    const char* path = "test_io_tmp.json";
    {
        std::ofstream f(path);
        f << "{ not json";
    }
    CHECK_THROWS_AS(io::read_json_file(path), Error);
    {
        std::ofstream f(path);
        f << R"({"a": 1})";
    }
    CHECK(io::read_json_file(path)["a"] == 1);
    std::remove(path);
}
