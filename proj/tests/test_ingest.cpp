#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "causalkin/errors.hpp"
#include "causalkin/ingest.hpp"
#include "causalkin/rng.hpp"

using namespace causalkin;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

Dataset from_columns(const std::vector<std::vector<double>>& cols) {
    Dataset d;
    d.n_joints = static_cast<int>(cols.size());
    d.n_dims = 1;
    const int frames = static_cast<int>(cols[0].size());
    d.data.resize(static_cast<std::size_t>(frames) * cols.size());
    for (int t = 0; t < frames; ++t)
        for (std::size_t v = 0; v < cols.size(); ++v)
            d.data[t * cols.size() + v] = cols[v][t];
    d.behavior.assign(frames, 0);
    return d;
}

std::vector<int> column_states(const DiscreteDataset& dd, int v) {
    std::vector<int> out(dd.frames());
    for (int t = 0; t < dd.frames(); ++t) out[t] = dd.at(t, v);
    return out;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("load_csv keeps file order and parses labels") {
    const auto p = write_temp("ck_basic.csv",
                              "frame,joint01_x,joint02_x,behavior\n"
                              "0,1.0,3.0,0\n"
                              "1,2.0,4.0,1\n");
    CsvSchema schema = coordinate_schema(2, 1);
    SkeletonSpec sk = chain_skeleton(2);
    const Dataset d = load_csv(p.string(), schema, sk);
    CHECK(d.frames() == 2);
    CHECK(d.data == std::vector<double>{1.0, 3.0, 2.0, 4.0});
    CHECK(d.behavior == std::vector<int>{0, 1});
}

TEST_CASE("load_csv error paths") {
    SkeletonSpec sk = chain_skeleton(2);
    CsvSchema schema = coordinate_schema(2, 1);

    const auto missing = write_temp("ck_missing.csv",
                                    "frame,joint01_x,joint02_x\n0,1.0,2.0\n");
    CHECK_THROWS_AS(load_csv(missing.string(), schema, sk), MissingColumnError);

    const auto nan = write_temp("ck_nan.csv",
                                "frame,joint01_x,joint02_x,behavior\n0,NaN,2.0,0\n");
    CHECK_THROWS_AS(load_csv(nan.string(), schema, sk), NonFiniteValueError);

    const auto label = write_temp("ck_label.csv",
                                  "frame,joint01_x,joint02_x,behavior\n0,1.0,2.0,yes\n");
    CHECK_THROWS_AS(load_csv(label.string(), schema, sk), LabelParseError);

    CHECK_THROWS_AS(load_csv("/nonexistent/x.csv", schema, sk), DataError);

    CsvSchema short_schema = coordinate_schema(1, 1);
    CHECK_THROWS_AS(load_csv(missing.string(), short_schema, sk), ShapeMismatchError);
}

TEST_CASE("write_csv / load_csv round trip") {
    Dataset d = from_columns({{1.5, -2.25, 0.125}, {3.0, 4.0, 5.5}});
    d.behavior = {0, 1, 1};
    const CsvSchema schema = coordinate_schema(2, 1);
    const fs::path p = fs::temp_directory_path() / "ck_roundtrip.csv";
    write_csv(p.string(), d, schema);
    const Dataset back = load_csv(p.string(), schema, chain_skeleton(2));
    CHECK(back.data == d.data);
    CHECK(back.behavior == d.behavior);
}

TEST_CASE("discretize: median split") {
    const Dataset d = from_columns({{1, 2, 3, 4}});
    for (const auto profile : {BinProfile::tail_weighted, BinProfile::uniform}) {
        const auto dd = discretize(d, 2, profile);
        CHECK(column_states(dd, 0) == std::vector<int>{0, 0, 1, 1});
        CHECK(dd.n_states[0] == 2);
        CHECK_FALSE(dd.degenerate[0]);
    }
}

TEST_CASE("discretize: uniform scaling leaves states unchanged") {
    const Dataset d = from_columns({{10, 20, 30, 40}});
    const auto dd = discretize(d, 2);
    CHECK(column_states(dd, 0) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("discretize: constant column is flagged, not fatal") {
    const Dataset d = from_columns({{5, 5, 5, 5}});
    const auto dd = discretize(d, 2);
    CHECK(column_states(dd, 0) == std::vector<int>{0, 0, 0, 0});
    CHECK(dd.degenerate[0]);
    CHECK(dd.n_states[0] == 1);
}

TEST_CASE("discretize: ties fall into the lower bin") {
    const Dataset ok = from_columns({{1, 1, 2, 2, 2, 3}});
    const auto split = discretize(ok, 2);
    // boundary rank 3 sits inside the tie group, which takes the lower bucket
    CHECK(column_states(split, 0) == std::vector<int>{0, 0, 0, 0, 0, 1});

    // a tie group swallowing every boundary collapses the variable
    const Dataset collapsed = from_columns({{1, 2, 2, 2}});
    const auto dd = discretize(collapsed, 2);
    CHECK(column_states(dd, 0) == std::vector<int>{0, 0, 0, 0});
    CHECK(dd.n_states[0] == 1);
    CHECK(dd.degenerate[0]);  // single occupied state, same as a constant column
}

TEST_CASE("discretize: monotone invariance is exact for strictly increasing maps") {
    Rng rng(404);
    for (const auto profile : {BinProfile::tail_weighted, BinProfile::uniform}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::vector<double>> cols(3, std::vector<double>(257));
            for (auto& c : cols)
                for (auto& v : c) v = rng.normal();
            const Dataset d = from_columns(cols);
            const auto base = discretize(d, 8, profile);

            const auto apply = [&](double (*g)(double)) {
                Dataset mapped = d;
                for (auto& v : mapped.data) v = g(v);
                const auto dd = discretize(mapped, 8, profile);
                CHECK(dd.states == base.states);
                CHECK(dd.n_states == base.n_states);
            };
            apply(+[](double x) { return 3.5 * x; });
            apply(+[](double x) { return x * x * x; });
            apply(+[](double x) { return std::exp(x); });
            apply(+[](double x) { return 2.0 * x - 17.0; });
        }
    }
}

TEST_CASE("discretize: deterministic") {
    Rng rng(77);
    std::vector<std::vector<double>> cols(2, std::vector<double>(100));
    for (auto& c : cols)
        for (auto& v : c) v = rng.normal();
    const Dataset d = from_columns(cols);
    const auto a = discretize(d, 8);
    const auto b = discretize(d, 8);
    CHECK(a.states == b.states);
    CHECK(a.bin_edges == b.bin_edges);
}

TEST_CASE("discretize: n_bins < 2 rejected") {
    const Dataset d = from_columns({{1, 2, 3}});
    CHECK_THROWS_AS(discretize(d, 1), ConfigError);
}

TEST_CASE("coordinate_schema names columns joint01_x..jointNN_z") {
    const auto s = coordinate_schema(22, 3);
    REQUIRE(s.coordinate_columns.size() == 66);
    CHECK(s.coordinate_columns.front() == "joint01_x");
    CHECK(s.coordinate_columns[1] == "joint01_y");
    CHECK(s.coordinate_columns[2] == "joint01_z");
    CHECK(s.coordinate_columns.back() == "joint22_z");
}

}  // TEST_SUITE
