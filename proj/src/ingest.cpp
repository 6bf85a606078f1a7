#include "causalkin/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "causalkin/errors.hpp"
#include "causalkin/kernels.hpp"

namespace causalkin {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

const char* dim_suffix(int dim) {
    static const char* xyz[] = {"x", "y", "z"};
    return dim < 3 ? xyz[dim] : nullptr;
}

}  // namespace

CsvSchema coordinate_schema(int n_joints, int n_dims) {
    CsvSchema s;
    char buf[32];
    for (int j = 0; j < n_joints; ++j)
        for (int d = 0; d < n_dims; ++d) {
            if (const char* suffix = dim_suffix(d))
                std::snprintf(buf, sizeof buf, "joint%02d_%s", j + 1, suffix);
            else
                std::snprintf(buf, sizeof buf, "joint%02d_d%d", j + 1, d);
            s.coordinate_columns.emplace_back(buf);
        }
    return s;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 const SkeletonSpec& skeleton) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file '" + path + "'");
    strip_cr(line);
    auto header = split_line(line);
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) index[header[i]] = i;

    auto require = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw MissingColumnError(name);
        return it->second;
    };

    require(schema.frame_column);
    const int behavior_col = require(schema.behavior_column);
    const int exercise_col =
        schema.exercise_column.empty() ? -1 : require(schema.exercise_column);
    std::vector<int> coord_cols;
    coord_cols.reserve(schema.coordinate_columns.size());
    for (const auto& name : schema.coordinate_columns) coord_cols.push_back(require(name));

    const int n_dims = skeleton.n_joints > 0 && !schema.coordinate_columns.empty()
                           ? static_cast<int>(schema.coordinate_columns.size()) / skeleton.n_joints
                           : 1;
    if (static_cast<int>(schema.coordinate_columns.size()) != skeleton.n_joints * n_dims)
        throw ShapeMismatchError(skeleton.n_joints * n_dims,
                                 static_cast<int>(schema.coordinate_columns.size()));

    Dataset d;
    d.n_joints = skeleton.n_joints;
    d.n_dims = n_dims;

    int row = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size())
            throw ShapeMismatchError(static_cast<int>(header.size()),
                                     static_cast<int>(cells.size()));
        for (std::size_t v = 0; v < coord_cols.size(); ++v) {
            const std::string& cell = cells[coord_cols[v]];
            char* end = nullptr;
            const double value = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || !std::isfinite(value))
                throw NonFiniteValueError(row, coord_cols[v]);
            d.data.push_back(value);
        }
        const std::string& label = cells[behavior_col];
        if (label == "0")
            d.behavior.push_back(0);
        else if (label == "1")
            d.behavior.push_back(1);
        else
            throw LabelParseError(row);
        if (exercise_col >= 0) {
            char* end = nullptr;
            const long ex = std::strtol(cells[exercise_col].c_str(), &end, 10);
            if (end == cells[exercise_col].c_str()) throw LabelParseError(row);
            d.exercise.push_back(static_cast<int>(ex));
        }
        ++row;
    }
    if (row == 0) throw DataError("no data rows in '" + path + "'");
    return d;
}

void write_csv(const std::string& path, const Dataset& d, const CsvSchema& schema) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << schema.frame_column;
    for (const auto& c : schema.coordinate_columns) out << ',' << c;
    out << ',' << schema.behavior_column;
    if (!schema.exercise_column.empty()) out << ',' << schema.exercise_column;
    out << '\n';
    char buf[32];
    for (int t = 0; t < d.frames(); ++t) {
        out << t;
        for (int v = 0; v < d.vars(); ++v) {
            std::snprintf(buf, sizeof buf, "%.17g", d.at(t, v));
            out << ',' << buf;
        }
        out << ',' << d.behavior[t];
        if (!schema.exercise_column.empty())
            out << ',' << (d.exercise.empty() ? 0 : d.exercise[t]);
        out << '\n';
    }
}

namespace {

// rank positions of the interior bin boundaries for the given profile
std::vector<long long> boundary_ranks(int n, int n_bins, BinProfile profile) {
    std::vector<long long> ranks;
    ranks.reserve(n_bins - 1);
    for (int k = 1; k < n_bins; ++k) {
        double q;
        if (profile == BinProfile::uniform) {
            q = static_cast<double>(k) / n_bins;
        } else {
            const double u = 2.0 * k / n_bins - 1.0;
            q = 0.5 + 0.5 * (u < 0 ? -1.0 : 1.0) * std::pow(std::abs(u), 1.5);
        }
        ranks.push_back(static_cast<long long>(q * n));
    }
    return ranks;
}

}  // namespace

DiscreteDataset discretize(const Dataset& d, int n_bins, BinProfile profile) {
    if (n_bins < 2) throw ConfigError("n_bins must be >= 2");
    const int n = d.frames();
    const int vars = d.vars();
    if (n == 0) throw DataError("cannot discretize an empty dataset");

    DiscreteDataset out;
    out.n_joints = d.n_joints;
    out.n_dims = d.n_dims;
    out.states.assign(static_cast<std::size_t>(n) * vars, 0);
    out.n_states.assign(vars, 0);
    out.bin_edges.assign(vars, {});
    out.degenerate.assign(vars, false);

    const std::vector<long long> bounds = boundary_ranks(n, n_bins, profile);

    kernels::parallel_for(vars, [&](int v) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double va = d.at(a, v), vb = d.at(b, v);
            return va < vb || (va == vb && a < b);
        });

        // rank-quantile bucket, ties inherit the first group member's bucket
        std::vector<int> bucket(n);
        int g = 0;
        while (g < n) {
            int h = g;
            while (h + 1 < n && d.at(order[h + 1], v) == d.at(order[g], v)) ++h;
            const int b = static_cast<int>(
                std::upper_bound(bounds.begin(), bounds.end(), g) - bounds.begin());
            for (int p = g; p <= h; ++p) bucket[order[p]] = b;
            g = h + 1;
        }

        // dense relabel of occupied buckets, preserving order
        std::vector<int> remap(n_bins, -1);
        int next = 0;
        for (int p = 0; p < n; ++p) {
            int& r = remap[bucket[order[p]]];
            if (r < 0) r = next++;
        }
        for (int t = 0; t < n; ++t)
            out.states[static_cast<std::size_t>(t) * vars + v] = remap[bucket[t]];
        out.n_states[v] = next;
        out.degenerate[v] = (next == 1);

        // interior cut values: smallest value of each state beyond the first
        std::vector<double> edges;
        int prev_state = remap[bucket[order[0]]];
        for (int p = 1; p < n; ++p) {
            const int s = remap[bucket[order[p]]];
            if (s != prev_state) {
                edges.push_back(d.at(order[p], v));
                prev_state = s;
            }
        }
        out.bin_edges[v] = std::move(edges);
    });
    return out;
}

}  // namespace causalkin
