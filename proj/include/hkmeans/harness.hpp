#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hkmeans/core.hpp"
#include "hkmeans/solver.hpp"

namespace hkm {

/// Simple undirected graph given as an ordered edge list. Self-loops and
/// duplicate edges (in either orientation) are rejected.
struct Graph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  ///< 1-indexed endpoints

    void validate() const;
};

/// Coloring reduction: one point per vertex in H^m, coordinate i carrying -1
/// for edge i's first endpoint, +1 for its second, unspecified elsewhere. A
/// k-colorable graph maps to an instance with exact k-means cost 0.
Dataset graph_to_instance(const Graph& g);

struct MixtureParams {
    int k = 2;
    int n = 100;
    int d = 2;
    int delta = 0;
    double separation = 10.0;
    double noise_sigma = 1.0;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Gaussian mixture with centers at pairwise distance >= separation and a
/// missing pattern of at most `delta` coordinates per point, drawn for a
/// `missing_rate` fraction of points. Returns the ground-truth labels with
/// the dataset; every cluster receives at least one point.
std::pair<Dataset, std::vector<int>> gen_mixture(const MixtureParams& params);

/// CSV: one point per row, d numeric columns; missing entries carry the token
/// (empty cells also count as missing on input). A non-numeric first row is
/// treated as a header and skipped.
Dataset load_csv(std::istream& in, const std::string& missing_token = "?");
Dataset load_csv_file(const std::string& path, const std::string& missing_token = "?");
void write_csv(std::ostream& out, const Dataset& data, const std::string& missing_token = "?");
void write_csv_file(const std::string& path, const Dataset& data,
                    const std::string& missing_token = "?");

/// Edge list: one "u v" pair per line, 1-indexed, '#' starts a comment.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

/// Everything `solve` reports about one run.
struct RunReport {
    int n = 0, d = 0, delta = 0, k = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> trial_costs;
    double best_cost = 0.0;
    long long calls = 0;
    double wall_seconds = 0.0;
    bool has_oracle_gap = false;
    double oracle_gap = 0.0;

    Clustering clustering;
    SolveParams params;
};

RunReport make_report(const Dataset& data, const SolveParams& params, const SolveReport& solve);

/// Result JSON with doubles printed to 17 significant digits so reported
/// numbers reproduce exactly.
std::string report_to_json(const RunReport& report);

int cli_main(int argc, const char* const* argv);

}  // namespace hkm
