#include "hkmeans/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hkmeans/rng.hpp"

namespace hkm {

void Graph::validate() const {
    if (vertex_count < 1) throw usage_error("graph needs at least one vertex");
    if (edges.empty()) throw usage_error("graph needs at least one edge");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 1 || u > vertex_count || v < 1 || v > vertex_count)
            throw usage_error("edge endpoint out of range");
        if (u == v) throw usage_error("self-loops are not allowed");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) throw usage_error("duplicate edge");
    }
}

Dataset graph_to_instance(const Graph& g) {
    g.validate();
    int m = static_cast<int>(g.edges.size());
    std::vector<MissingPoint> points;
    points.reserve(g.vertex_count);
    for (int t = 1; t <= g.vertex_count; ++t) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        IndexSet mask(m);
        for (int i = 0; i < m; ++i) {
            if (g.edges[i].first == t) {
                v[i] = -1.0;
                mask.set(i);
            } else if (g.edges[i].second == t) {
                v[i] = 1.0;
                mask.set(i);
            }
        }
        points.emplace_back(std::move(v), std::move(mask));
    }
    return Dataset(std::move(points));
}

std::pair<Dataset, std::vector<int>> gen_mixture(const MixtureParams& params) {
    if (params.k < 1 || params.n < params.k) throw usage_error("need n >= k >= 1");
    if (params.d < 1) throw usage_error("dimension must be positive");
    if (params.delta < 0 || params.delta > params.d)
        throw usage_error("delta must lie in [0, d]");
    if (params.missing_rate < 0.0 || params.missing_rate > 1.0)
        throw usage_error("missing rate must lie in [0, 1]");
    if (params.separation < 0.0 || params.noise_sigma < 0.0)
        throw usage_error("separation and noise must be nonnegative");

    Rng rng(params.seed);

    // Centers on a grid with spacing `separation`: distinct cells differ by at
    // least `separation` along some axis.
    int side = 1;
    while (std::pow(side, params.d) < params.k) ++side;
    std::vector<Eigen::VectorXd> centers(params.k);
    for (int t = 0; t < params.k; ++t) {
        centers[t] = Eigen::VectorXd::Zero(params.d);
        int cell = t;
        for (int i = 0; i < params.d; ++i) {
            centers[t][i] = params.separation * (cell % side);
            cell /= side;
        }
    }

    std::vector<MissingPoint> points;
    std::vector<int> truth;
    points.reserve(params.n);
    truth.reserve(params.n);
    std::vector<int> coords(params.d);
    for (int p = 0; p < params.n; ++p) {
        int t = p < params.k ? p : static_cast<int>(rng.uniform_index(params.k));
        Eigen::VectorXd v = centers[t];
        for (int i = 0; i < params.d; ++i) v[i] += params.noise_sigma * rng.normal();

        IndexSet mask = IndexSet::full(params.d);
        if (params.delta > 0 && rng.uniform_double() < params.missing_rate) {
            int sz = 1 + static_cast<int>(rng.uniform_index(params.delta));
            for (int i = 0; i < params.d; ++i) coords[i] = i;
            for (int i = 0; i < sz; ++i) {
                int j = i + static_cast<int>(rng.uniform_index(params.d - i));
                std::swap(coords[i], coords[j]);
                mask.reset(coords[i]);
                v[coords[i]] = 0.0;
            }
        }
        points.emplace_back(std::move(v), std::move(mask));
        truth.push_back(t);
    }
    return {Dataset(std::move(points)), std::move(truth)};
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

Dataset load_csv(std::istream& in, const std::string& missing_token) {
    std::vector<MissingPoint> points;
    std::string line;
    bool first_content_row = true;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string> fields = split_fields(t);

        if (first_content_row) {
            bool header = false;
            for (const std::string& f : fields) {
                double x;
                if (!f.empty() && f != missing_token && !parse_double(f, x)) {
                    header = true;
                    break;
                }
            }
            first_content_row = false;
            if (header) continue;
        }

        if (arity == 0)
            arity = fields.size();
        else if (fields.size() != arity)
            throw usage_error("CSV rows disagree on the number of columns");

        int d = static_cast<int>(fields.size());
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        IndexSet mask(d);
        for (int i = 0; i < d; ++i) {
            const std::string& f = fields[i];
            if (f.empty() || f == missing_token) continue;
            double x;
            if (!parse_double(f, x)) throw usage_error("CSV field is not numeric: '" + f + "'");
            v[i] = x;
            mask.set(i);
        }
        points.emplace_back(std::move(v), std::move(mask));
    }
    if (points.empty()) throw usage_error("CSV contains no data rows");
    return Dataset(std::move(points));
}

Dataset load_csv_file(const std::string& path, const std::string& missing_token) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open input file: " + path);
    return load_csv(in, missing_token);
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& missing_token) {
    for (int p = 0; p < data.size(); ++p) {
        for (int i = 0; i < data.dim(); ++i) {
            if (i) out << ',';
            if (data.defined(p, i))
                out << fmt17(data.value(p, i));
            else
                out << missing_token;
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& data,
                    const std::string& missing_token) {
    std::ofstream out(path);
    if (!out) throw usage_error("cannot open output file: " + path);
    write_csv(out, data, missing_token);
}

Graph load_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        long long u, v;
        if (!(ss >> u >> v)) throw usage_error("edge list line is not a 'u v' pair: " + t);
        std::string rest;
        if (ss >> rest) throw usage_error("trailing tokens on edge list line: " + t);
        if (u < 1 || v < 1) throw usage_error("edge list vertices are 1-indexed");
        g.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        g.vertex_count = std::max<int>(g.vertex_count, static_cast<int>(std::max(u, v)));
    }
    g.validate();
    return g;
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open graph file: " + path);
    return load_edge_list(in);
}

RunReport make_report(const Dataset& data, const SolveParams& params, const SolveReport& solve) {
    RunReport r;
    r.n = data.size();
    r.d = data.dim();
    r.delta = params.delta;
    r.k = params.k;
    r.epsilon = params.epsilon;
    r.seed = params.seed;
    r.trial_costs = solve.trial_costs;
    r.best_cost = *std::min_element(solve.trial_costs.begin(), solve.trial_costs.end());
    r.calls = solve.total_calls;
    r.wall_seconds = solve.wall_seconds;
    r.clustering = solve.best;
    r.params = params;
    return r;
}

std::string report_to_json(const RunReport& report) {
    std::ostringstream out;
    out << "{\n  \"centers\": [";
    for (std::size_t t = 0; t < report.clustering.centers.size(); ++t) {
        out << (t ? ", " : "") << "[";
        const Eigen::VectorXd& c = report.clustering.centers[t];
        for (Eigen::Index i = 0; i < c.size(); ++i) out << (i ? ", " : "") << fmt17(c[i]);
        out << "]";
    }
    out << "],\n  \"assignment\": [";
    for (std::size_t p = 0; p < report.clustering.assignment.size(); ++p)
        out << (p ? ", " : "") << (report.clustering.assignment[p] + 1);
    out << "],\n  \"cost\": " << fmt17(report.clustering.cost);
    out << ",\n  \"trials\": [";
    for (std::size_t i = 0; i < report.trial_costs.size(); ++i)
        out << (i ? ", " : "") << fmt17(report.trial_costs[i]);
    out << "],\n  \"calls\": " << report.calls;
    out << ",\n  \"seed\": " << report.seed;
    out << ",\n  \"params\": {"
        << "\"k\": " << report.k << ", \"epsilon\": " << fmt17(report.epsilon)
        << ", \"alpha\": " << fmt17(report.params.alpha) << ", \"delta\": " << report.delta
        << ", \"n\": " << report.n << ", \"d\": " << report.d
        << ", \"repeats\": " << report.params.repeats
        << ", \"max_calls\": " << report.params.max_calls
        << ", \"m\": " << report.params.sampling.m
        << ", \"lambda_ceil\": " << report.params.sampling.lambda_ceil
        << ", \"retry_limit\": " << report.params.sampling.retry_limit << "}";
    if (report.has_oracle_gap) out << ",\n  \"oracle_gap\": " << fmt17(report.oracle_gap);
    out << ",\n  \"wall_seconds\": " << fmt17(report.wall_seconds);
    out << "\n}\n";
    return out.str();
}

}  // namespace hkm
