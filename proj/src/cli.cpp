#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkmeans/harness.hpp"
#include "hkmeans/oracle.hpp"

namespace hkm {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw usage_error("cannot open output file: " + path);
    out << text;
}

struct SolveArgs {
    std::string input, output, missing_token = "?";
    int k = 2;
    double epsilon = 1.0;
    int repeats = 1;
    std::uint64_t seed = 0;
    long long max_calls = 1'000'000'000LL;
    int delta = -1;
};

int run_solve(const SolveArgs& a) {
    Dataset data = load_csv_file(a.input, a.missing_token);
    SolveParams params =
        SolveParams::make(data, a.k, a.epsilon, a.repeats, a.seed, a.max_calls, a.delta);
    SolveReport solve = run_trials(data, params);
    emit(report_to_json(make_report(data, params, solve)), a.output);
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"k-means clustering for points with unspecified coordinates"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "run the approximation solver on a CSV dataset");
    solve->add_option("--input", sa.input, "input CSV")->required();
    solve->add_option("--k", sa.k, "number of clusters")->required();
    solve->add_option("--epsilon", sa.epsilon, "approximation parameter")->required();
    solve->add_option("--repeats", sa.repeats, "independent trials, best kept");
    solve->add_option("--seed", sa.seed, "rng seed");
    solve->add_option("--missing-token", sa.missing_token, "CSV token for missing entries");
    solve->add_option("--output", sa.output, "write the result JSON here instead of stdout");
    solve->add_option("--max-calls", sa.max_calls, "hard cap on recursion calls per trial");
    solve->add_option("--delta", sa.delta, "assume this many missing entries (>= observed)");

    struct {
        std::string input, output, missing_token = "?";
        int k = 2;
        long long budget = 10'000'000LL;
    } ea;
    CLI::App* exact = app.add_subcommand("exact", "exact brute-force optimum for small instances");
    exact->add_option("--input", ea.input, "input CSV")->required();
    exact->add_option("--k", ea.k, "number of clusters")->required();
    exact->add_option("--budget", ea.budget, "max evaluated partitions");
    exact->add_option("--missing-token", ea.missing_token, "CSV token for missing entries");
    exact->add_option("--output", ea.output, "write a JSON result here");

    CLI::App* gen = app.add_subcommand("gen", "emit instances as CSV");
    gen->require_subcommand(1);

    MixtureParams mp;
    std::string mix_out, mix_labels_out;
    CLI::App* mixture = gen->add_subcommand("mixture", "separated Gaussian mixture");
    mixture->add_option("--k", mp.k, "clusters");
    mixture->add_option("--n", mp.n, "points");
    mixture->add_option("--d", mp.d, "dimension");
    mixture->add_option("--delta", mp.delta, "max missing coordinates per point");
    mixture->add_option("--separation", mp.separation, "min distance between true centers");
    mixture->add_option("--noise-sigma", mp.noise_sigma, "Gaussian noise scale");
    mixture->add_option("--missing-rate", mp.missing_rate, "fraction of points with missing entries");
    mixture->add_option("--seed", mp.seed, "rng seed");
    mixture->add_option("--out", mix_out, "output CSV")->required();
    mixture->add_option("--labels-out", mix_labels_out, "also write ground-truth labels");

    struct {
        std::string graph, out;
    } ca;
    CLI::App* coloring = gen->add_subcommand("coloring", "graph-coloring reduction instance");
    coloring->add_option("--graph", ca.graph, "edge list file (u v per line, 1-indexed)")->required();
    coloring->add_option("--out", ca.out, "output CSV")->required();

    struct {
        std::string input, centers, missing_token = "?";
    } va;
    CLI::App* eval = app.add_subcommand("eval", "cost of given centers on a dataset");
    eval->add_option("--input", va.input, "input CSV")->required();
    eval->add_option("--centers", va.centers, "result JSON holding the centers")->required();
    eval->add_option("--missing-token", va.missing_token, "CSV token for missing entries");

    struct {
        std::vector<long long> sizes;
        int seeds = 5;
        int k = 2, d = 8, delta = 1;
        double epsilon = 1.0, separation = 20.0, noise_sigma = 1.0, missing_rate = 0.5;
        std::string out;
    } ba;
    CLI::App* bench = app.add_subcommand("bench", "wall-time scaling sweep over n");
    bench->add_option("--sizes", ba.sizes, "point counts, strictly increasing")->required();
    bench->add_option("--seeds", ba.seeds, "seeds averaged per size");
    bench->add_option("--k", ba.k, "clusters");
    bench->add_option("--d", ba.d, "dimension");
    bench->add_option("--delta", ba.delta, "max missing coordinates per point");
    bench->add_option("--epsilon", ba.epsilon, "approximation parameter");
    bench->add_option("--separation", ba.separation, "mixture separation");
    bench->add_option("--noise-sigma", ba.noise_sigma, "mixture noise");
    bench->add_option("--missing-rate", ba.missing_rate, "mixture missing rate");
    bench->add_option("--out", ba.out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);

        if (solve->parsed()) return run_solve(sa);

        if (exact->parsed()) {
            Dataset data = load_csv_file(ea.input, ea.missing_token);
            ExactResult res = exact_k_means(data, ea.k, ea.budget);
            std::cout << fmt17(res.opt_cost) << "\n";
            if (!ea.output.empty()) {
                std::ostringstream js;
                js << "{\n  \"cost\": " << fmt17(res.opt_cost) << ",\n  \"partition\": [";
                for (std::size_t p = 0; p < res.partition.size(); ++p)
                    js << (p ? ", " : "") << (res.partition[p] + 1);
                js << "]\n}\n";
                emit(js.str(), ea.output);
            }
            return 0;
        }

        if (mixture->parsed()) {
            auto [data, labels] = gen_mixture(mp);
            write_csv_file(mix_out, data);
            if (!mix_labels_out.empty()) {
                std::ofstream lout(mix_labels_out);
                if (!lout) throw usage_error("cannot open labels file: " + mix_labels_out);
                for (int t : labels) lout << (t + 1) << '\n';
            }
            return 0;
        }

        if (coloring->parsed()) {
            Graph g = load_edge_list_file(ca.graph);
            write_csv_file(ca.out, graph_to_instance(g));
            return 0;
        }

        if (eval->parsed()) {
            Dataset data = load_csv_file(va.input, va.missing_token);
            std::ifstream jin(va.centers);
            if (!jin) throw usage_error("cannot open centers file: " + va.centers);
            nlohmann::json j = nlohmann::json::parse(jin);
            if (!j.contains("centers")) throw usage_error("centers JSON lacks a 'centers' field");
            std::vector<Eigen::VectorXd> centers;
            for (const auto& row : j["centers"]) {
                Eigen::VectorXd c(row.size());
                for (std::size_t i = 0; i < row.size(); ++i) c[static_cast<Eigen::Index>(i)] = row[i].get<double>();
                centers.push_back(std::move(c));
            }
            Clustering res = voronoi_clustering(data, std::move(centers));
            std::cout << fmt17(res.cost) << "\n";
            return 0;
        }

        if (bench->parsed()) {
            if (ba.sizes.empty()) throw usage_error("bench needs at least one size");
            for (std::size_t i = 1; i < ba.sizes.size(); ++i)
                if (ba.sizes[i] <= ba.sizes[i - 1])
                    throw usage_error("bench sizes must be strictly increasing");
            if (ba.seeds < 1) throw usage_error("bench needs at least one seed");
            std::ostringstream rows;
            for (long long n : ba.sizes) {
                double total = 0.0;
                for (int s = 0; s < ba.seeds; ++s) {
                    MixtureParams g{ba.k,          static_cast<int>(n), ba.d,
                                    ba.delta,      ba.separation,       ba.noise_sigma,
                                    ba.missing_rate, static_cast<std::uint64_t>(s)};
                    auto [data, labels] = gen_mixture(g);
                    SolveParams params = SolveParams::make(data, ba.k, ba.epsilon, 1,
                                                           static_cast<std::uint64_t>(s));
                    SolveReport rep = run_trials(data, params);
                    total += rep.wall_seconds;
                }
                rows << n << "," << fmt17(total / ba.seeds) << "\n";
            }
            emit(rows.str(), ba.out);
            return 0;
        }

        throw usage_error("no subcommand selected");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hkm
