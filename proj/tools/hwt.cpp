// Command-line front end for the hierarchical Haar wavelet library.
//
// Exit status: 0 on success, 1 on domain errors (bad data, malformed files),
// 2 on usage errors (bad flags, unreadable or unwritable paths).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hwt/hwt.hpp>

namespace
{

namespace fs = std::filesystem;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> builtin_names = {"iris", "scalar-demo"};

bool is_builtin(const std::string& name)
{
    return std::find(builtin_names.begin(), builtin_names.end(), name) != builtin_names.end();
}

/// A CSV path, or the name of a built-in dataset when no such file exists.
hwt::DataMatrix load_data(const std::string& path)
{
    if (!fs::exists(path) && is_builtin(path)) return path == "iris" ? hwt::iris() : hwt::scalar_demo();
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    auto x = hwt::read_csv(in);
    x.validate();
    return x;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    return in;
}

/// Writes to `path`, or to stdout when the path is empty or "-".
template <class F>
void emit(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    write(out);
    if (!out) throw UsageError("error writing '" + path + "'");
}

void write_bytes(const std::string& path, const hwt::Bytes& b)
{
    emit(path, [&](std::ostream& os) { os.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size())); });
}

std::uint64_t default_seed()
{
    const char* env = std::getenv("HWT_SEED");
    if (!env || !*env) return 1;
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw UsageError("HWT_SEED must be an unsigned integer");
    return v;
}

hwt::Criterion criterion_of(const std::string& s)
{
    try {
        return hwt::parse_criterion(s);
    } catch (const hwt::invalid_input& e) {
        throw UsageError(e.what());
    }
}

const std::vector<std::string> criterion_names = {"ward", "median", "unweighted_average", "average"};

void write_stats(std::ostream& os, const hwt::SmoothStats& s)
{
    using hwt::format_real;
    os << "threshold\tzero_count\tpct_zero\tmse\tmse_per_observation\tmse_relative\tenergy\n";
    os << format_real(s.threshold, 6) << '\t' << s.zero_count << '\t' << format_real(s.pct_zero, 6) << '\t'
       << format_real(s.mse_per_entry, 6) << '\t' << format_real(s.mse_per_observation, 6) << '\t'
       << format_real(s.mse_relative, 6) << '\t' << format_real(s.energy, 6) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hierarchical Haar wavelet transform of clustered data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hwt 1.0");

    std::string input;
    std::string input2;
    std::string out;
    std::string criterion = "ward";
    std::optional<std::uint64_t> seed;

    auto add_criterion = [&](CLI::App* c) {
        c->add_option("--criterion", criterion, "ward, median or unweighted_average")
            ->check(CLI::IsMember(criterion_names))
            ->capture_default_str();
    };
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "PRNG seed (default: $HWT_SEED or 1)"); };
    auto data_arg = [&](CLI::App* c, const char* help) {
        c->add_option("input", input, help)->required()->check(CLI::ExistingFile | CLI::IsMember(builtin_names));
    };

    auto* cluster = app.add_subcommand("cluster", "Agglomerative hierarchy of the rows of a CSV");
    data_arg(cluster, "data CSV or built-in name");
    add_criterion(cluster);
    cluster->add_option("-o,--out", out, "dendrogram file (default stdout)");

    auto* haar = app.add_subcommand("haar", "Forward transform of a CSV over a dendrogram");
    data_arg(haar, "data CSV or built-in name");
    haar->add_option("tree", input2, "dendrogram file")->required()->check(CLI::ExistingFile);
    haar->add_option("-o,--out", out, "decomposition file (default stdout)");

    auto* inv = app.add_subcommand("inverse", "Reconstruct data from a decomposition");
    inv->add_option("decomposition", input, "decomposition file")->required()->check(CLI::ExistingFile);
    inv->add_option("-o,--out", out, "CSV file (default stdout)");

    double threshold = 0.0;
    std::string stats_path;
    auto* filter = app.add_subcommand("filter", "Hard-threshold details and reconstruct");
    data_arg(filter, "data CSV or built-in name");
    add_criterion(filter);
    filter->add_option("-t,--threshold", threshold, "details with |d| <= t become 0")->required();
    filter->add_option("-o,--out", out, "reconstructed CSV (default stdout)");
    filter->add_option("--stats", stats_path, "statistics TSV (default stderr)");

    std::vector<double> thresholds;
    auto* sweep = app.add_subcommand("sweep", "Zero fraction and MSE over several thresholds");
    data_arg(sweep, "data CSV or built-in name");
    add_criterion(sweep);
    sweep->add_option("--thresholds", thresholds, "comma-separated list")->required()->delimiter(',');
    sweep->add_option("-o,--out", out, "TSV (default stdout)");

    double tau = 0.0;
    std::string bench_path;
    std::size_t restarts = 20;
    auto* cond = app.add_subcommand("condense", "Collapse nodes with small detail norms");
    data_arg(cond, "data CSV or built-in name");
    add_criterion(cond);
    cond->add_option("--tau", tau, "collapse nodes with norm < tau")->required();
    cond->add_option("-o,--out", out, "condensed tree (default stdout)");
    cond->add_option("--benchmark", bench_path, "partition vs k-means TSV");
    cond->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
    add_seed(cond);

    bool doubling = false;
    bool drop_zero = false;
    auto* ca = app.add_subcommand("ca", "Correspondence analysis of a frequency table");
    ca->add_option("counts", input, "frequency CSV")->required()->check(CLI::ExistingFile);
    ca->add_flag("--double", doubling, "append complement columns first");
    ca->add_flag("--drop-zero", drop_zero, "drop rows and columns with zero total");
    ca->add_option("-o,--out", out, "factor coordinates CSV (default stdout)");

    std::string dataset;
    std::size_t rows = 150;
    std::size_t cols = 4;
    double lo = 0.0;
    double hi = 7.9;
    double scale = 1.0;
    double noise_divisor = 10.0;
    std::string raster_path;
    auto* gen = app.add_subcommand("gen", "Write a built-in or generated dataset");
    gen->add_option("dataset", dataset, "iris, uniform, gaussian or scalar-demo")
        ->required()
        ->check(CLI::IsMember({"iris", "uniform", "gaussian", "scalar-demo"}));
    gen->add_option("--rows", rows, "uniform: rows")->capture_default_str();
    gen->add_option("--cols", cols, "uniform: columns")->capture_default_str();
    gen->add_option("--lo", lo, "uniform: lower bound")->capture_default_str();
    gen->add_option("--hi", hi, "uniform: upper bound")->capture_default_str();
    gen->add_option("--scale", scale, "gaussian: shrink the 1200x400 layout by this factor")->capture_default_str();
    gen->add_option("--noise-divisor", noise_divisor, "gaussian: noise on [0, max/divisor], 0 for none")
        ->capture_default_str();
    gen->add_option("-o,--out", out, "CSV (default stdout)");
    gen->add_option("--raster", raster_path, "also write an HWT1 raster");
    add_seed(gen);

    std::vector<double> direct = {0.25, 0.39};
    auto* comp = app.add_subcommand("compress-eval", "Raster + gzip sizes of filtered reconstructions");
    comp->add_option("input", input, "data CSV (default: generated gaussian layout)")
        ->check(CLI::ExistingFile | CLI::IsMember(builtin_names));
    add_criterion(comp);
    thresholds = {0.0, 0.05, 0.1};
    comp->add_option("--thresholds", thresholds, "wavelet thresholds")->delimiter(',')->capture_default_str();
    comp->add_option("--direct-thresholds", direct, "thresholds applied to the data itself")
        ->delimiter(',')
        ->capture_default_str();
    comp->add_option("--scale", scale, "generated data: shrink factor")->capture_default_str();
    comp->add_option("--noise-divisor", noise_divisor, "generated data: noise divisor")->capture_default_str();
    comp->add_option("-o,--out", out, "TSV (default stdout)");
    add_seed(comp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "hwt: " << e.what() << '\n';
        return 2;
    }

    try {
        const std::uint64_t s = seed ? *seed : default_seed();
        const auto crit = criterion_of(criterion);

        if (*cluster) {
            const auto d = hwt::build_hierarchy(load_data(input), crit);
            emit(out, [&](std::ostream& os) { hwt::write_dendrogram(os, d); });
        } else if (*haar) {
            const auto x = load_data(input);
            auto tin = open_in(input2);
            const auto d = hwt::read_dendrogram(tin);
            const auto h = hwt::forward(x, d);
            emit(out, [&](std::ostream& os) { hwt::write_decomposition(os, h); });
        } else if (*inv) {
            auto din = open_in(input);
            const auto x = hwt::inverse(hwt::read_decomposition(din));
            emit(out, [&](std::ostream& os) { hwt::write_csv(os, x); });
        } else if (*filter) {
            const auto r = hwt::smooth_pipeline(load_data(input), crit, threshold);
            emit(out, [&](std::ostream& os) { hwt::write_csv(os, r.reconstruction); });
            if (stats_path.empty()) {
                write_stats(std::cerr, r.stats);
            } else {
                emit(stats_path, [&](std::ostream& os) { write_stats(os, r.stats); });
            }
        } else if (*sweep) {
            const auto rows_out = hwt::threshold_sweep(load_data(input), crit, thresholds);
            emit(out, [&](std::ostream& os) { hwt::write_sweep_tsv(os, rows_out); });
        } else if (*cond) {
            const auto x = load_data(input);
            const auto c = hwt::condense(hwt::forward(x, hwt::build_hierarchy(x, crit)), tau);
            emit(out, [&](std::ostream& os) { hwt::write_condensed(os, c.hierarchy); });
            if (!bench_path.empty()) {
                const auto b = hwt::benchmark(c.hierarchy, x.values, s, restarts);
                emit(bench_path, [&](std::ostream& os) { hwt::write_benchmark_tsv(os, b); });
            }
        } else if (*ca) {
            auto in = open_in(input);
            auto data = hwt::read_csv(in);
            if (drop_zero) data = hwt::drop_zero_margins(data);
            hwt::FrequencyTable f(data);
            if (doubling) f = hwt::double_table(f);
            const auto coords = hwt::correspondence_analysis(f);
            emit(out, [&](std::ostream& os) { hwt::write_csv(os, coords.to_data()); });
        } else if (*gen) {
            hwt::DataMatrix x;
            if (dataset == "iris") {
                x = hwt::iris();
            } else if (dataset == "scalar-demo") {
                x = hwt::scalar_demo();
            } else if (dataset == "uniform") {
                x = hwt::uniform_matrix(rows, cols, lo, hi, s);
            } else {
                x = hwt::gaussian_grid(scale, noise_divisor, s);
            }
            emit(out, [&](std::ostream& os) { hwt::write_csv(os, x); });
            if (!raster_path.empty()) write_bytes(raster_path, hwt::encode_raster(x.values));
        } else if (*comp) {
            const auto x = input.empty() ? hwt::gaussian_grid(scale, noise_divisor, s) : load_data(input);
            const auto rows_out = hwt::compression_study(x, crit, thresholds, direct, s);
            emit(out, [&](std::ostream& os) { hwt::write_compression_tsv(os, rows_out); });
        }
    } catch (const UsageError& e) {
        std::cerr << "hwt: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hwt: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
