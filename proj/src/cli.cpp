#include <lutgrid/cli.hpp>

#include <lutgrid/colorimetry.hpp>
#include <lutgrid/degrade.hpp>
#include <lutgrid/diagnostics.hpp>
#include <lutgrid/fusion.hpp>
#include <lutgrid/grid_io.hpp>
#include <lutgrid/lut3d.hpp>
#include <lutgrid/metrics.hpp>
#include <lutgrid/png_io.hpp>
#include <lutgrid/quantizer.hpp>
#include <lutgrid/trainer.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>

namespace lutgrid::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

struct SamplerFlags
{
    double beta = 10.0;
    double kappa = 3.0;
    double tau = 0.15;
    double sigma_s = 0.5;
    double sigma_r = 0.2;
    int segment_steps = 4;
    std::string sobel = "unit";

    void attach(CLI::App* app)
    {
        app->add_option("--beta", beta, "Edge uncertainty sharpness")->capture_default_str();
        app->add_option("--kappa", kappa, "Kernel elongation")->capture_default_str();
        app->add_option("--tau", tau, "Corner rejection threshold")->capture_default_str();
        app->add_option("--sigma-s", sigma_s, "Spatial-luma bandwidth (grid units)")->capture_default_str();
        app->add_option("--sigma-r", sigma_r, "Color bandwidth (LUT index units)")->capture_default_str();
        app->add_option("--segment-steps", segment_steps, "Segment test subdivisions")->capture_default_str();
        app->add_option("--sobel", sobel, "Sobel normalization")
            ->check(CLI::IsMember({"unit", "raw"}))
            ->capture_default_str();
    }

    SamplerParams params() const
    {
        SamplerParams p;
        p.edge.beta = float(beta);
        p.edge.scale = sobel == "raw" ? SobelScale::raw : SobelScale::unit;
        p.kappa = kappa;
        p.tau = tau;
        p.sigma_s = sigma_s;
        p.sigma_r = sigma_r;
        p.segment_steps = segment_steps;
        p.validate();
        return p;
    }
};

void add_threads(CLI::App* app, int& threads)
{
    app->add_option("--threads", threads, "Worker threads for pixel loops")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
}

void add_sampler(CLI::App* app, std::string& sampler)
{
    app->add_option("--sampler", sampler, "Sampler")
        ->check(CLI::IsMember({"trilinear", "manifold"}))
        ->capture_default_str();
}

LinearImage<float> load_linear(const std::string& path, int threads)
{
    return srgb_to_linear<float>(read_png(path), threads);
}

WeightGrid<float> load_weights(const std::string& path, bool quantized)
{
    auto stored = read_grid_file(path);
    if (auto* q = std::get_if<QuantizedGrid>(&stored)) {
        if (!quantized)
            throw InvalidInput("grid '" + path + "' is int8; pass --quantized");
        return dequantize_grid(*q);
    }
    if (quantized)
        throw InvalidInput("--quantized given but grid '" + path + "' is fp32");
    return std::get<WeightGrid<float>>(std::move(stored));
}

FusionModel<float> load_model(const std::string& grid, const std::string& lut, bool quantized,
                              const SamplerParams& params)
{
    return {load_weights(grid, quantized), read_cube(lut), params};
}

std::string fit_log_csv(const std::vector<FitLogRow>& log)
{
    std::string out = "epoch,lr,l1,color,tv,total,psnr,ssim\n";
    char buf[256];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.6f,%.6f\n", r.epoch, r.lr, r.loss.l1,
                      r.loss.color, r.loss.tv, r.loss.total, r.psnr, r.ssim);
        out += buf;
    }
    return out;
}

std::pair<int, int> parse_node(const std::string& text)
{
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos)
            throw std::invalid_argument(text);
        std::size_t used_i = 0, used_j = 0;
        const int i = std::stoi(text.substr(0, comma), &used_i);
        const std::string rest = text.substr(comma + 1);
        const int j = std::stoi(rest, &used_j);
        if (used_i != comma || used_j != rest.size())
            throw std::invalid_argument(text);
        return {i, j};
    } catch (const std::logic_error&) {
        throw InvalidInput("node '" + text + "' is not of the form i,j");
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bilateral-grid LUT fusion: enhancement, fitting and diagnostics", "lutgrid"};
    app.require_subcommand(1);
    app.fallthrough(false);

    // enhance
    auto* enhance_cmd = app.add_subcommand("enhance", "Enhance a PNG with a weight grid and LUT");
    std::string e_input, e_grid, e_lut, e_output, e_sampler = "manifold";
    bool e_quantized = false;
    int e_threads = 1;
    SamplerFlags e_flags;
    enhance_cmd->add_option("--input", e_input, "Input PNG")->required();
    enhance_cmd->add_option("--grid", e_grid, "BGW1 weight grid")->required();
    enhance_cmd->add_option("--lut", e_lut, ".cube LUT")->required();
    enhance_cmd->add_option("--output", e_output, "Output PNG")->required();
    add_sampler(enhance_cmd, e_sampler);
    enhance_cmd->add_flag("--quantized", e_quantized, "Grid is int8; dequantize before use");
    add_threads(enhance_cmd, e_threads);
    e_flags.attach(enhance_cmd);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a weight grid and LUT to a (degraded, target) pair");
    std::string f_degraded, f_target, f_out_grid, f_out_lut, f_log, f_sampler = "manifold";
    int f_epochs = 100, f_threads = 1, f_crop = 0, f_nx = 128, f_ny = 72, f_nl = 24, f_nc = 33;
    double f_lr = 1e-4, f_init = 0.5;
    std::uint64_t f_seed = 0;
    LossWeights f_weights;
    SamplerFlags f_flags;
    fit_cmd->add_option("--degraded", f_degraded, "Degraded input PNG")->required();
    fit_cmd->add_option("--target", f_target, "Target PNG")->required();
    fit_cmd->add_option("--out-grid", f_out_grid, "Fitted BGW1 grid")->required();
    fit_cmd->add_option("--out-lut", f_out_lut, "Fitted .cube LUT")->required();
    fit_cmd->add_option("--log", f_log, "Per-epoch CSV log");
    fit_cmd->add_option("--epochs", f_epochs, "Epochs")->check(CLI::NonNegativeNumber)->capture_default_str();
    fit_cmd->add_option("--lr", f_lr, "Initial learning rate (cosine annealed)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fit_cmd->add_option("--seed", f_seed, "Seed for crop placement")->capture_default_str();
    fit_cmd->add_option("--crop", f_crop, "Random square crop size, 0 = full image")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit_cmd->add_option("--nx", f_nx, "Grid nodes along x")->check(CLI::Range(2, 4096))->capture_default_str();
    fit_cmd->add_option("--ny", f_ny, "Grid nodes along y")->check(CLI::Range(2, 4096))->capture_default_str();
    fit_cmd->add_option("--nl", f_nl, "Luminance bins")->check(CLI::Range(2, 4096))->capture_default_str();
    fit_cmd->add_option("--nc", f_nc, "LUT size per axis")->check(CLI::Range(2, 256))->capture_default_str();
    fit_cmd->add_option("--init", f_init, "Initial grid weight")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    fit_cmd->add_option("--lambda-l1", f_weights.l1, "L1 loss weight")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit_cmd->add_option("--lambda-color", f_weights.color, "LAB color loss weight")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit_cmd->add_option("--lambda-tv", f_weights.tv, "TV loss weight")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit_cmd->add_option("--lambda-s", f_weights.tv_terms.spatial, "Spatial TV weight")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit_cmd->add_option("--lambda-l", f_weights.tv_terms.luma, "Luminance TV weight")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_sampler(fit_cmd, f_sampler);
    add_threads(fit_cmd, f_threads);
    f_flags.attach(fit_cmd);

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "Difference map and edge profile of both samplers");
    std::string c_input, c_grid, c_lut, c_out_diff, c_out_profile, c_out_edges;
    std::optional<int> c_scanline, c_column;
    bool c_quantized = false;
    int c_threads = 1;
    SamplerFlags c_flags;
    compare_cmd->add_option("--input", c_input, "Input PNG")->required();
    compare_cmd->add_option("--grid", c_grid, "BGW1 weight grid")->required();
    compare_cmd->add_option("--lut", c_lut, ".cube LUT")->required();
    auto* scan_opt = compare_cmd->add_option("--scanline", c_scanline, "Profile row (default: middle row)");
    compare_cmd->add_option("--column", c_column, "Profile column instead of a row")->excludes(scan_opt);
    compare_cmd->add_option("--out-diff", c_out_diff, "Difference map PNG");
    compare_cmd->add_option("--out-profile", c_out_profile, "Edge profile CSV");
    compare_cmd->add_option("--out-edges", c_out_edges, "Prefix for e/theta/u grayscale PNGs");
    compare_cmd->add_flag("--quantized", c_quantized, "Grid is int8; dequantize before use");
    add_threads(compare_cmd, c_threads);
    c_flags.attach(compare_cmd);

    // quantize
    auto* quantize_cmd = app.add_subcommand("quantize", "Convert an fp32 grid to int8");
    std::string q_input, q_output;
    quantize_cmd->add_option("--input", q_input, "fp32 BGW1 grid")->required();
    quantize_cmd->add_option("--output", q_output, "int8 BGW1 grid")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic (degraded, clean) pair");
    std::string s_fixture = "scene", s_clean, s_out_degraded, s_out_clean, s_sidecar, s_depth = "uniform";
    int s_width = 128, s_height = 128;
    FixtureParams s_fixture_params;
    HazeParams s_haze;
    std::vector<double> s_airlight{0.9};
    auto* fixture_opt = synth_cmd->add_option("--fixture", s_fixture, "Fixture kind")
                            ->check(CLI::IsMember({"step-edge", "ramp", "checker", "scene"}))
                            ->capture_default_str();
    synth_cmd->add_option("--clean", s_clean, "Use this PNG as the clean image")->excludes(fixture_opt);
    synth_cmd->add_option("--width", s_width, "Fixture width")->check(CLI::Range(8, 16384))->capture_default_str();
    synth_cmd->add_option("--height", s_height, "Fixture height")->check(CLI::Range(8, 16384))->capture_default_str();
    synth_cmd->add_option("--low", s_fixture_params.low, "Dark fixture level")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--high", s_fixture_params.high, "Light fixture level")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth_cmd->add_option("--tile", s_fixture_params.tile, "Checker tile size")->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--seed", s_fixture_params.seed, "Scene seed")->capture_default_str();
    synth_cmd->add_option("--beta-h", s_haze.beta_h, "Haze density")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--airlight", s_airlight, "Airlight, one gray value or three channels")
        ->expected(1, 3)
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--depth", s_depth, "Depth model")
        ->check(CLI::IsMember({"uniform", "ramp"}))
        ->capture_default_str();
    synth_cmd->add_option("--out-degraded", s_out_degraded, "Degraded PNG")->required();
    synth_cmd->add_option("--out-clean", s_out_clean, "Clean PNG")->required();
    synth_cmd->add_option("--sidecar", s_sidecar, "Parameter record (default: degraded path with .txt)");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "PSNR and SSIM between two PNGs");
    std::string m_a, m_b;
    bool m_linear = false;
    metrics_cmd->add_option("a", m_a, "First PNG")->required();
    metrics_cmd->add_option("b", m_b, "Second PNG")->required();
    metrics_cmd->add_flag("--linear", m_linear, "Compare in linear light instead of 8-bit sRGB");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Time repeated enhancement (decode to linear, enhance, encode)");
    std::string b_input, b_grid, b_lut, b_sampler = "manifold";
    int b_repeats = 5, b_threads = 1;
    bool b_quantized = false;
    SamplerFlags b_flags;
    bench_cmd->add_option("--input", b_input, "Input PNG")->required();
    bench_cmd->add_option("--grid", b_grid, "BGW1 weight grid")->required();
    bench_cmd->add_option("--lut", b_lut, ".cube LUT")->required();
    bench_cmd->add_option("--repeats", b_repeats, "Repetitions")->check(CLI::Range(1, 100000))->capture_default_str();
    bench_cmd->add_flag("--quantized", b_quantized, "Grid is int8; dequantize before use");
    add_sampler(bench_cmd, b_sampler);
    add_threads(bench_cmd, b_threads);
    b_flags.attach(bench_cmd);

    // inspect
    auto* inspect_cmd = app.add_subcommand("inspect", "Weight grid heatmaps, gradient maps and per-bin curves");
    std::string i_grid, i_heatmap, i_gradient, i_curves;
    std::vector<std::string> i_nodes;
    int i_bin = -1, i_scale = 8;
    inspect_cmd->add_option("--grid", i_grid, "BGW1 weight grid (fp32 or int8)")->required();
    inspect_cmd->add_option("--bin", i_bin, "Luminance bin (default: middle bin)");
    inspect_cmd->add_option("--scale", i_scale, "Pixels per node")->check(CLI::Range(1, 64))->capture_default_str();
    inspect_cmd->add_option("--out-heatmap", i_heatmap, "Weight heatmap PNG");
    inspect_cmd->add_option("--out-gradient", i_gradient, "Weight gradient magnitude PNG");
    inspect_cmd->add_option("--out-curves", i_curves, "Per-bin weight curves CSV");
    inspect_cmd->add_option("--node", i_nodes, "Node i,j for the curves CSV (repeatable)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (enhance_cmd->parsed()) {
            const auto model = load_model(e_grid, e_lut, e_quantized, e_flags.params());
            const auto image = load_linear(e_input, e_threads);
            const auto start = Clock::now();
            const auto result = enhance(model, image, parse_sampler(e_sampler), e_threads);
            const double ms = elapsed_ms(start);
            write_png(linear_to_srgb(result, e_threads), e_output);
            out << "enhance " << e_sampler << " " << image.width() << "x" << image.height() << ": "
                << fmt("%.3f", ms) << " ms\n";
            return 0;
        }

        if (fit_cmd->parsed()) {
            const auto degraded = load_linear(f_degraded, f_threads);
            const auto target = load_linear(f_target, f_threads);
            require_same_size(degraded.width(), degraded.height(), target.width(), target.height(),
                              "--degraded/--target");
            auto model = make_model<float>({f_nx, f_ny, f_nl}, f_nc, float(f_init), f_flags.params());
            FitOptions options;
            options.epochs = f_epochs;
            options.lr = f_lr;
            options.sampler = parse_sampler(f_sampler);
            options.weights = f_weights;
            options.threads = f_threads;
            options.seed = f_seed;
            options.crop = f_crop;
            const auto start = Clock::now();
            const auto result = fit(std::move(model), {{degraded, target}}, options);
            const double ms = elapsed_ms(start);
            write_grid(result.model.grid, f_out_grid);
            write_cube(result.model.lut, f_out_lut);
            if (!f_log.empty())
                write_file_atomic(f_log, fit_log_csv(result.log));
            const auto& first = result.log.front();
            const auto& last = result.log.back();
            out << "fit " << f_epochs << " epochs in " << fmt("%.1f", ms) << " ms: total " << fmt("%.6g", first.loss.total)
                << " -> " << fmt("%.6g", last.loss.total) << ", PSNR " << fmt("%.2f", first.psnr) << " -> "
                << fmt("%.2f", last.psnr) << " dB\n";
            return 0;
        }

        if (compare_cmd->parsed()) {
            const auto model = load_model(c_grid, c_lut, c_quantized, c_flags.params());
            const auto image = load_linear(c_input, c_threads);
            const ProfileAxis axis = c_column ? ProfileAxis::column : ProfileAxis::row;
            const int index = c_column ? *c_column : (c_scanline ? *c_scanline : image.height() / 2);
            const int limit = axis == ProfileAxis::row ? image.height() : image.width();
            if (index < 0 || index >= limit)
                throw InvalidInput(std::string(axis == ProfileAxis::row ? "--scanline " : "--column ") +
                                   std::to_string(index) + " outside [0, " + std::to_string(limit - 1) + "]");
            const auto tri = enhance(model, image, Sampler::trilinear, c_threads);
            const auto man = enhance(model, image, Sampler::manifold, c_threads);
            const Plane<float> diff = difference_plane(tri, man);
            if (!c_out_diff.empty())
                write_png(difference_map(tri, man), c_out_diff);
            if (!c_out_profile.empty())
                write_file_atomic(c_out_profile, edge_profile_csv(image, tri, man, axis, index));
            if (!c_out_edges.empty()) {
                const auto dumps = edge_dumps(compute_edge_field(image, model.params.edge, c_threads));
                write_png(dumps.magnitude, c_out_edges + "_e.png");
                write_png(dumps.theta, c_out_edges + "_theta.png");
                write_png(dumps.uncertainty, c_out_edges + "_u.png");
            }
            out << "max_diff=" << fmt("%.6g", diff.maxCoeff()) << " mean_diff=" << fmt("%.6g", diff.mean()) << "\n";
            return 0;
        }

        if (quantize_cmd->parsed()) {
            const auto grid = read_grid(q_input);
            const auto q = quantize_grid(grid);
            write_grid(q, q_output);
            out << "max_error=" << fmt("%.6g", max_quantization_error(grid, q)) << " scale=" << fmt("%.9g", q.scale)
                << " zero_point=" << q.zero_point << " payload_bytes=" << q.payload.size() << "\n";
            return 0;
        }

        if (synth_cmd->parsed()) {
            if (s_airlight.size() == 1)
                s_haze.airlight = Rgb<double>::Constant(s_airlight[0]);
            else if (s_airlight.size() == 3)
                s_haze.airlight = Rgb<double>(s_airlight[0], s_airlight[1], s_airlight[2]);
            else
                throw InvalidInput("--airlight takes one or three values");
            s_haze.depth = s_depth == "ramp" ? DepthMode::horizontal_ramp : DepthMode::uniform;
            s_haze.seed = s_fixture_params.seed;
            const bool from_file = !s_clean.empty();
            const LinearImage<float> clean =
                from_file ? load_linear(s_clean, 1)
                          : make_fixture<float>(parse_fixture_kind(s_fixture), s_width, s_height, s_fixture_params);
            const auto degraded = apply_haze(clean, s_haze);
            std::filesystem::path sidecar = s_sidecar;
            if (sidecar.empty())
                sidecar = std::filesystem::path(s_out_degraded).replace_extension(".txt");

            std::string record;
            record += "source=" + (from_file ? s_clean : "fixture:" + s_fixture) + "\n";
            record += "width=" + std::to_string(clean.width()) + "\nheight=" + std::to_string(clean.height()) + "\n";
            if (!from_file) {
                record += "low=" + fmt("%.6g", s_fixture_params.low) + "\nhigh=" + fmt("%.6g", s_fixture_params.high) +
                          "\ntile=" + std::to_string(s_fixture_params.tile) + "\n";
            }
            record += "seed=" + std::to_string(s_fixture_params.seed) + "\n";
            record += "beta_h=" + fmt("%.9g", s_haze.beta_h) + "\n";
            record += "airlight=" + fmt("%.6g", s_haze.airlight[0]) + "," + fmt("%.6g", s_haze.airlight[1]) + "," +
                      fmt("%.6g", s_haze.airlight[2]) + "\n";
            record += "depth=" + s_depth + "\n";

            write_png(linear_to_srgb(clean), s_out_clean);
            write_png(linear_to_srgb(degraded), s_out_degraded);
            write_file_atomic(sidecar, record);
            out << "wrote " << s_out_degraded << ", " << s_out_clean << ", " << sidecar.string() << "\n";
            return 0;
        }

        if (metrics_cmd->parsed()) {
            const auto a = read_png(m_a);
            const auto b = read_png(m_b);
            double p = 0.0, s = 0.0;
            if (m_linear) {
                const auto la = srgb_to_linear<float>(a);
                const auto lb = srgb_to_linear<float>(b);
                p = psnr(la, lb);
                s = ssim(la, lb);
            } else {
                p = psnr(a, b);
                s = ssim(a, b);
            }
            out << "PSNR=" << fmt("%.2f", p) << " SSIM=" << fmt("%.4f", s) << "\n";
            return 0;
        }

        if (bench_cmd->parsed()) {
            const auto model = load_model(b_grid, b_lut, b_quantized, b_flags.params());
            const auto srgb = read_png(b_input);
            const Sampler sampler = parse_sampler(b_sampler);
            std::vector<double> times;
            for (int r = 0; r < b_repeats; ++r) {
                const auto start = Clock::now();
                const auto result = linear_to_srgb(enhance(model, srgb_to_linear<float>(srgb, b_threads), sampler,
                                                           b_threads),
                                                   b_threads);
                times.push_back(elapsed_ms(start));
                out << "run " << (r + 1) << ": " << fmt("%.3f", times.back()) << " ms\n";
            }
            double sum = 0.0;
            for (double t : times)
                sum += t;
            const double mean = sum / double(times.size());
            const double best = *std::min_element(times.begin(), times.end());
            out << "mean_ms=" << fmt("%.3f", mean) << " min_ms=" << fmt("%.3f", best)
                << " fps=" << fmt("%.2f", 1000.0 / mean) << "\n";
            return 0;
        }

        if (inspect_cmd->parsed()) {
            auto stored = read_grid_file(i_grid);
            const WeightGrid<float> grid = std::holds_alternative<QuantizedGrid>(stored)
                                               ? dequantize_grid(std::get<QuantizedGrid>(stored))
                                               : std::get<WeightGrid<float>>(std::move(stored));
            const int bin = i_bin < 0 ? grid.dims().nl / 2 : i_bin;
            if (i_heatmap.empty() && i_gradient.empty() && i_curves.empty())
                throw InvalidInput("inspect: give at least one of --out-heatmap, --out-gradient, --out-curves");
            if (!i_heatmap.empty())
                write_png(weight_heatmap(grid, bin, i_scale), i_heatmap);
            if (!i_gradient.empty())
                write_png(weight_gradient_map(grid, bin, i_scale), i_gradient);
            if (!i_curves.empty()) {
                std::vector<std::pair<int, int>> nodes;
                for (const auto& n : i_nodes)
                    nodes.push_back(parse_node(n));
                if (nodes.empty())
                    nodes.push_back({grid.dims().nx / 2, grid.dims().ny / 2});
                write_file_atomic(i_curves, bin_curves_csv(grid, nodes));
            }
            const auto& v = grid.values();
            out << "grid " << grid.dims().nx << "x" << grid.dims().ny << "x" << grid.dims().nl << " min="
                << fmt("%.6g", v.minCoeff()) << " max=" << fmt("%.6g", v.maxCoeff()) << " mean="
                << fmt("%.6g", v.mean()) << "\n";
            return 0;
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace lutgrid::cli
