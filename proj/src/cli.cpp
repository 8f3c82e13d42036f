#include "gonio/cli.hpp"

#include "gonio/audio_ingest.hpp"
#include "gonio/errors.hpp"
#include "gonio/features.hpp"
#include "gonio/viz.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>

namespace gonio {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

bool is_wav(const fs::path& p)
{
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".wav" || ext == ".wave";
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s)
{
    std::size_t rows = 0, cols = 0;
    const auto x = s.find_first_of("xX");
    try {
        std::size_t used = 0;
        if (x == std::string::npos) {
            rows = cols = std::stoul(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
        } else {
            rows = std::stoul(s.substr(0, x), &used);
            if (used != x)
                throw std::invalid_argument(s);
            cols = std::stoul(s.substr(x + 1), &used);
            if (used != s.size() - x - 1)
                throw std::invalid_argument(s);
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected ROWSxCOLS or N, got '" + s + "'");
    }
    return {rows, cols};
}

std::string error_kind(const Error& e)
{
    if (dynamic_cast<const NotStereo*>(&e))
        return "NotStereo";
    if (dynamic_cast<const UnsupportedEncoding*>(&e))
        return "UnsupportedEncoding";
    if (dynamic_cast<const CorruptFile*>(&e))
        return "CorruptFile";
    if (dynamic_cast<const TooShort*>(&e))
        return "TooShort";
    if (dynamic_cast<const SchemaMismatch*>(&e))
        return "SchemaMismatch";
    if (dynamic_cast<const MalformedRow*>(&e))
        return "MalformedRow";
    if (dynamic_cast<const ZeroVariance*>(&e))
        return "ZeroVariance";
    if (dynamic_cast<const EmptyData*>(&e) || dynamic_cast<const EmptyInput*>(&e))
        return "EmptyInput";
    return "error";
}

struct ExtractArgs {
    std::vector<std::string> inputs;
    std::string out = ".";
};

struct SomArgs {
    std::string songs;
    std::string grid = "23x23";
    std::string out = "som_model.json";
};

struct PlotArgs {
    std::string input;
    std::string songs;
    std::string labels;
    std::string out;
    std::size_t frame = 0;
};

int cmd_extract(const ExtractArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto files = expand_inputs(a.inputs);
    if (files.empty()) {
        err << "extract: no WAV files found\n";
        return kExitUsage;
    }

    std::vector<std::optional<SongAnalysis>> results(files.size());
    std::vector<std::string> problems(files.size());
    const auto n = static_cast<std::ptrdiff_t>(files.size());
    // File-level fan-out; rows are collected by input index, so output order
    // never depends on completion order.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            results[k] = analyze_file(files[k], cfg);
        } catch (const Error& e) {
            problems[k] = error_kind(e) + ": " + e.what();
        } catch (const std::exception& e) {
            problems[k] = std::string("error: ") + e.what();
        }
    }

    FeatureTable frames = FeatureTable::per_frame();
    FeatureTable songs = FeatureTable::per_song();
    for (std::size_t k = 0; k < files.size(); ++k) {
        if (!results[k]) {
            err << files[k].string() << ": skipped (" << problems[k] << ")\n";
            continue;
        }
        auto& r = *results[k];
        frames.frames().insert(frames.frames().end(), r.frames.begin(), r.frames.end());
        songs.songs().push_back(std::move(r.song));
    }
    if (songs.size() == 0) {
        err << "extract: no file could be analyzed\n";
        return kExitUsage;
    }

    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_csv(dir / "frames.csv", frames);
    write_csv(dir / "songs.csv", songs);
    out << "analyzed " << songs.size() << " of " << files.size() << " files, " << frames.size()
        << " frames -> " << (dir / "frames.csv").string() << ", " << (dir / "songs.csv").string() << "\n";
    return kExitOk;
}

int cmd_som(const SomArgs& a, RunConfig cfg, std::ostream& out, std::ostream& err)
{
    const auto [rows, cols] = parse_grid(a.grid);
    cfg.som.grid_rows = rows;
    cfg.som.grid_cols = cols;
    cfg.som.validate();

    const FeatureTable table = read_csv(fs::path(a.songs), SchemaKind::PerSong);
    if (table.size() < 2) {
        err << "som: need at least 2 songs, got " << table.size() << "\n";
        return kExitUsage;
    }
    Dataset raw(2);
    for (const auto& s : table.songs()) {
        const double row[] = {s.mean_phase_scope, s.mean_channel_correlation};
        raw.push_back(row);
    }
    const Normalized norm = normalize(raw, {"mean_phase_scope", "mean_channel_correlation"});
    const SomModel initial = initialize(norm.data, cfg.som, norm.scaling);
    const SomModel model = train(initial, norm.data);
    save_model(fs::path(a.out), model);
    out << "initial quantization error " << quantization_error(initial, norm.data) << "\n";
    out << "final quantization error " << quantization_error(model, norm.data) << "\n";
    out << "model -> " << a.out << "\n";
    return kExitOk;
}

} // namespace

SongAnalysis analyze_file(const fs::path& path, const RunConfig& config)
{
    const AudioBuffer decoded = decode_wav(path);
    const AudioBuffer buf = resample(decoded, config.target_rate);
    const auto frames = extract_frames(buf, config.frames);
    const auto features = extract_features(frames);
    SongAnalysis r;
    r.frames = to_records(features, buf.source_id);
    r.song = aggregate(features, buf.source_id);
    return r;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& args)
{
    std::vector<fs::path> files;
    for (const auto& a : args) {
        const fs::path p(a);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && is_wav(entry.path()))
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Goniometer features for stereo music: extract, cluster, plot", "gonio"};
    app.require_subcommand(1);

    RunConfig cfg;
    PlotStyle style;
    auto add_frame_flags = [&](CLI::App* sub) {
        sub->add_option("--frame-len", cfg.frames.frame_len, "Samples per frame")
            ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
        sub->add_option("--max-frames", cfg.frames.max_frames, "Frames taken from the middle of each file")
            ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
        sub->add_option("--rate", cfg.target_rate, "Analysis sample rate in Hz")
            ->check(CLI::Range(std::uint32_t{1}, std::uint32_t{1} << 22));
    };
    auto add_style_flags = [&](CLI::App* sub) {
        sub->add_option("--width", style.width, "Image width in pixels");
        sub->add_option("--height", style.height, "Image height in pixels");
        sub->add_option("--colormap", style.color_map, "viridis or coolwarm");
    };

    ExtractArgs ex;
    auto* extract = app.add_subcommand("extract", "Per-frame and per-song goniometer features as CSV");
    extract->add_option("inputs", ex.inputs, "WAV files or directories")->required();
    add_frame_flags(extract);
    extract->add_option("--out", ex.out, "Output directory for frames.csv and songs.csv");

    SomArgs so;
    auto* som = app.add_subcommand("som", "Train a self-organizing map on per-song means");
    som->add_option("songs", so.songs, "Per-song CSV")->required();
    som->add_option("--grid", so.grid, "Grid size ROWSxCOLS");
    som->add_option("--iters", cfg.som.iterations, "Training passes over the data");
    som->add_option("--eta", cfg.som.learning_rate, "Learning rate");
    som->add_option("--nu", cfg.som.initial_neighborhood, "Initial neighbourhood width");
    som->add_option("--seed", cfg.som.rng_seed, "Random seed");
    som->add_option("--out", so.out, "Model file (JSON)");

    PlotArgs pa;
    auto* plot = app.add_subcommand("plot", "Render an SVG figure");
    plot->require_subcommand(1);

    auto* gonio = plot->add_subcommand("gonio", "Goniometer snapshot of one frame");
    gonio->add_option("wav", pa.input, "Stereo WAV file")->required();
    gonio->add_option("--frame", pa.frame, "Frame index within the analysis window");
    add_frame_flags(gonio);
    gonio->add_option("--out", pa.out, "SVG file")->required();
    add_style_flags(gonio);

    auto* scatter = plot->add_subcommand("scatter", "Mean correlation over mean phase scope");
    scatter->add_option("songs", pa.input, "Per-song CSV")->required();
    scatter->add_option("--labels", pa.labels, "Labels CSV (source_id,class)");
    scatter->add_option("--out", pa.out, "SVG file")->required();
    add_style_flags(scatter);

    auto* umatrix = plot->add_subcommand("umatrix", "U-matrix with songs at their best-matching units");
    umatrix->add_option("model", pa.input, "Model file")->required();
    umatrix->add_option("songs", pa.songs, "Per-song CSV to overlay");
    umatrix->add_option("--labels", pa.labels, "Labels CSV (source_id,class)");
    umatrix->add_option("--out", pa.out, "SVG file")->required();
    add_style_flags(umatrix);

    auto* components = plot->add_subcommand("components", "Component planes of a trained model");
    components->add_option("model", pa.input, "Model file")->required();
    components->add_option("--out", pa.out, "SVG file")->required();
    add_style_flags(components);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*extract)
            return cmd_extract(ex, cfg, out, err);
        if (*som)
            return cmd_som(so, cfg, out, err);

        LabelMap labels;
        if (!pa.labels.empty())
            labels = read_labels(fs::path(pa.labels));

        std::string doc;
        if (*gonio) {
            const AudioBuffer buf = resample(decode_wav(pa.input), cfg.target_rate);
            const auto frames = extract_frames(buf, cfg.frames);
            if (pa.frame >= frames.size()) {
                err << "plot gonio: frame " << pa.frame << " out of range (file has " << frames.size()
                    << " frames)\n";
                return kExitUsage;
            }
            const StereoFrame& f = frames[pa.frame];
            doc = plot_goniometer(f, frame_features(f), style);
        } else if (*scatter) {
            const auto table = read_csv(fs::path(pa.input), SchemaKind::PerSong);
            doc = plot_scatter(table.songs(), labels, style);
        } else if (*umatrix) {
            const SomModel model = load_model(pa.input);
            std::vector<SongFeatures> songs;
            if (!pa.songs.empty())
                songs = read_csv(fs::path(pa.songs), SchemaKind::PerSong).songs();
            doc = plot_umatrix(model, u_matrix(model), songs, labels, style);
        } else if (*components) {
            doc = plot_component_planes(load_model(pa.input), style);
        }
        write_text(pa.out, doc);
        out << "wrote " << pa.out << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << error_kind(e) << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace gonio
