#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snnq/config.hpp"
#include "snnq/data.hpp"
#include "snnq/model_io.hpp"
#include "snnq/network.hpp"
#include "snnq/presets.hpp"
#include "snnq/serial.hpp"
#include "snnq/trainer.hpp"

namespace fs = std::filesystem;

namespace snnq::cli {
namespace {

// Everything any subcommand can set. Architecture and generator overrides use
// sentinels (0 for values that must be positive, NaN otherwise) meaning "keep
// the preset value". Precedence: built-in default < config file < flag.
struct Options {
    std::string config;
    std::string preset;  // resolved per subcommand when empty
    std::string data_dir;
    std::string out_dir = "out";
    std::string model;
    std::string out_path;
    std::string slice_policy = "count";
    std::string bits_list = "32,8,4,2,1";
    int bits = 32;
    long epochs = 500;
    double lr = 1e-3;
    long t_max = 64;
    long batch_size = 16;
    std::uint64_t seed = 0;
    double t0 = 1.0;
    double t_rate = 2.0;
    double test_fraction = 0.2;
    long threads = 0;
    double h = 1e-5;
    double threshold = 1e-3;

    long timesteps = 0;
    double tau = 0.0;
    double v_threshold = NAN;
    double v_reset = NAN;
    double surrogate_half_width = 0.0;
    double surrogate_leak = NAN;

    long classes = 0;
    long samples_per_class = 0;
    long events_per_sample = 0;
    double noise_rate = NAN;
    long sensor_width = 0;
    long sensor_height = 0;
};

std::string find_config_arg(const std::vector<std::string>& argv) {
    for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == "--config" && i + 1 < argv.size()) return argv[i + 1];
        if (argv[i].rfind("--config=", 0) == 0) return argv[i].substr(9);
    }
    return {};
}

void seed_from_config(Options& o) {
    ConfigMap cfg = load_config_file(o.config);
    o.preset = config_string(cfg, "preset", o.preset);
    o.data_dir = config_string(cfg, "data_dir", o.data_dir);
    o.out_dir = config_string(cfg, "out_dir", o.out_dir);
    o.slice_policy = config_string(cfg, "slice_policy", o.slice_policy);
    o.bits = static_cast<int>(config_long(cfg, "bits", o.bits));
    o.epochs = config_long(cfg, "epochs", o.epochs);
    o.lr = config_double(cfg, "lr", o.lr);
    o.t_max = config_long(cfg, "t_max", o.t_max);
    o.batch_size = config_long(cfg, "batch_size", o.batch_size);
    o.seed = static_cast<std::uint64_t>(config_long(cfg, "seed", static_cast<long>(o.seed)));
    o.t0 = config_double(cfg, "t0", o.t0);
    o.t_rate = config_double(cfg, "t_rate", o.t_rate);
    o.test_fraction = config_double(cfg, "test_fraction", o.test_fraction);
    o.threads = config_long(cfg, "threads", o.threads);
    o.timesteps = config_long(cfg, "timesteps", o.timesteps);
    o.tau = config_double(cfg, "tau", o.tau);
    o.v_threshold = config_double(cfg, "v_threshold", o.v_threshold);
    o.v_reset = config_double(cfg, "v_reset", o.v_reset);
    o.surrogate_half_width = config_double(cfg, "surrogate_half_width", o.surrogate_half_width);
    o.surrogate_leak = config_double(cfg, "surrogate_leak", o.surrogate_leak);
    o.classes = config_long(cfg, "classes", o.classes);
    o.samples_per_class = config_long(cfg, "samples_per_class", o.samples_per_class);
    o.events_per_sample = config_long(cfg, "events_per_sample", o.events_per_sample);
    o.noise_rate = config_double(cfg, "noise_rate", o.noise_rate);
    o.sensor_width = config_long(cfg, "sensor_width", o.sensor_width);
    o.sensor_height = config_long(cfg, "sensor_height", o.sensor_height);
}

std::string fmt_g(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

void print_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) std::cout << "config " << k << "=" << v << "\n";
}

std::string resolve_preset(const Options& o, const char* fallback) {
    return o.preset.empty() ? fallback : o.preset;
}

NetworkSpec make_spec(const Options& o, const std::string& preset) {
    NetworkSpec spec = preset_network(preset);
    if (o.timesteps > 0) spec.timesteps = static_cast<int>(o.timesteps);
    if (o.tau > 0.0) spec.lif_params.tau = o.tau;
    if (!std::isnan(o.v_threshold)) spec.lif_params.v_threshold = o.v_threshold;
    if (!std::isnan(o.v_reset)) spec.lif_params.v_reset = o.v_reset;
    if (o.surrogate_half_width > 0.0) spec.surrogate.half_width = o.surrogate_half_width;
    if (!std::isnan(o.surrogate_leak)) spec.surrogate.leak = o.surrogate_leak;
    return spec;
}

SyntheticSpec make_synth(const Options& o, const std::string& preset) {
    SyntheticSpec s = preset_synthetic(preset);
    if (o.classes > 0) s.n_classes = static_cast<int>(o.classes);
    if (o.samples_per_class > 0) s.samples_per_class = static_cast<int>(o.samples_per_class);
    if (o.events_per_sample > 0) s.events_per_sample = static_cast<int>(o.events_per_sample);
    if (!std::isnan(o.noise_rate)) s.noise_rate = o.noise_rate;
    if (o.sensor_width > 0) s.width = static_cast<int>(o.sensor_width);
    if (o.sensor_height > 0) s.height = static_cast<int>(o.sensor_height);
    return s;
}

SlicePolicy parse_policy(const std::string& s) {
    if (s == "count") return SlicePolicy::ByCount;
    if (s == "duration") return SlicePolicy::ByDuration;
    throw std::runtime_error("slice_policy must be \"count\" or \"duration\", got \"" + s + "\"");
}

std::vector<EventStream> load_event_dir(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".aers")
            paths.push_back(entry.path());
    if (paths.empty()) throw std::runtime_error("no .aers files in " + dir);
    std::sort(paths.begin(), paths.end());
    std::vector<EventStream> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(read_event_file(p.string()));
    return out;
}

// A data directory wins; otherwise the preset's synthetic generator runs with
// the same seed the caller trains with, so eval can regenerate a train set.
std::vector<EventStream> acquire_streams(const Options& o, const std::string& preset) {
    if (!o.data_dir.empty()) return load_event_dir(o.data_dir);
    return gen_synthetic(make_synth(o, preset), o.seed);
}

std::vector<FrameTensor> to_frames(const std::vector<EventStream>& streams, int t_slices,
                                   SlicePolicy policy) {
    std::vector<FrameTensor> out;
    out.reserve(streams.size());
    for (const auto& s : streams) out.push_back(events_to_frames(s, t_slices, policy));
    return out;
}

TrainConfig make_train_config(const Options& o, int bits) {
    TrainConfig cfg;
    cfg.epochs = static_cast<int>(o.epochs);
    cfg.lr0 = o.lr;
    cfg.t_max = static_cast<int>(o.t_max);
    cfg.batch_size = static_cast<int>(o.batch_size);
    cfg.seed = o.seed;
    cfg.bits = bits;
    cfg.t0 = o.t0;
    cfg.t_rate = o.t_rate;
    cfg.threads = static_cast<int>(o.threads);
    return cfg;
}

void print_epoch(const EpochRecord& r) {
    std::printf("epoch %d lr=%.6g temp=%.6g loss=%.6g train_acc=%.4f test_acc=%.4f\n", r.epoch,
                r.lr, r.temperature, r.train_loss, r.train_acc, r.test_acc);
    std::fflush(stdout);
}

int cmd_synth(const Options& o) {
    std::string preset = resolve_preset(o, "desk-tiny");
    SyntheticSpec spec = make_synth(o, preset);
    print_config({{"preset", preset},
                  {"classes", std::to_string(spec.n_classes)},
                  {"samples_per_class", std::to_string(spec.samples_per_class)},
                  {"sensor_width", std::to_string(spec.width)},
                  {"sensor_height", std::to_string(spec.height)},
                  {"events_per_sample", std::to_string(spec.events_per_sample)},
                  {"noise_rate", fmt_g(spec.noise_rate)},
                  {"seed", std::to_string(o.seed)},
                  {"out_dir", o.out_dir}});
    auto streams = gen_synthetic(spec, o.seed);
    fs::create_directories(o.out_dir);
    char name[64];
    for (std::size_t i = 0; i < streams.size(); ++i) {
        std::snprintf(name, sizeof name, "sample_%05zu_class%u.aers", i,
                      static_cast<unsigned>(streams[i].label));
        write_event_file(streams[i], (fs::path(o.out_dir) / name).string());
    }
    std::cout << "wrote " << streams.size() << " event files to " << o.out_dir << "\n";
    return 0;
}

int cmd_train(const Options& o) {
    std::string preset = resolve_preset(o, "desk-tiny");
    NetworkSpec spec = make_spec(o, preset);
    Network net = build_network(spec, o.seed, o.bits);
    TrainConfig cfg = make_train_config(o, o.bits);

    print_config({{"preset", preset},
                  {"bits", std::to_string(o.bits)},
                  {"epochs", std::to_string(cfg.epochs)},
                  {"lr", fmt_g(cfg.lr0)},
                  {"t_max", std::to_string(cfg.t_max)},
                  {"batch_size", std::to_string(cfg.batch_size)},
                  {"seed", std::to_string(cfg.seed)},
                  {"t0", fmt_g(cfg.t0)},
                  {"t_rate", fmt_g(cfg.t_rate)},
                  {"timesteps", std::to_string(spec.timesteps)},
                  {"tau", fmt_g(spec.lif_params.tau)},
                  {"v_threshold", fmt_g(spec.lif_params.v_threshold)},
                  {"v_reset", fmt_g(spec.lif_params.v_reset)},
                  {"surrogate_half_width", fmt_g(spec.surrogate.half_width)},
                  {"surrogate_leak", fmt_g(spec.surrogate.leak)},
                  {"test_fraction", fmt_g(o.test_fraction)},
                  {"slice_policy", o.slice_policy},
                  {"threads", std::to_string(cfg.threads)},
                  {"data", o.data_dir.empty() ? "<synthetic>" : o.data_dir},
                  {"out_dir", o.out_dir}});

    auto streams = acquire_streams(o, preset);
    auto frames = to_frames(streams, net.timesteps(), parse_policy(o.slice_policy));
    auto [train_set, test_set] = split(frames, o.test_fraction, o.seed);
    std::cout << "train samples " << train_set.size() << ", test samples " << test_set.size()
              << ", parameters " << net.param_count() << "\n";

    TrainHistory history = train(net, train_set, test_set, cfg, print_epoch);

    fs::create_directories(o.out_dir);
    std::string csv_path = (fs::path(o.out_dir) / "history.csv").string();
    std::string ckpt_path = (fs::path(o.out_dir) / "checkpoint.snnc").string();
    write_history_csv(history, csv_path);
    CheckpointMeta meta;
    meta.epoch = static_cast<std::uint32_t>(cfg.epochs);
    meta.temperature = history.records.back().temperature;
    meta.seed = cfg.seed;
    save_checkpoint(net, ckpt_path, meta);

    const EpochRecord& last = history.records.back();
    std::printf("final train_acc=%.4f test_acc=%.4f\n", last.train_acc, last.test_acc);
    std::cout << "wrote " << csv_path << " and " << ckpt_path << "\n";
    return 0;
}

int cmd_eval(const Options& o) {
    if (o.data_dir.empty() && o.preset.empty())
        throw std::runtime_error("eval needs --data or --preset to source samples");
    LoadedCheckpoint loaded = load_checkpoint(o.model);
    auto streams = acquire_streams(o, o.preset);
    auto frames = to_frames(streams, loaded.net.timesteps(), parse_policy(o.slice_policy));
    double acc = evaluate(loaded.net, frames, static_cast<int>(o.threads));
    std::printf("samples=%zu accuracy=%.6f\n", frames.size(), acc);
    return 0;
}

int cmd_export(const Options& o) {
    LoadedCheckpoint loaded = load_checkpoint(o.model);
    ExportSummary summary = export_quantized(loaded.net, o.out_path);
    std::printf("quantized_bytes=%llu full_bytes=%llu compression=%.4f\n",
                static_cast<unsigned long long>(summary.bytes),
                static_cast<unsigned long long>(model_size_bytes(loaded.net, 32)),
                summary.compression_ratio);
    std::cout << "wrote " << o.out_path << "\n";
    return 0;
}

int cmd_import_eval(const Options& o) {
    if (o.data_dir.empty() && o.preset.empty())
        throw std::runtime_error("import-eval needs --data or --preset to source samples");
    Network net = import_quantized(o.model);
    auto streams = acquire_streams(o, o.preset);
    auto frames = to_frames(streams, net.timesteps(), parse_policy(o.slice_policy));
    double acc = evaluate(net, frames, static_cast<int>(o.threads));
    std::printf("samples=%zu accuracy=%.6f\n", frames.size(), acc);
    return 0;
}

int cmd_gradcheck(const Options& o) {
    std::string preset = resolve_preset(o, "micro");
    NetworkSpec spec = make_spec(o, preset);
    Network net = build_network(spec, o.seed, o.bits);
    print_config({{"preset", preset},
                  {"bits", std::to_string(o.bits)},
                  {"seed", std::to_string(o.seed)},
                  {"h", fmt_g(o.h)},
                  {"threshold", fmt_g(o.threshold)}});

    SyntheticSpec ss = make_synth(o, preset);
    ss.samples_per_class = 1;
    auto streams = gen_synthetic(ss, o.seed);
    auto frames = to_frames(streams, net.timesteps(), parse_policy(o.slice_policy));

    GradcheckReport rep = gradcheck(net, frames.front(), o.h, o.threshold);
    std::printf("coordinates=%zu max_rel_err=%.3e worst=%s flips=%zu (%.4f%%)\n",
                rep.n_coordinates, rep.max_rel_err, rep.worst_coordinate.c_str(), rep.n_flipped,
                100.0 * rep.flip_fraction);
    std::cout << (rep.passed ? "PASS" : "FAIL") << "\n";
    return rep.passed ? 0 : 1;
}

std::vector<int> parse_bits_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::runtime_error("empty bits list");
    return out;
}

int cmd_sweep(const Options& o) {
    std::string preset = resolve_preset(o, "desk-tiny");
    std::vector<int> widths = parse_bits_list(o.bits_list);
    NetworkSpec spec = make_spec(o, preset);
    print_config({{"preset", preset},
                  {"bits_list", o.bits_list},
                  {"epochs", std::to_string(o.epochs)},
                  {"seed", std::to_string(o.seed)},
                  {"out_dir", o.out_dir}});

    auto streams = acquire_streams(o, preset);
    auto frames = to_frames(streams, spec.timesteps, parse_policy(o.slice_policy));
    auto [train_set, test_set] = split(frames, o.test_fraction, o.seed);
    fs::create_directories(o.out_dir);

    std::string csv = "bits,test_acc,bytes,compression\n";
    for (int bits : widths) {
        Network net = build_network(spec, o.seed, bits);
        TrainConfig cfg = make_train_config(o, bits);
        TrainHistory history = train(net, train_set, test_set, cfg, [bits](const EpochRecord& r) {
            std::printf("bits=%d ", bits);
            print_epoch(r);
        });
        write_history_csv(history,
                          (fs::path(o.out_dir) / ("history_" + std::to_string(bits) + ".csv"))
                              .string());

        std::uint64_t bytes = 0;
        double cr = 1.0;
        if (net.quantized()) {
            std::string model_path =
                (fs::path(o.out_dir) / ("model_" + std::to_string(bits) + ".snnq")).string();
            ExportSummary summary = export_quantized(net, model_path);
            bytes = summary.bytes;
            cr = summary.compression_ratio;
        } else {
            std::string model_path =
                (fs::path(o.out_dir) / ("model_" + std::to_string(bits) + ".snnc")).string();
            save_checkpoint(net, model_path);
            bytes = model_size_bytes(net, 32);
        }

        double acc = history.records.back().test_acc;
        char row[128];
        std::snprintf(row, sizeof row, "%d,%.12g,%llu,%.12g\n", bits, acc,
                      static_cast<unsigned long long>(bytes), cr);
        csv += row;
        std::printf("bits=%d test_acc=%.4f bytes=%llu compression=%.2f\n", bits, acc,
                    static_cast<unsigned long long>(bytes), cr);
    }
    std::string sweep_path = (fs::path(o.out_dir) / "sweep.csv").string();
    write_file_atomic(sweep_path, csv.data(), csv.size());
    std::cout << "wrote " << sweep_path << "\n";
    return 0;
}

void add_config_opt(CLI::App* c, Options& o) {
    c->add_option("--config", o.config, "key=value config file (flags take precedence)");
}

void add_arch_opts(CLI::App* c, Options& o, const char* preset_fallback) {
    c->add_option("--preset", o.preset,
                  std::string("architecture preset (default ") + preset_fallback + ")")
        ->check(CLI::IsMember(preset_names()));
    c->add_option("--timesteps", o.timesteps, "frames per sample (0 keeps the preset value)");
    c->add_option("--tau", o.tau, "membrane time constant (0 keeps the preset value)");
    c->add_option("--v-threshold", o.v_threshold, "firing threshold (preset value when unset)");
    c->add_option("--v-reset", o.v_reset, "reset potential (preset value when unset)");
    c->add_option("--surrogate-half-width", o.surrogate_half_width,
                  "surrogate window half width (0 keeps the preset value)");
    c->add_option("--surrogate-leak", o.surrogate_leak,
                  "surrogate leak slope (preset value when unset)");
}

void add_synth_opts(CLI::App* c, Options& o) {
    c->add_option("--classes", o.classes, "class count (0 keeps the preset value)");
    c->add_option("--samples-per-class", o.samples_per_class,
                  "samples per class (0 keeps the preset value)");
    c->add_option("--events-per-sample", o.events_per_sample,
                  "events per sample (0 keeps the preset value)");
    c->add_option("--noise-rate", o.noise_rate, "uniform noise fraction (preset value when unset)");
    c->add_option("--sensor-width", o.sensor_width, "sensor width (0 keeps the preset value)");
    c->add_option("--sensor-height", o.sensor_height, "sensor height (0 keeps the preset value)");
}

void add_data_opts(CLI::App* c, Options& o) {
    c->add_option("--data", o.data_dir, "directory of .aers event files (synthetic when absent)");
    c->add_option("--slice-policy", o.slice_policy, "event slicing: count or duration")
        ->check(CLI::IsMember({"count", "duration"}));
}

void add_train_opts(CLI::App* c, Options& o) {
    c->add_option("--bits", o.bits, "weight bit width: 1, 2, 4, 8 or 32")->capture_default_str();
    c->add_option("--epochs", o.epochs, "training epochs")->capture_default_str();
    c->add_option("--lr", o.lr, "initial learning rate")->capture_default_str();
    c->add_option("--t-max", o.t_max, "cosine decay horizon in epochs")->capture_default_str();
    c->add_option("--batch-size", o.batch_size, "mini-batch size")->capture_default_str();
    c->add_option("--t0", o.t0, "quantizer temperature intercept")->capture_default_str();
    c->add_option("--t-rate", o.t_rate, "quantizer temperature increase per epoch")
        ->capture_default_str();
    c->add_option("--test-fraction", o.test_fraction, "held-out fraction of the dataset")
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& argv) {
    Options o;

    std::string cfg_path = find_config_arg(argv);
    if (!cfg_path.empty()) {
        o.config = cfg_path;
        try {
            seed_from_config(o);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"event-driven spiking network training with quantized weights"};
    app.require_subcommand(1);

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic event dataset");
    add_config_opt(synth, o);
    synth->add_option("--preset", o.preset, "generator preset (default desk-tiny)")
        ->check(CLI::IsMember(preset_names()));
    add_synth_opts(synth, o);
    synth->add_option("--seed", o.seed, "generator seed")->capture_default_str();
    synth->add_option("--out", o.out_dir, "output directory")->capture_default_str();

    CLI::App* train_cmd = app.add_subcommand("train", "quantization-aware training run");
    add_config_opt(train_cmd, o);
    add_arch_opts(train_cmd, o, "desk-tiny");
    add_synth_opts(train_cmd, o);
    add_data_opts(train_cmd, o);
    add_train_opts(train_cmd, o);
    train_cmd->add_option("--seed", o.seed, "weights, shuffling and generator seed")
        ->capture_default_str();
    train_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    train_cmd->add_option("--out", o.out_dir, "output directory for checkpoint.snnc, history.csv")
        ->capture_default_str();

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    add_config_opt(eval_cmd, o);
    eval_cmd->add_option("--model", o.model, "checkpoint (.snnc)")->required();
    eval_cmd->add_option("--preset", o.preset, "generator preset when no --data is given")
        ->check(CLI::IsMember(preset_names()));
    add_synth_opts(eval_cmd, o);
    add_data_opts(eval_cmd, o);
    eval_cmd->add_option("--seed", o.seed, "generator seed")->capture_default_str();
    eval_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->capture_default_str();

    CLI::App* export_cmd = app.add_subcommand("export", "pack a checkpoint into level indices");
    add_config_opt(export_cmd, o);
    export_cmd->add_option("--model", o.model, "checkpoint (.snnc)")->required();
    export_cmd->add_option("--out", o.out_path, "output file (.snnq)")->required();

    CLI::App* import_cmd =
        app.add_subcommand("import-eval", "evaluate a packed model (.snnq)");
    add_config_opt(import_cmd, o);
    import_cmd->add_option("--model", o.model, "packed model (.snnq)")->required();
    import_cmd->add_option("--preset", o.preset, "generator preset when no --data is given")
        ->check(CLI::IsMember(preset_names()));
    add_synth_opts(import_cmd, o);
    add_data_opts(import_cmd, o);
    import_cmd->add_option("--seed", o.seed, "generator seed")->capture_default_str();
    import_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->capture_default_str();

    CLI::App* gradcheck_cmd =
        app.add_subcommand("gradcheck", "finite-difference check of the analytic gradients");
    add_config_opt(gradcheck_cmd, o);
    add_arch_opts(gradcheck_cmd, o, "micro");
    add_synth_opts(gradcheck_cmd, o);
    gradcheck_cmd->add_option("--bits", o.bits, "weight bit width")->capture_default_str();
    gradcheck_cmd->add_option("--seed", o.seed, "weights and sample seed")->capture_default_str();
    gradcheck_cmd->add_option("--fd-step", o.h, "finite-difference step")->capture_default_str();
    gradcheck_cmd->add_option("--threshold", o.threshold, "max relative error to pass")
        ->capture_default_str();
    gradcheck_cmd->add_option("--slice-policy", o.slice_policy, "event slicing: count or duration")
        ->check(CLI::IsMember({"count", "duration"}));

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep-bits", "train the same run across bit widths");
    add_config_opt(sweep_cmd, o);
    add_arch_opts(sweep_cmd, o, "desk-tiny");
    add_synth_opts(sweep_cmd, o);
    add_data_opts(sweep_cmd, o);
    add_train_opts(sweep_cmd, o);
    sweep_cmd->add_option("--bits-list", o.bits_list, "comma-separated widths to sweep")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", o.seed, "weights, shuffling and generator seed")
        ->capture_default_str();
    sweep_cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    sweep_cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();

    std::vector<const char*> cargs;
    cargs.reserve(argv.size());
    for (const auto& s : argv) cargs.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(o);
        if (train_cmd->parsed()) return cmd_train(o);
        if (eval_cmd->parsed()) return cmd_eval(o);
        if (export_cmd->parsed()) return cmd_export(o);
        if (import_cmd->parsed()) return cmd_import_eval(o);
        if (gradcheck_cmd->parsed()) return cmd_gradcheck(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 0; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace snnq::cli
