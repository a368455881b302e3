#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ambiroom/eval.hpp"
#include "ambiroom/processors.hpp"
#include "ambiroom/room.hpp"
#include "ambiroom/sh.hpp"
#include "ambiroom/synth_hrtf.hpp"
#include "ambiroom/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ambiroom;

namespace {

// Every config key must be declared here; anything else is rejected.
void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ConfigError("config: unknown key \"" + key + "\" in section \"" + section +
                              "\"");
    }
}

Vec3 parse_vec3(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("config: " + what + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

struct HrtfConfig {
    std::string path;       // empty selects the synthetic set
    std::string mode = "LS";
    double fc = 0.0;        // 0 selects the per-order default
    int sh_order = 3;
    int taps = 256;         // synthetic generator
    double resample_fs = 0.0;
};

struct ScenarioConfig {
    Scene scene;
    std::vector<std::string> source_wavs;  // empty string = no dry signal
    HrtfConfig hrtf;
    json rotation;  // raw, optional
    json eval_cfg;  // raw, optional
    json bench_cfg; // raw, optional
    json array_cfg;   // raw, optional
    json encoder_cfg; // raw, optional
};

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    check_keys(j, "(root)", {"room", "sources", "receiver", "hrtf", "array", "encoder",
                             "rotation", "eval", "bench"});
    ScenarioConfig cfg;
    if (!j.contains("room")) throw ConfigError("config: missing room section");
    const json& room = j["room"];
    check_keys(room, "room",
               {"dimensions", "absorption", "max_ism_order", "sh_order", "fs", "c",
                "frac_delay_taps"});
    cfg.scene.room.dimensions = parse_vec3(room.at("dimensions"), "room.dimensions");
    if (room.contains("absorption")) {
        const json& a = room["absorption"];
        if (a.is_array()) {
            if (a.size() != 6)
                throw ConfigError("config: absorption array must have 6 entries");
            for (int i = 0; i < 6; ++i) cfg.scene.room.absorption[i] = a[i].get<double>();
        } else {
            cfg.scene.room.set_uniform_absorption(a.get<double>());
        }
    }
    cfg.scene.room.max_ism_order = room.value("max_ism_order", 0);
    cfg.scene.room.fs = room.value("fs", 48000.0);
    cfg.scene.room.c = room.value("c", kDefaultSpeedOfSound);
    cfg.scene.sh_order = room.value("sh_order", 0);
    cfg.scene.frac_delay_taps = room.value("frac_delay_taps", 32);

    if (!j.contains("sources") || !j["sources"].is_array() || j["sources"].empty())
        throw ConfigError("config: at least one source required");
    for (const json& s : j["sources"]) {
        check_keys(s, "sources[]", {"position", "wav"});
        SceneSource src;
        src.position = parse_vec3(s.at("position"), "source position");
        std::string wav = s.value("wav", "");
        if (!wav.empty()) {
            const WavData w = read_wav(wav);
            if (w.channels.size() != 1)
                throw ConfigError("config: dry source WAV must be mono: " + wav);
            if (w.fs != cfg.scene.room.fs)
                throw ConfigError("config: dry source fs mismatch: " + wav);
            src.dry = w.channels[0];
        }
        cfg.source_wavs.push_back(wav);
        cfg.scene.sources.push_back(std::move(src));
    }
    if (!j.contains("receiver")) throw ConfigError("config: missing receiver");
    cfg.scene.receiver = parse_vec3(j["receiver"], "receiver");

    if (j.contains("hrtf")) {
        const json& h = j["hrtf"];
        check_keys(h, "hrtf", {"path", "mode", "fc", "sh_order", "taps", "resample_fs"});
        cfg.hrtf.path = h.value("path", "");
        cfg.hrtf.mode = h.value("mode", "LS");
        if (cfg.hrtf.mode != "LS" && cfg.hrtf.mode != "MAGLS")
            throw ConfigError("config: hrtf.mode must be LS or MAGLS");
        cfg.hrtf.fc = h.value("fc", 0.0);
        cfg.hrtf.sh_order = h.value("sh_order", cfg.scene.sh_order);
        cfg.hrtf.taps = h.value("taps", 256);
        cfg.hrtf.resample_fs = h.value("resample_fs", 0.0);
    } else {
        cfg.hrtf.sh_order = cfg.scene.sh_order;
    }
    if (j.contains("rotation")) {
        check_keys(j["rotation"], "rotation", {"alpha", "beta", "gamma", "frames"});
        cfg.rotation = j["rotation"];
    }
    if (j.contains("eval")) {
        check_keys(j["eval"], "eval",
                   {"orders", "reference_order", "f_lo", "f_hi", "smoothing"});
        cfg.eval_cfg = j["eval"];
    }
    if (j.contains("bench")) {
        check_keys(j["bench"], "bench",
                   {"suites", "sh_orders", "ism_orders", "source_counts", "rotation_frames"});
        cfg.bench_cfg = j["bench"];
    }
    if (j.contains("array")) {
        check_keys(j["array"], "array",
                   {"capsules", "radius", "sphere", "source_model", "sm_order", "mask"});
        cfg.array_cfg = j["array"];
    }
    if (j.contains("encoder")) {
        check_keys(j["encoder"], "encoder", {"type", "eps", "magls_pre"});
        cfg.encoder_cfg = j["encoder"];
    }
    cfg.scene.validate();
    return cfg;
}

HrtfSet load_or_synthesize(const ScenarioConfig& cfg) {
    HrtfSet set;
    if (!cfg.hrtf.path.empty()) {
        set = load_hrtf_file(cfg.hrtf.path);
    } else {
        SyntheticHrtfParams p;
        p.fs = cfg.scene.room.fs;
        p.taps = cfg.hrtf.taps;
        set = generate_synthetic_hrtf(analysis_grid(std::max(14, cfg.hrtf.sh_order + 1)), p);
    }
    if (cfg.hrtf.resample_fs > 0.0 && cfg.hrtf.resample_fs != set.fs)
        set = resample_hrtf(set, cfg.hrtf.resample_fs);
    if (set.fs != cfg.scene.room.fs)
        throw ConfigError("hrtf sample rate " + std::to_string(set.fs) +
                          " does not match the scene rate; set hrtf.resample_fs");
    return set;
}

ShHrtf make_sh_hrtf(const ScenarioConfig& cfg, const HrtfSet& set, int order, bool use_magls) {
    if (use_magls) {
        const double fc = cfg.hrtf.fc > 0.0 ? cfg.hrtf.fc : default_magls_fc(order);
        return magls(set, order, fc);
    }
    return project_ls(set, order);
}

void write_sidecar(const fs::path& wav_path, const SpatialSignal& sig,
                   const json& extra = {}) {
    json meta;
    meta["fs"] = sig.fs();
    meta["n_channels"] = sig.n_channels();
    meta["n_spatial"] = sig.n_spatial();
    meta["n_frames"] = sig.n_frames();
    meta["space_domain"] = sig.space_domain() == SpaceDomain::SH ? "SH" : "SPACE";
    if (sig.space_domain() == SpaceDomain::SH) {
        meta["sh_order"] = sig.sh_order();
        meta["sh_convention"] = "real, ACN ordering, N3D normalization, no Condon-Shortley";
    }
    meta["interleave"] = "spatial-major";
    meta["sample_format"] = "float32";
    meta["euler_convention"] = "intrinsic z-y-z";
    if (!extra.is_null()) meta["params"] = extra;
    fs::path p = wav_path;
    p.replace_extension(".json");
    std::ofstream f(p);
    f << meta.dump(2) << "\n";
}

ArraySpec parse_array_spec(const json& a, double fs) {
    ArraySpec spec;
    spec.capsule_dirs = capsule_layout(a.value("capsules", 32));
    spec.radius = a.value("radius", 0.042);
    spec.fs = fs;
    const std::string sphere = a.value("sphere", "rigid");
    if (sphere == "rigid") spec.sphere = SphereType::RIGID;
    else if (sphere == "open") spec.sphere = SphereType::OPEN;
    else throw ConfigError("config: array.sphere must be rigid or open");
    const std::string sm = a.value("source_model", "plane");
    if (sm == "plane") spec.source_model = SourceModel::PLANE_WAVE;
    else if (sm == "point") spec.source_model = SourceModel::POINT_SOURCE;
    else throw ConfigError("config: array.source_model must be plane or point");
    if (a.contains("sm_order")) spec.sm_order = a["sm_order"].get<int>();
    spec.mask_enabled = a.value("mask", true);
    spec.validate();
    return spec;
}

// Capsule simulation and SH re-encoding (or direct binaural via BSM) of an
// already-computed ambisonic signal, as one collapsed processor chain.
void run_array_chain(const ScenarioConfig& cfg, const SpatialSignal& amb,
                     const fs::path& out_dir) {
    const int order = amb.sh_order();
    ArraySpec spec = parse_array_spec(cfg.array_cfg, amb.fs());
    if (spec.sm_order == 0) spec.sm_order = order;
    const std::string type =
        cfg.encoder_cfg.is_null() ? "ASM" : cfg.encoder_cfg.value("type", "ASM");
    const double eps = cfg.encoder_cfg.is_null() ? -1.0 : cfg.encoder_cfg.value("eps", -1.0);

    auto decoder = std::make_shared<ArrayDecoder>(spec, order);
    std::shared_ptr<const Processor> encoder;
    fs::path p;
    if (type == "ASM") {
        encoder = std::make_shared<AsmEncoder>(spec, order, eps);
        p = out_dir / "amb_reencoded.wav";
    } else if (type == "BSM") {
        const bool magls_pre =
            cfg.encoder_cfg.is_null() ? false : cfg.encoder_cfg.value("magls_pre", false);
        ShHrtf sh = make_sh_hrtf(cfg, load_or_synthesize(cfg), order, false);
        encoder = std::make_shared<BsmRenderer>(spec, std::move(sh), eps, magls_pre,
                                                cfg.hrtf.fc);
        p = out_dir / "bsm_binaural.wav";
    } else {
        throw ConfigError("config: encoder.type must be ASM or BSM");
    }
    const ProcessorChain chain({decoder, encoder});
    const SpatialSignal out = chain.process(amb);
    write_wav(p.string(), out);
    json extra;
    extra["array"] = cfg.array_cfg;
    if (!cfg.encoder_cfg.is_null()) extra["encoder"] = cfg.encoder_cfg;
    write_sidecar(p, out, extra);
    std::cout << "wrote " << p.string() << "\n";
}

SpatialSignal simulate_signal(const ScenarioConfig& cfg) {
    bool have_dry = true;
    for (const auto& s : cfg.scene.sources)
        if (!s.dry) have_dry = false;
    return have_dry ? compute_amb(cfg.scene) : compute_arir(cfg.scene);
}

int cmd_simulate(const ScenarioConfig& cfg, const fs::path& out_dir, bool per_source) {
    const SpatialSignal sig = simulate_signal(cfg);
    json extra;
    extra["max_ism_order"] = cfg.scene.room.max_ism_order;
    extra["frac_delay_taps"] = cfg.scene.frac_delay_taps;
    if (per_source) {
        const SpatialSignal arir = compute_arir(cfg.scene);
        for (int c = 0; c < arir.n_channels(); ++c) {
            SpatialSignal one(1, arir.n_spatial(), arir.n_frames(), arir.fs(),
                              TimeDomain::TIME, SpaceDomain::SH);
            one.set_sh_order(arir.sh_order());
            for (int s = 0; s < arir.n_spatial(); ++s)
                one.set_real_frames(0, s, arir.real_frames(c, s));
            const fs::path p = out_dir / ("arir_src" + std::to_string(c) + ".wav");
            write_wav(p.string(), one);
            write_sidecar(p, one, extra);
        }
    }
    const fs::path p = out_dir / (sig.n_channels() == 1 &&
                                          !cfg.scene.sources[0].dry
                                      ? "arir.wav"
                                      : (cfg.scene.sources[0].dry ? "amb.wav" : "arir.wav"));
    write_wav(p.string(), sig);
    write_sidecar(p, sig, extra);
    std::cout << "wrote " << p.string() << " (" << sig.n_spatial() * sig.n_channels()
              << " wav channels)\n";
    if (!cfg.array_cfg.is_null()) run_array_chain(cfg, sig, out_dir);
    return 0;
}

int cmd_render(const ScenarioConfig& cfg, const fs::path& out_dir) {
    const HrtfSet set = load_or_synthesize(cfg);
    const int order = cfg.hrtf.sh_order;
    const ShHrtf sh = make_sh_hrtf(cfg, set, order, cfg.hrtf.mode == "MAGLS");
    const BinauralDecoder dec(sh);

    SpatialSignal amb = simulate_signal(cfg);
    if (amb.n_channels() > 1) {
        // ARIR per source without dry signals: sum the channels.
        SpatialSignal sum(1, amb.n_spatial(), amb.n_frames(), amb.fs(), TimeDomain::TIME,
                          SpaceDomain::SH);
        sum.set_sh_order(amb.sh_order());
        for (int c = 0; c < amb.n_channels(); ++c)
            for (int s = 0; s < amb.n_spatial(); ++s)
                for (std::size_t f = 0; f < amb.n_frames(); ++f)
                    sum.at(0, s, f) += amb.at(c, s, f);
        amb = sum;
    }
    const SpatialSignal binaural = dec.process(amb);
    const fs::path p = out_dir / "binaural.wav";
    write_wav(p.string(), binaural);
    json extra;
    extra["hrtf_mode"] = cfg.hrtf.mode;
    extra["hrtf_order"] = order;
    if (cfg.hrtf.mode == "MAGLS")
        extra["magls_fc"] = cfg.hrtf.fc > 0.0 ? cfg.hrtf.fc : default_magls_fc(order);
    write_sidecar(p, binaural, extra);
    std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_rotate(const ScenarioConfig& cfg, const fs::path& out_dir, bool cache_d) {
    SpatialSignal arir = compute_arir(cfg.scene);
    const double alpha = cfg.rotation.is_null() ? 0.0 : cfg.rotation.value("alpha", 0.0);
    const double beta = cfg.rotation.is_null() ? 0.0 : cfg.rotation.value("beta", 0.0);
    const double gamma = cfg.rotation.is_null() ? 0.0 : cfg.rotation.value("gamma", 0.0);
    const int frames = cfg.rotation.is_null() ? 0 : cfg.rotation.value("frames", 0);

    json extra;
    extra["alpha"] = alpha;
    extra["beta"] = beta;
    extra["gamma"] = gamma;
    extra["cache_d"] = cache_d;
    if (frames > 0) {
        // Frame sweep over a full azimuth turn; the ARIR is computed once.
        extra["frames"] = frames;
        if (cache_d) {
            for (int f = 0; f < frames; ++f) rotate_sh_azimuth(arir, kTwoPi / frames);
        } else {
            for (int f = 0; f < frames; ++f) {
                const WignerDMatrix d =
                    wigner_d_matrix(cfg.scene.sh_order, kTwoPi / frames, 0.0, 0.0);
                rotate_sh(arir, d);
            }
        }
    } else if (alpha != 0.0 || beta != 0.0 || gamma != 0.0) {
        const WignerDMatrix d = wigner_d_matrix(cfg.scene.sh_order, alpha, beta, gamma);
        rotate_sh(arir, d);
    }
    const fs::path p = out_dir / "arir_rotated.wav";
    write_wav(p.string(), arir);
    write_sidecar(p, arir, extra);
    std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_eval(const ScenarioConfig& cfg, const fs::path& out_dir) {
    if (cfg.eval_cfg.is_null())
        throw ConfigError("eval: config needs an eval section with a reference spec");
    const int ref_order = cfg.eval_cfg.value("reference_order", 0);
    if (ref_order <= 0) throw ConfigError("eval: reference_order required");
    std::vector<int> orders = {1, 3, 5, 7, 9};
    if (cfg.eval_cfg.contains("orders")) orders = cfg.eval_cfg["orders"].get<std::vector<int>>();
    const double f_lo = cfg.eval_cfg.value("f_lo", 200.0);
    const double f_hi = cfg.eval_cfg.value("f_hi", 20000.0);
    const double frac = cfg.eval_cfg.value("smoothing", 1.0 / 6.0);

    const HrtfSet set = load_or_synthesize(cfg);
    // The ARIR is recomputed at each order, as in the source experiment.
    const auto render = [&](const ShHrtf& sh) {
        Scene scene = cfg.scene;
        scene.sh_order = sh.order;
        const BinauralDecoder dec(sh);
        const SpatialSignal out = dec.process(compute_arir(scene));
        return std::array<std::vector<double>, 2>{out.real_frames(0, 0),
                                                  out.real_frames(0, 1)};
    };
    const auto ref = render(project_ls(set, ref_order));

    const fs::path p = out_dir / "lsd.csv";
    std::ofstream csv(p);
    csv << "order,channels,mode,lsd_left_db,lsd_right_db,lsd_avg_db\n";
    for (int n : orders) {
        for (const bool use_magls : {false, true}) {
            const auto h = render(make_sh_hrtf(cfg, set, n, use_magls));
            const LsdReport r = lsd(h, ref, cfg.scene.room.fs, f_lo, f_hi, frac);
            csv << n << ',' << sh_channel_count(n) << ',' << (use_magls ? "MAGLS" : "LS")
                << ',' << r.lsd_left << ',' << r.lsd_right << ',' << r.lsd_avg << '\n';
        }
    }
    std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_bench(const ScenarioConfig* cfg, const fs::path& out_dir, int trials,
              unsigned seed, int threads) {
    BenchConfig bc;
    bc.trials = trials;
    bc.seed = seed;
    bc.threads = threads;
    std::vector<std::string> suites = {"SH_ORDER", "ISM_ORDER", "SOURCES", "ROTATION"};
    if (cfg && !cfg->bench_cfg.is_null()) {
        const json& b = cfg->bench_cfg;
        if (b.contains("suites")) suites = b["suites"].get<std::vector<std::string>>();
        if (b.contains("sh_orders")) bc.sh_orders = b["sh_orders"].get<std::vector<int>>();
        if (b.contains("ism_orders")) bc.ism_orders = b["ism_orders"].get<std::vector<int>>();
        if (b.contains("source_counts"))
            bc.source_counts = b["source_counts"].get<std::vector<int>>();
        if (b.contains("rotation_frames")) bc.rotation_frames = b["rotation_frames"];
    }
    for (const std::string& name : suites) {
        BenchSuite suite;
        if (name == "SH_ORDER") suite = BenchSuite::SH_ORDER;
        else if (name == "ISM_ORDER") suite = BenchSuite::ISM_ORDER;
        else if (name == "SOURCES") suite = BenchSuite::SOURCES;
        else if (name == "ROTATION") suite = BenchSuite::ROTATION;
        else throw ConfigError("bench: unknown suite " + name);
        const auto rows = run_bench(suite, bc);
        fs::path p = out_dir / ("bench_" + name + ".csv");
        std::ofstream csv(p);
        write_bench_csv(csv, rows);
        std::cout << "wrote " << p.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Room-acoustics simulation and binaural rendering"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    bool per_source = false, cache_d = false;
    int trials = 10, threads = 1;
    unsigned seed = 1;
    app.add_option("--config", config_path, "Scenario config (JSON)");
    app.add_option("--out-dir", out_dir, "Output directory");
    app.add_flag("--per-source", per_source, "Write one ARIR per source");
    app.add_flag("--cache-d", cache_d, "Reuse the rotation matrix across frames");
    app.add_option("--trials", trials, "Timed trials per benchmark cell");
    app.add_option("--threads", threads, "Worker threads");
    app.add_option("--seed", seed, "Deterministic seed");

    auto* sim = app.add_subcommand("simulate", "Compute the Ambisonic room response");
    auto* ren = app.add_subcommand("render", "Binaural render via an SH-domain HRTF");
    auto* rot = app.add_subcommand("rotate", "Apply a Wigner-D rotation to the ARIR");
    auto* evl = app.add_subcommand("eval", "LSD evaluation against a reference render");
    auto* ben = app.add_subcommand("bench", "Scaling and rotation benchmark suites");
    for (CLI::App* sub : {sim, ren, rot, evl, ben}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        ScenarioConfig cfg;
        const bool need_config = !app.got_subcommand(ben) || !config_path.empty();
        if (need_config) {
            if (config_path.empty()) throw ConfigError("--config is required");
            cfg = parse_config(config_path);
        }
        if (app.got_subcommand(sim)) return cmd_simulate(cfg, out_dir, per_source);
        if (app.got_subcommand(ren)) return cmd_render(cfg, out_dir);
        if (app.got_subcommand(rot)) return cmd_rotate(cfg, out_dir, cache_d);
        if (app.got_subcommand(evl)) return cmd_eval(cfg, out_dir);
        if (app.got_subcommand(ben))
            return cmd_bench(config_path.empty() ? nullptr : &cfg, out_dir, trials, seed,
                             threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
