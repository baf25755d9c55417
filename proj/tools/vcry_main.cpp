#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <termios.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "vcry/audio.hpp"
#include "vcry/channel.hpp"
#include "vcry/cipher.hpp"
#include "vcry/errors.hpp"
#include "vcry/features.hpp"
#include "vcry/identify.hpp"
#include "vcry/keys.hpp"
#include "vcry/pitch.hpp"

namespace {

using vcry::Err;

// Shortest round-trip decimal form, independent of the process locale.
std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string prompt_password() {
    if (!isatty(STDIN_FILENO)) {
        std::string line;
        std::getline(std::cin, line);
        return line;
    }
    std::cerr << "password: " << std::flush;
    termios saved = {};
    tcgetattr(STDIN_FILENO, &saved);
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
    std::string line;
    std::getline(std::cin, line);
    tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cerr << '\n';
    return line;
}

struct PipelineConfig {
    vcry::FrameConfig frame;
    vcry::ChannelConfig channel;
};

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::vector<std::string>& known,
                         const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            vcry::fail(Err::BadFormat, "config: unknown key " + section + "." + key);
    }
}

void apply_frame_json(const nlohmann::json& j, vcry::FrameConfig& f) {
    reject_unknown_keys(j,
                        {"frame_len", "max_lag", "hop", "window", "clip_ratio",
                         "f_min", "f_max", "epsilon", "voicing_ratio_threshold",
                         "energy_floor"},
                        "frame");
    f.frame_len = j.value("frame_len", static_cast<std::int64_t>(f.frame_len));
    f.max_lag = j.value("max_lag", static_cast<std::int64_t>(f.max_lag));
    f.hop = j.value("hop", static_cast<std::int64_t>(f.hop));
    if (j.contains("window")) {
        const std::string w = j.at("window").get<std::string>();
        if (w == "rectangular")
            f.window = vcry::Window::rectangular;
        else if (w == "hamming")
            f.window = vcry::Window::hamming;
        else
            vcry::fail(Err::BadFormat, "config: unknown window " + w);
    }
    f.clip_ratio = j.value("clip_ratio", f.clip_ratio);
    f.f_min = j.value("f_min", f.f_min);
    f.f_max = j.value("f_max", f.f_max);
    f.epsilon = j.value("epsilon", f.epsilon);
    f.voicing_ratio_threshold =
        j.value("voicing_ratio_threshold", f.voicing_ratio_threshold);
    f.energy_floor = j.value("energy_floor", f.energy_floor);
}

void apply_channel_json(const nlohmann::json& j, vcry::ChannelConfig& c) {
    reject_unknown_keys(j, {"snr_db", "seed", "gain", "noiseless"}, "channel");
    c.snr_db = j.value("snr_db", c.snr_db);
    c.seed = j.value("seed", c.seed);
    c.gain = j.value("gain", c.gain);
    c.noiseless = j.value("noiseless", c.noiseless);
}

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty())
        return cfg;
    std::ifstream is(path);
    if (!is)
        vcry::fail(Err::IoFailure, "cannot open config: " + path);
    nlohmann::json doc;
    try {
        is >> doc;
    } catch (const nlohmann::json::exception& e) {
        vcry::fail(Err::BadFormat, "config is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object())
        vcry::fail(Err::BadFormat, "config root must be an object");
    reject_unknown_keys(doc, {"frame", "channel"}, "config");
    try {
        if (doc.contains("frame"))
            apply_frame_json(doc.at("frame"), cfg.frame);
        if (doc.contains("channel"))
            apply_channel_json(doc.at("channel"), cfg.channel);
    } catch (const nlohmann::json::exception& e) {
        vcry::fail(Err::BadFormat, "config: " + std::string(e.what()));
    }
    return cfg;
}

struct Report {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string render_report(const Report& report, const std::string& format) {
    if (report.rows.empty())
        vcry::fail(Err::EmptyTable, "no rows to report");
    const char sep = format == "tsv" ? '\t' : ',';
    std::ostringstream os;
    for (std::size_t i = 0; i < report.header.size(); ++i)
        os << (i ? std::string(1, sep) : "") << report.header[i];
    os << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? std::string(1, sep) : "") << row[i];
        os << '\n';
    }
    return os.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream os(out_path);
    if (!os)
        vcry::fail(Err::IoFailure, "cannot open for writing: " + out_path);
    os << text;
    os.flush();
    if (!os)
        vcry::fail(Err::IoFailure, "write failed: " + out_path);
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream is(csv);
    while (std::getline(is, item, ','))
        items.push_back(item);
    return items;
}

std::vector<double> parse_snr_list(const std::string& csv) {
    std::vector<double> values;
    for (const std::string& tok : split_list(csv)) {
        if (tok == "inf" || tok == "+inf") {
            values.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            values.push_back(v);
        } catch (const std::exception&) {
            vcry::fail(Err::BadFormat, "bad SNR value: '" + tok + "'");
        }
    }
    if (values.empty())
        vcry::fail(Err::BadFormat, "empty SNR list");
    return values;
}

std::vector<vcry::Method> parse_method_list(const std::string& csv) {
    std::vector<vcry::Method> methods;
    for (const std::string& tok : split_list(csv))
        methods.push_back(vcry::parse_method(tok));
    if (methods.empty())
        vcry::fail(Err::BadFormat, "empty method list");
    return methods;
}

vcry::KeyPair keys_from(const std::string& password_flag) {
    const std::string text =
        password_flag.empty() ? prompt_password() : password_flag;
    return vcry::derive_keys(text);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encrypted voice-template toolkit: password-derived template "
                 "encryption, channel simulation, pitch analysis, and "
                 "closed-set speaker identification"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string password;
    std::string in_path;
    std::string out_path;
    std::string csv_path;
    std::string db_dir;
    std::string test_dir;
    std::string speaker;
    std::string method_name_flag = "pitch";
    std::string methods_csv = "pitch,stats,lpc,zcr,fft";
    std::string snr_csv = "16,17,18,19,20";
    std::string config_path;
    std::string format = "csv";
    bool show_digits = false;
    bool raw_distance = false;
    double gain = 1.0;
    double snr_db = 20.0;
    std::uint64_t seed0 = 1;
    int trials = 20;
    int rate = vcry::kWorkingRate;
    int top = 0;

    const auto add_config = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "JSON file with frame/channel parameter overrides");
    };

    // keygen -----------------------------------------------------------
    auto* keygen = app.add_subcommand("keygen", "Derive the two PRNG keys from a password");
    keygen->add_option("--password", password, "8-character password");
    keygen->add_flag("--show-digits", show_digits, "also print the intermediate digit arrays");
    keygen->callback([&] {
        const std::string text = password.empty() ? prompt_password() : password;
        if (show_digits) {
            vcry::validate_password(text);
            const std::vector<int> ascii = vcry::ascii_encode(text);
            const std::vector<int> shifted = vcry::caesar_shift(ascii);
            std::cout << "ascii";
            for (const int v : ascii)
                std::cout << ' ' << v;
            std::cout << "\nshifted";
            for (const int v : shifted)
                std::cout << ' ' << v;
            std::cout << '\n';
            const vcry::KeyPair keys = vcry::concat_and_split(shifted);
            std::cout << "z " << keys.key1_digits << keys.key2_digits << '\n';
            std::cout << "key1 " << keys.key1_digits << '\n'
                      << "key2 " << keys.key2_digits << '\n';
        } else {
            const vcry::KeyPair keys = vcry::derive_keys(text);
            std::cout << "key1 " << keys.key1_digits << '\n'
                      << "key2 " << keys.key2_digits << '\n';
        }
    });

    // encrypt ----------------------------------------------------------
    auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a WAV into a template container");
    encrypt_cmd->add_option("--in", in_path, "input WAV")->required();
    encrypt_cmd->add_option("--out", out_path, "output .vcr container")->required();
    encrypt_cmd->add_option("--password", password, "8-character password");
    auto* encrypt_gain = encrypt_cmd->add_option("--gain", gain, "transmission gain (default 1)");
    add_config(encrypt_cmd);
    encrypt_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const double g = encrypt_gain->count() ? gain : cfg.channel.gain;
        const vcry::KeyPair keys = keys_from(password);
        const vcry::Signal s = vcry::read_wav(in_path);
        vcry::write_vcr(out_path, vcry::encrypt(s, keys, g));
        std::cerr << "wrote " << out_path << " (" << s.samples.size()
                  << " coefficients)\n";
    });

    // decrypt ----------------------------------------------------------
    auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a template container back to WAV");
    decrypt_cmd->add_option("--in", in_path, "input .vcr container")->required();
    decrypt_cmd->add_option("--out", out_path, "output WAV")->required();
    decrypt_cmd->add_option("--password", password, "8-character password");
    decrypt_cmd->add_option("--rate", rate,
                            "sample rate of the decoded audio (the container "
                            "stores none; default 10000)");
    decrypt_cmd->callback([&] {
        const vcry::KeyPair keys = keys_from(password);
        const vcry::CipherText c = vcry::read_vcr(in_path);
        vcry::write_wav(vcry::decrypt(c, keys, rate), out_path);
        std::cerr << "wrote " << out_path << '\n';
    });

    // channel ----------------------------------------------------------
    auto* channel_cmd = app.add_subcommand("channel", "Pass a container through an AWGN channel");
    channel_cmd->add_option("--in", in_path, "input .vcr container")->required();
    channel_cmd->add_option("--out", out_path, "output .vcr container")->required();
    auto* channel_snr = channel_cmd->add_option("--snr-db", snr_db, "target SNR in dB (default 20)");
    auto* channel_seed = channel_cmd->add_option("--seed", seed0, "channel noise seed (default 1)");
    add_config(channel_cmd);
    channel_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        vcry::ChannelConfig ch = cfg.channel;
        if (channel_snr->count())
            ch.snr_db = snr_db;
        if (channel_seed->count())
            ch.seed = seed0;
        vcry::CipherText c = vcry::read_vcr(in_path);
        if (!ch.noiseless)
            c.coefficients = vcry::awgn(c.coefficients, ch.snr_db, ch.seed);
        vcry::write_vcr(out_path, c);
        std::cerr << "wrote " << out_path << '\n';
    });

    // pitch ------------------------------------------------------------
    auto* pitch_cmd = app.add_subcommand("pitch", "Per-frame pitch track of a WAV");
    pitch_cmd->add_option("--in", in_path, "input WAV")->required();
    pitch_cmd->add_option("--csv", csv_path, "write the track here instead of stdout");
    add_config(pitch_cmd);
    pitch_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const vcry::PitchTrack track =
            vcry::extract_pitch(vcry::read_wav(in_path), cfg.frame);
        Report report;
        report.header = {"frame_start_sample", "voiced", "f0_hz", "confidence"};
        for (const vcry::FramePitch& fp : track.frames)
            report.rows.push_back({std::to_string(fp.start_sample),
                                   fp.voiced ? "1" : "0",
                                   fp.f0 ? fmt_double(*fp.f0) : "",
                                   fmt_double(fp.confidence)});
        write_output(csv_path, render_report(report, "csv"));
    });

    // features ---------------------------------------------------------
    auto* features_cmd = app.add_subcommand("features", "Feature vector of a WAV under one method");
    features_cmd->add_option("--in", in_path, "input WAV")->required();
    features_cmd
        ->add_option("--method", method_name_flag, "pitch|stats|lpc|zcr|fft")
        ->required()
        ->check(CLI::IsMember({"pitch", "stats", "lpc", "zcr", "fft"}));
    add_config(features_cmd);
    features_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const vcry::FeatureVector fv = vcry::extract_features(
            vcry::read_wav(in_path), vcry::parse_method(method_name_flag), cfg.frame);
        std::ostringstream os;
        for (Eigen::Index i = 0; i < fv.values.size(); ++i)
            os << (i ? "," : "") << fmt_double(fv.values[i]);
        os << '\n';
        std::cout << os.str() << std::flush;
    });

    // enroll -----------------------------------------------------------
    auto* enroll_cmd = app.add_subcommand("enroll", "Encrypt a sample into the template store");
    enroll_cmd->add_option("--db", db_dir, "template store directory")->required();
    enroll_cmd->add_option("--speaker", speaker, "speaker id")->required();
    enroll_cmd->add_option("--in", in_path, "input WAV")->required();
    enroll_cmd->add_option("--password", password, "8-character password");
    auto* enroll_gain = enroll_cmd->add_option("--gain", gain, "transmission gain (default 1)");
    add_config(enroll_cmd);
    enroll_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const double g = enroll_gain->count() ? gain : cfg.channel.gain;
        const vcry::KeyPair keys = keys_from(password);
        vcry::TemplateDB db = vcry::TemplateDB::open(db_dir);
        const vcry::TemplateEntry& entry =
            db.enroll(speaker, vcry::read_wav(in_path), keys, g, cfg.frame);
        std::cout << entry.template_id << '\n';
    });

    // identify ---------------------------------------------------------
    auto* identify_cmd = app.add_subcommand("identify", "Rank enrolled speakers for a test sample");
    identify_cmd->add_option("--db", db_dir, "template store directory")->required();
    identify_cmd->add_option("--in", in_path, "test sample (WAV, or .vcr with --password)")->required();
    identify_cmd->add_option("--password", password, "password when the input is a .vcr container");
    identify_cmd
        ->add_option("--method", method_name_flag, "pitch|stats|lpc|zcr|fft (default pitch)")
        ->check(CLI::IsMember({"pitch", "stats", "lpc", "zcr", "fft"}));
    identify_cmd->add_option("--top", top, "print only the closest K templates (default all)");
    identify_cmd->add_option("--rate", rate, "sample rate for .vcr input (default 10000)");
    identify_cmd->add_flag("--raw", raw_distance, "skip z-score normalization");
    add_config(identify_cmd);
    identify_cmd->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        vcry::Signal probe;
        if (ends_with(in_path, ".vcr"))
            probe = vcry::decrypt(vcry::read_vcr(in_path), keys_from(password), rate);
        else
            probe = vcry::read_wav(in_path);
        const vcry::TemplateDB db = vcry::TemplateDB::open(db_dir);
        const vcry::RankedResult result = db.identify(
            probe, vcry::parse_method(method_name_flag), !raw_distance, cfg.frame);
        std::cout << "decision," << result.decision << '\n';
        Report report;
        report.header = {"rank", "speaker_id", "template_id", "distance"};
        const std::size_t limit =
            top > 0 ? std::min<std::size_t>(result.ranking.size(), static_cast<std::size_t>(top))
                    : result.ranking.size();
        for (std::size_t i = 0; i < limit; ++i)
            report.rows.push_back({std::to_string(i + 1),
                                   result.ranking[i].speaker_id,
                                   result.ranking[i].template_id,
                                   fmt_double(result.ranking[i].distance)});
        std::cout << render_report(report, "csv") << std::flush;
    });

    // bench ------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Benchmark tables");
    bench->require_subcommand(1);

    auto* bench_mse = bench->add_subcommand("mse", "Reconstruction MSE across an SNR sweep");
    bench_mse->add_option("--in", in_path, "input WAV")->required();
    bench_mse->add_option("--password", password, "8-character password");
    bench_mse->add_option("--snr-list", snr_csv, "comma list of SNR values in dB");
    bench_mse->add_option("--trials", trials, "channel draws per SNR (default 20)");
    auto* mse_seed = bench_mse->add_option("--seed", seed0, "base channel seed (default 1)");
    bench_mse->add_option("--out", out_path, "write the table here instead of stdout");
    bench_mse->add_option("--format", format, "csv|tsv (default csv)")
        ->check(CLI::IsMember({"csv", "tsv"}));
    auto* mse_gain = bench_mse->add_option("--gain", gain, "transmission gain (default 1)");
    add_config(bench_mse);
    bench_mse->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const double g = mse_gain->count() ? gain : cfg.channel.gain;
        const std::uint64_t s0 = mse_seed->count() ? seed0 : cfg.channel.seed;
        const vcry::KeyPair keys = keys_from(password);
        const vcry::Signal s = vcry::read_wav(in_path);
        const std::vector<vcry::MseRow> rows =
            vcry::run_mse_sweep(s, keys, parse_snr_list(snr_csv), trials, s0, g);
        Report report;
        report.header = {"snr_db", "mean_mse", "trials"};
        for (const vcry::MseRow& row : rows)
            report.rows.push_back({fmt_double(row.snr_db), fmt_double(row.mean_mse),
                                   std::to_string(row.trials)});
        write_output(out_path, render_report(report, format));
    });

    auto* bench_acc = bench->add_subcommand("accuracy", "Identification accuracy per method");
    bench_acc->add_option("--db", db_dir, "template store directory")->required();
    bench_acc->add_option("--test", test_dir, "directory of speaker subdirectories with WAVs")->required();
    bench_acc->add_option("--methods", methods_csv, "comma list of methods (default all five)");
    bench_acc->add_option("--out", out_path, "write the table here instead of stdout");
    bench_acc->add_option("--format", format, "csv|tsv (default csv)")
        ->check(CLI::IsMember({"csv", "tsv"}));
    bench_acc->add_flag("--raw", raw_distance, "skip z-score normalization");
    add_config(bench_acc);
    bench_acc->callback([&] {
        const PipelineConfig cfg = load_config(config_path);
        const std::vector<vcry::AccuracyRow> rows = vcry::accuracy_bench(
            db_dir, test_dir, parse_method_list(methods_csv), !raw_distance, cfg.frame);
        Report report;
        report.header = {"method", "accuracy_pct", "correct", "total"};
        for (const vcry::AccuracyRow& row : rows)
            report.rows.push_back({vcry::method_name(row.method),
                                   fmt_double(row.accuracy_pct),
                                   std::to_string(row.correct),
                                   std::to_string(row.total)});
        write_output(out_path, render_report(report, format));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const vcry::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
