// Command-line front end: one subcommand per experiment, each writing CSVs
// and a summary.json into --out.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memsnn/bench.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace memsnn;

namespace {

struct CommonOptions {
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    fs::path out = "out";
    std::optional<std::string> mode;
    std::optional<std::string> device;
    std::optional<std::string> schedule;
    std::vector<std::string> overrides;
    std::optional<fs::path> data;
};

RunConfig build_config(const CommonOptions& o) {
    RunConfig c = o.config ? load_config(*o.config) : RunConfig{};
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) c.seed = *o.seed;
    if (o.mode) c.mode = parse_mode(*o.mode);
    if (o.device) c.device_model = parse_device(*o.device);
    if (o.schedule) c.schedule = parse_schedule(*o.schedule);
    c.validate();
    return c;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f.precision(10);
    return f;
}

void write_summary(const fs::path& dir, const RunConfig& config, json body) {
    body["config_hash"] = hash_hex(config_hash(config));
    body["seed"] = config.seed;
    open_out(dir, "summary.json") << body.dump(2) << '\n';
    open_out(dir, "config.txt") << [&] {
        std::ostringstream s;
        write_config(s, config);
        return s.str();
    }();
}

json curve_json(const AccuracyCurve& c) {
    return {{"max_accuracy_pct", c.max}, {"mean_accuracy_pct", c.mean}, {"per_epoch", c.per_epoch}};
}

int cmd_validate_neuron(const CommonOptions& o) {
    const RunConfig c = build_config(o);
    auto csv = open_out(o.out, "neuron_validation.csv");
    csv << "refractory_ms,reference_spikes,coarse_spikes,matched,missing_fraction,mean_isi_ms,"
           "offset_mean_ms,offset_std_ms,offset_std_over_isi\n";
    json runs = json::array();
    for (Millis refractory : {0.0, 5.0}) {
        const auto r = validate_neuron(c, refractory);
        csv << r.refractory << ',' << r.reference_spikes << ',' << r.coarse_spikes << ',' << r.matched
            << ',' << r.missing_fraction << ',' << r.mean_isi << ',' << r.offset_mean << ','
            << r.offset_std << ',' << r.relative_offset_std << '\n';
        runs.push_back({{"refractory_ms", r.refractory},
                        {"missing_fraction", r.missing_fraction},
                        {"offset_std_over_isi", r.relative_offset_std},
                        {"mean_isi_ms", r.mean_isi}});
        std::cout << "refractory " << r.refractory << " ms: missing " << r.missing_fraction
                  << ", offset std / ISI " << r.relative_offset_std << '\n';
    }
    write_summary(o.out, c, {{"command", "validate-neuron"}, {"runs", runs}});
    return 0;
}

int cmd_validate_stdp(const CommonOptions& o, int count) {
    const RunConfig c = build_config(o);
    const auto v = validate_stdp(c, count);
    auto csv = open_out(o.out, "stdp.csv");
    write_stdp_csv(csv, v);
    write_summary(o.out, c, {{"command", "validate-stdp"}, {"points", count},
                             {"max_relative_error", v.max_relative_error}});
    std::cout << "max relative error " << v.max_relative_error << " over " << count << " pairs\n";
    return 0;
}

int cmd_train(const CommonOptions& o, bool paired, double holdout) {
    const RunConfig c = build_config(o);
    const auto data = load_encoded_iris(c, o.data);
    std::optional<HoldoutSplit> split;
    if (holdout > 0.0) split = split_holdout(data, holdout, c.seed);
    const auto rep = split ? run_train(c, split->train, paired, split->test) : run_train(c, data, paired);

    auto acc = open_out(o.out, "accuracy.csv");
    write_accuracy_csv(acc, rep.curve);
    for (const auto& [epoch, w] : rep.result.snapshots) {
        auto f = open_out(o.out, "weights_epoch" + std::to_string(epoch) + ".csv");
        write_weights_csv(f, w);
    }
    auto fin = open_out(o.out, "weights_final.csv");
    write_weights_csv(fin, rep.result.final_weights);
    if (c.log_spikes) {
        auto s = open_out(o.out, "spikes.csv");
        write_spike_log_csv(s, rep.result.log);
    }

    json body = curve_json(rep.curve);
    body["command"] = "train";
    body["mode"] = to_string(c.mode);
    body["device"] = to_string(c.device_model);
    body["schedule"] = to_string(c.schedule);
    body["initial_accuracy_pct"] = rep.initial_accuracy;
    body["transfers"] = rep.result.transfers;
    body["holdout_fraction"] = holdout;
    json r2 = json::object();
    for (const auto& [epoch, v] : rep.paired_r2) r2[std::to_string(epoch)] = v;
    body["paired_r2"] = r2;
    write_summary(o.out, c, body);

    std::cout << "max " << rep.curve.max << "% mean " << rep.curve.mean << "%\n";
    for (const auto& [epoch, v] : rep.paired_r2) std::cout << "R^2 epoch " << epoch << ": " << v << '\n';
    return 0;
}

int cmd_sweep_schedules(const CommonOptions& o) {
    const RunConfig c = build_config(o);
    const auto data = load_encoded_iris(c, o.data);
    const auto sweep = sweep_schedules(c, data);
    auto csv = open_out(o.out, "schedules.csv");
    write_schedule_csv(csv, sweep);
    json body{{"command", "sweep-schedules"}};
    for (const auto& [s, curve] : sweep.curves) {
        body[to_string(s)] = curve_json(curve);
        std::cout << to_string(s) << ": max " << curve.max << "% mean " << curve.mean << "%\n";
    }
    write_summary(o.out, c, body);
    return 0;
}

int cmd_rram_iv(const CommonOptions& o, const IvOptions& iv) {
    const RunConfig c = build_config(o);
    const auto traces = rram_iv(c, iv);
    auto csv = open_out(o.out, "iv.csv");
    write_iv_traces_csv(csv, traces);
    json body{{"command", "rram-iv"}};
    for (const auto& t : traces) {
        const auto [lo, hi] = std::minmax_element(
            t.points.begin(), t.points.end(),
            [](const IvPoint& a, const IvPoint& b) { return a.conductance < b.conductance; });
        const double ratio = hi->conductance / lo->conductance;
        body[to_string(t.kind)] = {{"conductance_ratio", ratio}, {"points", t.points.size()}};
        std::cout << to_string(t.kind) << ": G ratio " << ratio << '\n';
    }
    write_summary(o.out, c, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-array memristive SNN simulator"};
    app.require_subcommand(1);

    CommonOptions common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key=value config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", common.seed, "run seed");
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        sub->add_option("--mode", common.mode, "learning mode")
            ->check(CLI::IsMember({"reference", "hardware"}));
        sub->add_option("--device", common.device, "device model")
            ->check(CLI::IsMember({"ideal", "realistic"}));
        sub->add_option("--schedule", common.schedule, "weight transfer schedule")
            ->check(CLI::IsMember({"immediate", "post-sample", "post-epoch"}));
        sub->add_option("--set", common.overrides, "override one config key (key=value)");
    };

    auto* neuron = app.add_subcommand("validate-neuron", "coarse vs fine dt spike timing");
    add_common(neuron);

    int stdp_count = 200;
    auto* stdp = app.add_subcommand("validate-stdp", "superposed waveforms vs STDP window");
    add_common(stdp);
    stdp->add_option("--count", stdp_count, "random spike pairs")->check(CLI::PositiveNumber);

    bool paired = false;
    double holdout = 0.0;
    auto* train_cmd = app.add_subcommand("train", "train on Iris and record accuracy and weights");
    add_common(train_cmd);
    train_cmd->add_flag("--paired", paired, "also run a Reference twin and report weight R^2");
    train_cmd->add_option("--data", common.data, "Iris CSV")->check(CLI::ExistingFile);
    train_cmd->add_option("--holdout", holdout, "fraction of each class held out for scoring (0 = off)")
        ->check(CLI::Range(0.0, 0.9));

    auto* sweep = app.add_subcommand("sweep-schedules", "all transfer schedules from one init");
    add_common(sweep);
    sweep->add_option("--data", common.data, "Iris CSV")->check(CLI::ExistingFile);

    IvOptions iv;
    auto* iv_cmd = app.add_subcommand("rram-iv", "DC IV sweeps of both device models");
    add_common(iv_cmd);
    iv_cmd->add_option("--v-min", iv.v_min)->capture_default_str();
    iv_cmd->add_option("--v-max", iv.v_max)->capture_default_str();
    iv_cmd->add_option("--ramp-rate", iv.ramp_rate, "V/ms")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (neuron->parsed()) return cmd_validate_neuron(common);
        if (stdp->parsed()) return cmd_validate_stdp(common, stdp_count);
        if (train_cmd->parsed()) return cmd_train(common, paired, holdout);
        if (sweep->parsed()) return cmd_sweep_schedules(common);
        if (iv_cmd->parsed()) return cmd_rram_iv(common, iv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
