// Command line front end: runs toss scenarios, sweeps a parameter, and
// re-verifies transcript files. Exit codes: 0 all bounds satisfied, 2 invalid
// config or usage, 3 bounds violated or verification failed, 4 I/O failure.
#include "vbct/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitViolated = 3;
constexpr int kExitIo = 4;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("cannot read " + path);
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw io_error("cannot write " + path.string());
}

struct CommonOpts {
    std::string config_path;
    std::string fixture;
    long long trials = -1;
    long long seed = -1;
    int parallelism = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    auto* cfg = cmd->add_option("--config", opts.config_path, "scenario config file (JSON)");
    auto* fix = cmd->add_option("--protocol", opts.fixture,
                                "built-in scenario name (see `vbct run --protocol help`)");
    cfg->excludes(fix);
    cmd->add_option("--trials", opts.trials, "override the trial count");
    cmd->add_option("--seed", opts.seed, "override the master seed");
    cmd->add_option("--parallelism", opts.parallelism, "worker threads (results do not depend on this)")
        ->check(CLI::Range(1, 64));
}

std::string fixture_listing() {
    std::string out = "built-in scenarios:";
    for (const auto& name : vbct::scenario::fixture_names()) out += "\n  " + name;
    out += "\n";
    return out;
}

// Loads the base config text for run/sweep, applying --trials/--seed overrides.
std::string load_config_text(const CommonOpts& opts) {
    std::string text;
    if (!opts.config_path.empty())
        text = read_file(opts.config_path);
    else if (!opts.fixture.empty())
        text = vbct::scenario::fixture_config(opts.fixture);
    else
        throw vbct::param_error("one of --config or --protocol is required");
    if (opts.trials < 0 && opts.seed < 0) return text;
    nlohmann::json obj = nlohmann::json::parse(text);
    if (opts.trials >= 0) obj["trials"] = opts.trials;
    if (opts.seed >= 0) obj["seed"] = static_cast<std::uint64_t>(opts.seed);
    return obj.dump(2) + "\n";
}

int write_outputs(const vbct::scenario::ScenarioOutput& out, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());
    write_file(dir / "config.json", out.cfg.canonical());
    write_file(dir / "transcript.txt", out.transcript_file());
    write_file(dir / "report.txt", out.report_file());
    std::fputs(out.report_file().c_str(), stdout);
    std::printf("wrote %s\n", (dir / "transcript.txt").c_str());
    return out.report.all_satisfied ? kExitOk : kExitViolated;
}

int cmd_run(const CommonOpts& opts, const std::string& out_dir) {
    if (opts.fixture == "help" || opts.fixture == "list") {
        std::fputs(fixture_listing().c_str(), stdout);
        return kExitOk;
    }
    const auto cfg = vbct::config::ScenarioConfig::from_text(load_config_text(opts));
    const auto out = vbct::scenario::run_scenario(cfg, opts.parallelism);
    return write_outputs(out, out_dir);
}

// Splits a comma separated value list; each entry is parsed as a JSON scalar,
// falling back to a plain string so `--values a,b` works for string fields.
std::vector<nlohmann::json> parse_values(const std::string& csv) {
    std::vector<nlohmann::json> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string::npos) end = csv.size();
        const std::string item = csv.substr(start, end - start);
        if (item.empty()) throw vbct::param_error("--values has an empty entry");
        try {
            values.push_back(nlohmann::json::parse(item));
        } catch (const nlohmann::json::parse_error&) {
            values.push_back(item);
        }
        start = end + 1;
    }
    if (values.empty()) throw vbct::param_error("--values is empty");
    return values;
}

int cmd_sweep(const CommonOpts& opts, const std::string& out_dir, const std::string& param,
              const std::string& values_csv) {
    const std::string base_text = load_config_text(opts);
    const auto values = parse_values(values_csv);
    std::string pointer = "/" + param;
    for (auto& c : pointer)
        if (c == '.') c = '/';

    bool all_ok = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        nlohmann::json obj = nlohmann::json::parse(base_text);
        obj[nlohmann::json::json_pointer(pointer)] = values[i];
        const auto cfg = vbct::config::ScenarioConfig::from_text(obj.dump(2) + "\n");
        const auto out = vbct::scenario::run_scenario(cfg, opts.parallelism);
        const auto dir = std::filesystem::path(out_dir) / ("sweep_" + std::to_string(i));
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());
        write_file(dir / "config.json", out.cfg.canonical());
        write_file(dir / "transcript.txt", out.transcript_file());
        write_file(dir / "report.txt", out.report_file());
        std::printf("sweep %zu %s=%s p0 %.6f p1 %.6f abort %.6f bounds %s\n", i, param.c_str(),
                    values[i].dump().c_str(), out.report.p0_hat, out.report.p1_hat,
                    out.report.abort_rate, out.report.all_satisfied ? "ok" : "VIOLATED");
        all_ok = all_ok && out.report.all_satisfied;
    }
    return all_ok ? kExitOk : kExitViolated;
}

int cmd_verify(const std::string& path, int parallelism) {
    const std::string text = read_file(path);
    const auto result = vbct::scenario::verify_transcript_text(text, parallelism);
    std::printf("checked %lld trials, %d full records\n", result.trials_checked,
                result.full_checked);
    for (const auto& issue : result.issues) {
        if (issue.trial >= 0)
            std::printf("trial %lld: %s\n", issue.trial, issue.what.c_str());
        else
            std::printf("file: %s\n", issue.what.c_str());
    }
    std::printf("verify %s\n", result.ok ? "ok" : "FAILED");
    return result.ok ? kExitOk : kExitViolated;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variable-bias coin tossing laboratory"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string run_out = "vbct_out";
    auto* run = app.add_subcommand("run", "run a scenario and write transcript plus report");
    add_common(run, run_opts);
    run->add_option("--out", run_out, "output directory");

    CommonOpts sweep_opts;
    std::string sweep_out = "vbct_sweep";
    std::string sweep_param;
    std::string sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run one scenario per value of a config field");
    add_common(sweep, sweep_opts);
    sweep->add_option("--out", sweep_out, "output directory (one subdirectory per value)");
    sweep->add_option("--param", sweep_param, "dotted config path, e.g. bias.theta")->required();
    sweep->add_option("--values", sweep_values, "comma separated values")->required();

    std::string verify_path;
    int verify_parallelism = 1;
    auto* verify = app.add_subcommand("verify", "replay a transcript file and check every line");
    verify->add_option("transcript", verify_path, "transcript file to verify")->required();
    verify->add_option("--parallelism", verify_parallelism, "worker threads")
        ->check(CLI::Range(1, 64));

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_opts, run_out);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_out, sweep_param, sweep_values);
        return cmd_verify(verify_path, verify_parallelism);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const vbct::param_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: invalid config: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitIo;
    }
}
