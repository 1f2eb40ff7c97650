#pragma once

// Command-line front end. Exit codes: 0 success, 1 tolerance failure,
// 2 usage or domain error (message and usage on the error stream).

#include "twr/report_io.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace twr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TWR_OUTPUT_DIR";

namespace detail {

struct OutputOptions {
    std::string format = "json";
    std::string output;
};

inline void add_output_options(CLI::App* cmd, OutputOptions& o)
{
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd->add_option("--output", o.output, "Output file (default: $TWR_OUTPUT_DIR/<command>.<format>, else stdout)");
}

inline void emit(const std::string& text, const std::string& command, const OutputOptions& o, std::ostream& out)
{
    std::string path = o.output;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
            path = (std::filesystem::path(dir) / (command + "." + o.format)).string();
        }
    }
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DomainError("cannot open output file " + path);
    }
    f << text;
    if (!f) {
        throw DomainError("cannot write output file " + path);
    }
}

inline std::vector<double> parse_speed_list(const std::string& text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        std::string item = text.substr(start, end - start);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            double x = 0.0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
            if (ec != std::errc() || ptr != item.data() + item.size()) {
                throw DomainError("malformed speed \"" + item + "\"");
            }
            out.push_back(x);
        }
        start = end + 1;
    }
    return out;
}

inline Json header(const char* command)
{
    return Json{{"schema_version", kSchemaVersion}, {"command", command}};
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw DomainError("cannot read path file " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Thomas-Wigner rotations from boost algebra and from mass-shell holonomy"};
    app.name("twr");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // precession
    auto* prec = app.add_subcommand("precession", "Spin holonomy of a circular momentum loop vs 2 pi (gamma - 1)");
    double prec_speed = 0.0, prec_mass = 1.0, prec_tol = kDefaultCampaignTol;
    int prec_steps = 10000;
    detail::OutputOptions prec_out;
    prec->add_option("--speed", prec_speed, "Speed V in units of c")->required();
    prec->add_option("--mass", prec_mass, "Mass")->capture_default_str();
    prec->add_option("--steps", prec_steps, "Steps around the circle")->capture_default_str();
    prec->add_option("--tolerance", prec_tol, "Pass tolerance in radians")->capture_default_str();
    detail::add_output_options(prec, prec_out);

    // wigner
    auto* wig = app.add_subcommand("wigner", "Wigner rotation of two successive pure boosts");
    std::vector<double> wig_v1, wig_v2;
    double wig_mass = 1.0;
    detail::OutputOptions wig_out;
    wig->add_option("--v1", wig_v1, "First velocity (3 components)")->expected(3)->required();
    wig->add_option("--v2", wig_v2, "Second velocity, relative to the first frame (3 components)")->expected(3)->required();
    wig->add_option("--mass", wig_mass, "Mass")->capture_default_str();
    detail::add_output_options(wig, wig_out);

    // holonomy
    auto* hol = app.add_subcommand("holonomy", "Holonomy of a closed loop read from a path-spec file");
    std::string hol_file;
    int hol_steps = 0;
    detail::OutputOptions hol_out;
    hol->add_option("path_file", hol_file, "Path-spec JSON file")->required();
    hol->add_option("--steps", hol_steps, "Steps per segment, overriding the file");
    detail::add_output_options(hol, hol_out);

    // validate
    auto* val = app.add_subcommand("validate", "Campaign comparing algebraic and geometric rotations");
    std::string val_speeds = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    CampaignSpec spec;
    detail::OutputOptions val_out;
    val->add_option("--speeds", val_speeds, "Comma-separated speed grid")->capture_default_str();
    val->add_option("--mass", spec.mass, "Mass")->capture_default_str();
    val->add_option("--steps", spec.steps, "Steps per edge / circle")->capture_default_str();
    val->add_option("--tolerance", spec.tolerance, "Pass tolerance in radians")->capture_default_str();
    val->add_option("--random-pairs", spec.random_pairs, "Extra triangles with random velocities")->capture_default_str();
    val->add_option("--seed", spec.seed, "Seed for the random pairs")->capture_default_str();
    val->add_option("--threads", spec.threads, "Worker threads (0 = all cores)")->capture_default_str();
    detail::add_output_options(val, val_out);

    std::vector<const char*> argv{"twr"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == prec) {
            const ComparisonReport r = compare_precession(prec_speed, prec_mass, prec_steps, prec_tol, "precession");
            const HolonomyResult h = holonomy_path_ordered(circle_loop(rho_of_speed(prec_speed, prec_mass), prec_mass, prec_steps));
            std::string text;
            if (prec_out.format == "csv") {
                text = comparison_csv({r});
            } else {
                Json j = detail::header("precession");
                j["config"] = Json{{"speed", prec_speed}, {"mass", prec_mass}, {"steps", prec_steps}, {"tolerance", prec_tol}};
                j["report"] = to_json(r);
                j["holonomy"] = to_json(h);
                text = to_json_text(j);
            }
            detail::emit(text, "precession", prec_out, out);
            return r.pass ? kExitOk : kExitToleranceFailure;
        }
        if (active == wig) {
            const WignerResult w = compute_wigner(Velocity3(Vec3(wig_v1[0], wig_v1[1], wig_v1[2])),
                                                  Velocity3(Vec3(wig_v2[0], wig_v2[1], wig_v2[2])), wig_mass);
            std::string text;
            if (wig_out.format == "csv") {
                text = wigner_csv(w);
            } else {
                Json j = detail::header("wigner");
                j["config"] = Json{{"v1", detail::vec_json(w.v1)}, {"v2", detail::vec_json(w.v2)}, {"mass", w.mass}};
                j["v12"] = detail::vec_json(w.v12);
                j["rotation"] = detail::rotation_json(w.rotation);
                j["angle"] = w.angle_axis.angle;
                j["axis"] = detail::vec_json(w.angle_axis.axis);
                j["su2"] = detail::su2_json(w.su2);
                text = to_json_text(j);
            }
            detail::emit(text, "wigner", wig_out, out);
            return kExitOk;
        }
        if (active == hol) {
            PathSpec path = parse_path_spec(detail::read_file(hol_file));
            if (hol->count("--steps") > 0) {
                if (hol_steps < 1) {
                    throw DomainError("steps must be positive");
                }
                path.steps_per_segment = hol_steps;
                for (auto& s : path.segments) {
                    s.steps = 0;
                }
            }
            const HolonomyResult h = holonomy_auto(path);
            std::string text;
            if (hol_out.format == "csv") {
                text = holonomy_csv(h);
            } else {
                Json j = detail::header("holonomy");
                j["config"] = Json{{"path_file", hol_file},
                                   {"steps", path.steps_per_segment},
                                   {"mass", path.mass},
                                   {"closed", path.closed},
                                   {"segments", path.segments.size()}};
                j["holonomy"] = to_json(h);
                text = to_json_text(j);
            }
            detail::emit(text, "holonomy", hol_out, out);
            return kExitOk;
        }
        spec.speeds = detail::parse_speed_list(val_speeds);
        const std::vector<ComparisonReport> reports = run_campaign(spec);
        const CampaignSummary summary = summarize(reports);
        std::string text;
        if (val_out.format == "csv") {
            text = comparison_csv(reports);
        } else {
            Json j = detail::header("validate");
            j["config"] = Json{{"speeds", spec.speeds},
                               {"mass", spec.mass},
                               {"steps", spec.steps},
                               {"tolerance", spec.tolerance},
                               {"random_pairs", spec.random_pairs},
                               {"seed", spec.seed}};
            Json arr = Json::array();
            for (const auto& r : reports) {
                arr.push_back(to_json(r));
            }
            j["reports"] = std::move(arr);
            j["summary"] = to_json(summary);
            text = to_json_text(j);
        }
        detail::emit(text, "validate", val_out, out);
        return summary.all_pass() ? kExitOk : kExitToleranceFailure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace twr
