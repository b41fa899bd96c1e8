// Command-line front end; talks to the core exclusively through the C API.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "whitesr/capi.h"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "whitesr 1.0.0";

int fail(int code, const std::string& reason, std::vector<fs::path>& written) {
    for (const auto& p : written) {
        std::error_code ec;
        fs::remove(p, ec);
    }
    std::cerr << "error: " << reason << "\n";
    return code;
}

int threads_from_env() {
    const char* env = std::getenv("WHITESR_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
    return 0;
}

bool parse_decimate(const std::string& text, int& dr, int& dc) {
    std::istringstream is(text);
    char x = 0;
    return static_cast<bool>(is >> dr >> x >> dc) && x == 'x' && dr >= 1 && dc >= 1 &&
           is.peek() == EOF;
}

bool parse_grid(const std::string& text, double& lo, double& hi, int& count) {
    std::istringstream is(text);
    char c1 = 0, c2 = 0;
    return static_cast<bool>(is >> lo >> c1 >> hi >> c2 >> count) && c1 == ':' && c2 == ':' &&
           lo > 0.0 && hi > lo && count >= 2 && is.peek() == EOF;
}

void write_kv(const fs::path& path, const std::map<std::string, std::string>& kv,
              std::vector<fs::path>& written) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    written.push_back(path);
    for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::map<std::string, std::string> read_kv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad metadata line in '" + path.string() + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

struct Problem {
    ws_image* b = nullptr;
    ws_image* truth = nullptr;  // may stay null
    std::string kernel;
    int dr = 1, dc = 1, pixel_blur = 1;
    double sigma = -1.0;

    ~Problem() {
        ws_image_free(b);
        ws_image_free(truth);
    }
};

// Load b + metadata (+ truth when present) from a simulate output directory.
int load_problem(const fs::path& dir, Problem& p, std::string& reason) {
    const auto meta_path = dir / "meta.txt";
    std::map<std::string, std::string> meta;
    try {
        meta = read_kv(meta_path);
    } catch (const std::exception& e) {
        reason = e.what();
        return WS_ERR_USAGE;
    }
    for (const char* key : {"kernel", "dr", "dc", "pixel_blur"})
        if (!meta.count(key)) {
            reason = "metadata missing key '" + std::string(key) + "'";
            return WS_ERR_USAGE;
        }
    p.kernel = meta["kernel"];
    p.dr = std::stoi(meta["dr"]);
    p.dc = std::stoi(meta["dc"]);
    p.pixel_blur = std::stoi(meta["pixel_blur"]);
    if (meta.count("sigma_used")) p.sigma = std::stod(meta["sigma_used"]);

    int rc = ws_image_read_matrix((dir / "b.txt").string().c_str(), &p.b);
    if (rc != WS_OK) {
        reason = ws_last_error();
        return rc;
    }
    if (fs::exists(dir / "x.txt")) {
        rc = ws_image_read_matrix((dir / "x.txt").string().c_str(), &p.truth);
        if (rc != WS_OK) {
            reason = ws_last_error();
            return rc;
        }
    }
    return WS_OK;
}

int checked_write(ws_image* img, const fs::path& path, bool pgm,
                  std::vector<fs::path>& written, std::string& reason) {
    written.push_back(path);
    const int rc = pgm ? ws_image_write_pgm16(img, path.string().c_str(), 0.0, -1.0)
                       : ws_image_write_matrix(img, path.string().c_str());
    if (rc != WS_OK) reason = ws_last_error();
    return rc;
}

void write_text_file(const fs::path& path, const std::string& content,
                     std::vector<fs::path>& written) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    written.push_back(path);
    os << content;
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Super-resolution with automatic regularisation-parameter selection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a phantom and its degraded image");
    std::string phantom = "blocks", kernel = "gaussian:13:3", decimate = "4x4", out_dir;
    int size = 256;
    std::uint64_t seed = 0;
    double noise = -1.0, sigma_abs = 0.0;
    bool no_pixel_blur = false;
    sim_cmd->add_option("--phantom", phantom, "blocks|geometric|points");
    sim_cmd->add_option("--size", size, "phantom side length")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--kernel", kernel, "gaussian:band:sigma | uniform:dr:dc | identity");
    sim_cmd->add_option("--decimate", decimate, "decimation factors, e.g. 4x4");
    sim_cmd->add_option("--noise", noise, "noise level as percent of the peak clean value");
    sim_cmd->add_option("--sigma", sigma_abs, "absolute noise standard deviation");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_flag("--no-pixel-blur", no_pixel_blur, "skip the sensor pixel blur");
    sim_cmd->add_option("--out", out_dir, "output directory")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "reconstruct with automatic mu selection");
    std::string model = "tvi", select = "rwp", in_dir, rec_dir;
    solve_cmd->add_option("--model", model, "tik|tvi|tva|wtv|wl1|cel0");
    solve_cmd->add_option("--select", select, "rwp | dp:tau:sigma");
    solve_cmd->add_option("--in", in_dir, "simulate output directory")->required();
    solve_cmd->add_option("--out", rec_dir, "reconstruction output directory")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "fixed-mu reconstructions over a log grid");
    std::string grid = "1e-4:1e4:100", sweep_model = "tvi", sweep_in, sweep_out;
    sweep_cmd->add_option("--model", sweep_model, "tik|tvi|tva|wtv|wl1|cel0");
    sweep_cmd->add_option("--grid", grid, "lo:hi:count");
    sweep_cmd->add_option("--in", sweep_in, "simulate output directory")->required();
    sweep_cmd->add_option("--out", sweep_out, "curves CSV path")->required();

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "metrics table across models and selections");
    std::string models = "tik,tvi,tva", cmp_in, cmp_out;
    cmp_cmd->add_option("--models", models, "comma-separated model list");
    cmp_cmd->add_option("--in", cmp_in, "simulate output directory")->required();
    cmp_cmd->add_option("--out", cmp_out, "table CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
        std::cerr << "error: " << e.what() << "\n";
        return WS_ERR_USAGE;
    }

    std::vector<fs::path> written;
    const int threads = threads_from_env();

    try {
        if (sim_cmd->parsed()) {
            int dr = 0, dc = 0;
            if (!parse_decimate(decimate, dr, dc))
                return fail(WS_ERR_USAGE, "bad --decimate '" + decimate + "'", written);
            if (size % dr != 0 || size % dc != 0)
                return fail(WS_ERR_USAGE, "size must be divisible by the decimation factors",
                            written);
            ws_sim* sim = nullptr;
            const int rc = ws_simulate(phantom.c_str(), size, seed, kernel.c_str(), dr, dc,
                                       no_pixel_blur ? 0 : 1, noise, sigma_abs, &sim);
            if (rc != WS_OK) return fail(rc, ws_last_error(), written);

            fs::create_directories(out_dir);
            const fs::path dir(out_dir);
            std::string reason;
            auto* truth = const_cast<ws_image*>(ws_sim_truth(sim));
            auto* b = const_cast<ws_image*>(ws_sim_observed(sim));
            for (auto [img, name, pgm] : {std::tuple{truth, "x.txt", false},
                                          std::tuple{b, "b.txt", false},
                                          std::tuple{truth, "x.pgm", true},
                                          std::tuple{b, "b.pgm", true}})
                if (checked_write(img, dir / name, pgm, written, reason) != WS_OK) {
                    ws_sim_free(sim);
                    return fail(WS_ERR_USAGE, reason, written);
                }
            const std::string pts = ws_sim_points_csv(sim);
            if (!pts.empty()) write_text_file(dir / "points.csv", pts, written);

            std::ostringstream sig;
            sig.precision(17);
            sig << ws_sim_sigma(sim);
            write_kv(dir / "meta.txt",
                     {{"phantom", phantom},
                      {"size", std::to_string(size)},
                      {"seed", std::to_string(seed)},
                      {"kernel", kernel},
                      {"dr", std::to_string(dr)},
                      {"dc", std::to_string(dc)},
                      {"pixel_blur", no_pixel_blur ? "0" : "1"},
                      {"noise_percent", std::to_string(noise)},
                      {"sigma_used", sig.str()},
                      {"version", kVersion}},
                     written);
            ws_sim_free(sim);
            return 0;
        }

        if (solve_cmd->parsed()) {
            Problem p;
            std::string reason;
            int rc = load_problem(in_dir, p, reason);
            if (rc != WS_OK) return fail(rc, reason, written);

            ws_report* rep = nullptr;
            rc = ws_solve(p.b, p.kernel.c_str(), p.dr, p.dc, p.pixel_blur, model.c_str(),
                          select.c_str(), p.truth, &rep);
            if (rc != WS_OK) return fail(rc, ws_last_error(), written);

            fs::create_directories(rec_dir);
            const fs::path dir(rec_dir);
            auto* x = const_cast<ws_image*>(ws_report_x(rep));
            if (checked_write(x, dir / "xstar.txt", false, written, reason) != WS_OK ||
                checked_write(x, dir / "xstar.pgm", true, written, reason) != WS_OK) {
                ws_report_free(rep);
                return fail(WS_ERR_USAGE, reason, written);
            }
            write_text_file(dir / "traces.csv", ws_report_traces_csv(rep), written);

            std::ostringstream mu, tau;
            mu.precision(17);
            tau.precision(17);
            mu << ws_report_mu_star(rep);
            tau << ws_report_tau_star(rep);
            write_kv(dir / "report.txt",
                     {{"model", model},
                      {"select", select},
                      {"mu_star", mu.str()},
                      {"tau_star", tau.str()},
                      {"iterations", std::to_string(ws_report_iterations(rep))},
                      {"converged", std::to_string(ws_report_converged(rep))},
                      {"boundary_hit", std::to_string(ws_report_boundary_hit(rep))},
                      {"version", kVersion}},
                     written);
            ws_report_free(rep);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            double lo = 0, hi = 0;
            int count = 0;
            if (!parse_grid(grid, lo, hi, count))
                return fail(WS_ERR_USAGE, "bad --grid '" + grid + "' (want lo:hi:count)", written);
            Problem p;
            std::string reason;
            int rc = load_problem(sweep_in, p, reason);
            if (rc != WS_OK) return fail(rc, reason, written);

            char* csv = nullptr;
            rc = ws_sweep(p.b, p.kernel.c_str(), p.dr, p.dc, p.pixel_blur, sweep_model.c_str(),
                          lo, hi, count, p.truth, p.sigma, threads, &csv);
            if (rc != WS_OK) return fail(rc, ws_last_error(), written);
            write_text_file(sweep_out, csv, written);
            ws_string_free(csv);
            return 0;
        }

        if (cmp_cmd->parsed()) {
            Problem p;
            std::string reason;
            int rc = load_problem(cmp_in, p, reason);
            if (rc != WS_OK) return fail(rc, reason, written);

            char* csv = nullptr;
            rc = ws_compare(p.b, p.kernel.c_str(), p.dr, p.dc, p.pixel_blur, models.c_str(),
                            p.truth, p.sigma, threads, &csv);
            if (rc != WS_OK) return fail(rc, ws_last_error(), written);
            write_text_file(cmp_out, csv, written);
            ws_string_free(csv);
            return 0;
        }
    } catch (const std::exception& e) {
        return fail(WS_ERR_USAGE, e.what(), written);
    }
    return fail(WS_ERR_USAGE, "no subcommand", written);
}
