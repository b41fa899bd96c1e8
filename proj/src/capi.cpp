#include "whitesr/capi.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "whitesr/admm.hpp"
#include "whitesr/fft.hpp"
#include "whitesr/io.hpp"
#include "whitesr/irl1.hpp"
#include "whitesr/metrics.hpp"
#include "whitesr/sim.hpp"

using namespace whitesr;

struct ws_image {
    ImageGrid img;
};

struct ws_sim {
    ws_image truth;
    ws_image observed;
    double sigma = 0.0;
    std::string points_csv;
};

struct ws_report {
    ws_image x;
    double mu_star = 0.0;
    double tau_star = -1.0;
    int iterations = 0;
    bool converged = false;
    bool boundary_hit = false;
    std::string traces;
};

namespace {

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
    try {
        f();
        return WS_OK;
    } catch (const NumericError& e) {
        g_last_error = e.what();
        return WS_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WS_ERR_USAGE;
    }
}

int usage_error(const std::string& msg) {
    g_last_error = msg;
    return WS_ERR_USAGE;
}

SpectralDiagonal model_otf(const char* kernel, int dr, int dc, int pixel_blur,
                           int Nr, int Nc) {
    ComposedKernel ck = compose_kernel(KernelSpec::parse(kernel), pixel_blur != 0, dr, dc);
    return kernel_to_otf(ck.kernel, Nr, Nc, ck.anchor_r, ck.anchor_c);
}

struct Selection {
    bool dp = false;
    double tau = 1.0;
    double sigma = -1.0;
};

Selection parse_select(const std::string& text) {
    Selection s;
    if (text == "rwp") return s;
    if (text.rfind("dp:", 0) == 0) {
        std::istringstream is(text.substr(3));
        char colon = 0;
        if (is >> s.tau >> colon >> s.sigma && colon == ':' && s.sigma > 0.0 && s.tau > 0.0) {
            s.dp = true;
            return s;
        }
    }
    throw std::invalid_argument("bad selection rule '" + text + "' (want rwp or dp:tau:sigma)");
}

ws_report* from_report(const ReconstructionReport& rep) {
    auto* out = new ws_report;
    out->x.img = rep.x_star;
    out->mu_star = rep.mu_star;
    out->tau_star = rep.tau_star;
    out->iterations = rep.iterations;
    out->converged = rep.converged;
    out->boundary_hit = rep.boundary_hit;
    out->traces = rep.traces_csv();
    return out;
}

ReconstructionReport solve_one(const ImageGrid& b, const SpectralDiagonal& Lambda,
                               const Decimator& dec, const std::string& model,
                               const Selection& sel, const GroundTruth& truth,
                               double fixed_mu = -1.0) {
    if (model == "cel0") {
        Irl1Options opts;
        if (sel.dp) {
            opts.inner.dp_tau = sel.tau;
            opts.inner.dp_sigma = sel.sigma;
        }
        opts.inner.fixed_mu = fixed_mu;
        Irl1Report rep = irwp_irl1_run(b, Lambda, dec, opts, sel.dp ? sel.sigma : -1.0, truth);
        return rep.final;
    }
    if (model == "tik" && fixed_mu <= 0.0) {
        // Closed-form path: exact selection on the quadratic model.
        if (!sel.dp) return exact_rwp_tik(b, Lambda, dec);
        RegularizerOperator reg = build_regularizer(RegularizerOperator::Kind::gradient,
                                                    dec.Nr, dec.Nc);
        SpectralCache cache = precompute_cache(Lambda, reg, b, dec);
        std::vector<cplx> nu(cache.n(), cplx(0.0));
        ReconstructionReport rep;
        rep.mu_star = solve_dp_mu(cache, nu, sel.sigma, sel.tau);
        rep.x_star = solve_l2l2(cache, {}, rep.mu_star);
        rep.tau_star = tau_star(residual_norm_of_mu(cache, nu, rep.mu_star), dec.n(), sel.sigma);
        rep.iterations = 1;
        rep.converged = true;
        rep.mu_trace.push_back(rep.mu_star);
        return rep;
    }
    RegularizerKind reg = RegularizerKind::parse(model);
    AdmmOptions opts;
    opts.fixed_mu = fixed_mu;
    if (sel.dp) {
        opts.dp_tau = sel.tau;
        opts.dp_sigma = sel.sigma;
    }
    return irwp_admm_run(b, Lambda, dec, reg, opts, sel.dp ? sel.sigma : -1.0, truth);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int pool_size(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run job(i) for i in [0, count) on a worker pool; first exception wins.
template <class F>
void parallel_for(int count, int threads, F&& job) {
    const int workers = std::min(pool_size(threads), std::max(count, 1));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

extern "C" {

const char* ws_last_error(void) { return g_last_error.c_str(); }

int ws_image_create(int rows, int cols, const double* data, ws_image** out) {
    return guarded([&] {
        auto* img = new ws_image;
        img->img = data
            ? ImageGrid(rows, cols, std::vector<double>(data, data + static_cast<long>(rows) * cols))
            : ImageGrid(rows, cols, 0.0);
        *out = img;
    });
}

void ws_image_free(ws_image* img) { delete img; }
int ws_image_rows(const ws_image* img) { return img->img.rows(); }
int ws_image_cols(const ws_image* img) { return img->img.cols(); }
const double* ws_image_data(const ws_image* img) { return img->img.data().data(); }

int ws_image_read_matrix(const char* path, ws_image** out) {
    return guarded([&] {
        auto* img = new ws_image;
        img->img = read_matrix(path);
        *out = img;
    });
}

int ws_image_write_matrix(const ws_image* img, const char* path) {
    return guarded([&] { write_matrix(path, img->img); });
}

int ws_image_write_pgm16(const ws_image* img, const char* path, double lo, double hi) {
    return guarded([&] { write_pgm16(path, img->img, lo, hi); });
}

int ws_simulate(const char* phantom, int size, uint64_t seed,
                const char* kernel, int dr, int dc, int pixel_blur,
                double noise_percent, double sigma, ws_sim** out) {
    return guarded([&] {
        PhantomSpec pspec;
        pspec.kind = PhantomSpec::parse_kind(phantom);
        pspec.size = size;
        pspec.seed = seed;
        Phantom ph = make_phantom(pspec);

        DegradationSpec dspec;
        dspec.kernel = KernelSpec::parse(kernel);
        dspec.pixel_blur = pixel_blur != 0;
        dspec.dr = dr;
        dspec.dc = dc;
        dspec.sigma = sigma;
        dspec.percent = noise_percent;
        dspec.seed = seed;
        DegradedData data = degrade(ph.image, dspec);

        auto* sim = new ws_sim;
        sim->truth.img = std::move(ph.image);
        sim->observed.img = std::move(data.b);
        sim->sigma = data.sigma_used;
        std::ostringstream pts;
        pts.precision(17);
        for (const auto& p : ph.truth_points) pts << p.first << "," << p.second << "\n";
        sim->points_csv = pts.str();
        *out = sim;
    });
}

void ws_sim_free(ws_sim* sim) { delete sim; }
const ws_image* ws_sim_truth(const ws_sim* sim) { return &sim->truth; }
const ws_image* ws_sim_observed(const ws_sim* sim) { return &sim->observed; }
double ws_sim_sigma(const ws_sim* sim) { return sim->sigma; }
const char* ws_sim_points_csv(const ws_sim* sim) { return sim->points_csv.c_str(); }

int ws_solve(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
             const char* model, const char* select, const ws_image* truth,
             ws_report** out) {
    if (!b || !kernel || !model || !select || !out) return usage_error("ws_solve: null argument");
    return guarded([&] {
        const Selection sel = parse_select(select);
        Decimator dec(dr, dc, b->img.rows() * dr, b->img.cols() * dc);
        SpectralDiagonal Lambda = model_otf(kernel, dr, dc, pixel_blur, dec.Nr, dec.Nc);

        GroundTruth gt;
        ImageGrid b_bar;
        if (truth) {
            if (truth->img.rows() != dec.Nr || truth->img.cols() != dec.Nc)
                throw std::invalid_argument("ws_solve: truth shape mismatch");
            b_bar = bicubic_upsample(b->img, dr, dc);
            gt.x = &truth->img;
            gt.b_bar = &b_bar;
        }
        *out = from_report(solve_one(b->img, Lambda, dec, model, sel, gt));
    });
}

void ws_report_free(ws_report* rep) { delete rep; }
const ws_image* ws_report_x(const ws_report* rep) { return &rep->x; }
double ws_report_mu_star(const ws_report* rep) { return rep->mu_star; }
double ws_report_tau_star(const ws_report* rep) { return rep->tau_star; }
int ws_report_iterations(const ws_report* rep) { return rep->iterations; }
int ws_report_converged(const ws_report* rep) { return rep->converged ? 1 : 0; }
int ws_report_boundary_hit(const ws_report* rep) { return rep->boundary_hit ? 1 : 0; }
const char* ws_report_traces_csv(const ws_report* rep) { return rep->traces.c_str(); }

int ws_sweep(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
             const char* model, double mu_lo, double mu_hi, int count,
             const ws_image* truth, double sigma, int threads, char** csv_out) {
    if (!b || !kernel || !model || !csv_out) return usage_error("ws_sweep: null argument");
    if (!(mu_lo > 0.0) || !(mu_hi > mu_lo) || count < 2)
        return usage_error("ws_sweep: need 0 < mu_lo < mu_hi and count >= 2");
    return guarded([&] {
        Decimator dec(dr, dc, b->img.rows() * dr, b->img.cols() * dc);
        SpectralDiagonal Lambda = model_otf(kernel, dr, dc, pixel_blur, dec.Nr, dec.Nc);

        GroundTruth gt;
        ImageGrid b_bar;
        if (truth) {
            b_bar = bicubic_upsample(b->img, dr, dc);
            gt.x = &truth->img;
            gt.b_bar = &b_bar;
        }

        std::vector<std::string> rows(static_cast<size_t>(count));
        const Selection rwp;  // fixed-mu runs ignore the selection rule
        parallel_for(count, threads, [&](int i) {
            const double mu = mu_lo * std::pow(mu_hi / mu_lo,
                                               static_cast<double>(i) / (count - 1));
            ReconstructionReport rep = solve_one(b->img, Lambda, dec, model, rwp, {}, mu);
            ImageGrid r = lowres_residual(rep.x_star, Lambda, dec, b->img);
            double rn = 0.0;
            for (double v : r.data()) rn += v * v;
            std::ostringstream os;
            os.precision(17);
            os << mu << ",";
            if (sigma > 0.0) os << tau_star(std::sqrt(rn), dec.n(), sigma);
            os << "," << whiteness_of_image(r) << ",";
            if (gt.x) os << isnr(*gt.x, rep.x_star, *gt.b_bar);
            os << ",";
            if (gt.x) os << ssim(*gt.x, rep.x_star);
            rows[static_cast<size_t>(i)] = os.str();
        });

        std::string csv = "mu,tau,W,isnr,ssim\n";
        for (const auto& row : rows) csv += row + "\n";
        *csv_out = dup_string(csv);
    });
}

int ws_compare(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
               const char* models, const ws_image* truth, double sigma,
               int threads, char** csv_out) {
    if (!b || !kernel || !models || !csv_out) return usage_error("ws_compare: null argument");
    return guarded([&] {
        Decimator dec(dr, dc, b->img.rows() * dr, b->img.cols() * dc);
        SpectralDiagonal Lambda = model_otf(kernel, dr, dc, pixel_blur, dec.Nr, dec.Nc);

        std::vector<std::string> model_list;
        std::istringstream ms(models);
        std::string tok;
        while (std::getline(ms, tok, ','))
            if (!tok.empty()) model_list.push_back(tok);
        if (model_list.empty()) throw std::invalid_argument("ws_compare: empty model list");

        GroundTruth gt;
        ImageGrid b_bar;
        if (truth) {
            b_bar = bicubic_upsample(b->img, dr, dc);
            gt.x = &truth->img;
            gt.b_bar = &b_bar;
        }

        struct Job {
            std::string model;
            Selection sel;
        };
        std::vector<Job> jobs;
        for (const auto& m : model_list) {
            jobs.push_back({m, Selection{}});
            if (sigma > 0.0) jobs.push_back({m, Selection{true, 1.0, sigma}});
        }

        std::vector<std::string> rows(jobs.size());
        parallel_for(static_cast<int>(jobs.size()), threads, [&](int i) {
            const Job& job = jobs[static_cast<size_t>(i)];
            ReconstructionReport rep = solve_one(b->img, Lambda, dec, job.model, job.sel, {});
            double tau = rep.tau_star;
            if (tau < 0.0 && sigma > 0.0) {
                // Post-hoc diagnostic only; the rwp solve itself never saw sigma.
                ImageGrid r = lowres_residual(rep.x_star, Lambda, dec, b->img);
                double rn = 0.0;
                for (double v : r.data()) rn += v * v;
                tau = tau_star(std::sqrt(rn), dec.n(), sigma);
            }
            std::ostringstream os;
            os.precision(17);
            os << job.model << "," << (job.sel.dp ? "dp" : "rwp") << ","
               << rep.mu_star << ",";
            if (tau >= 0.0) os << tau;
            os << "," << rep.iterations << "," << (rep.converged ? 1 : 0) << ",";
            if (gt.x) {
                os << psnr(*gt.x, rep.x_star) << ","
                   << isnr(*gt.x, rep.x_star, *gt.b_bar) << ","
                   << ssim(*gt.x, rep.x_star);
            } else {
                os << ",,";
            }
            rows[static_cast<size_t>(i)] = os.str();
        });

        std::string csv = "model,select,mu_star,tau_star,iterations,converged,psnr,isnr,ssim\n";
        for (const auto& row : rows) csv += row + "\n";
        *csv_out = dup_string(csv);
    });
}

void ws_string_free(char* s) { std::free(s); }

}  // extern "C"
