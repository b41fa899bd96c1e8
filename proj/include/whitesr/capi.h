#ifndef WHITESR_CAPI_H
#define WHITESR_CAPI_H

/* C interface to the super-resolution core: opaque handles, integer error
 * codes, no exceptions across the boundary.  Every function returning int
 * yields WS_OK on success; on failure ws_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread). */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    WS_OK = 0,
    WS_ERR_USAGE = 2,   /* bad arguments, unreadable inputs */
    WS_ERR_NUMERIC = 3  /* numerical failure inside a solver */
};

typedef struct ws_image ws_image;
typedef struct ws_sim ws_sim;
typedef struct ws_report ws_report;

const char* ws_last_error(void);

/* ---- images ---------------------------------------------------------- */

int ws_image_create(int rows, int cols, const double* data, ws_image** out);
void ws_image_free(ws_image* img);
int ws_image_rows(const ws_image* img);
int ws_image_cols(const ws_image* img);
const double* ws_image_data(const ws_image* img);

/* Text matrix format: `rows cols` header, row-major, 17 significant digits. */
int ws_image_read_matrix(const char* path, ws_image** out);
int ws_image_write_matrix(const ws_image* img, const char* path);
/* 16-bit binary PGM; pass lo >= hi to scale to the image's own range. */
int ws_image_write_pgm16(const ws_image* img, const char* path, double lo, double hi);

/* ---- simulation ------------------------------------------------------ */

/* phantom: "blocks" | "geometric" | "points".
 * kernel:  "gaussian:band:sigma" | "uniform:dr:dc" | "identity".
 * noise_percent >= 0 sets sigma = percent/100 * max noiseless LR value,
 * otherwise `sigma` is the absolute noise standard deviation. */
int ws_simulate(const char* phantom, int size, uint64_t seed,
                const char* kernel, int dr, int dc, int pixel_blur,
                double noise_percent, double sigma, ws_sim** out);
void ws_sim_free(ws_sim* sim);
const ws_image* ws_sim_truth(const ws_sim* sim);
const ws_image* ws_sim_observed(const ws_sim* sim);
double ws_sim_sigma(const ws_sim* sim);
/* "row,col" lines for points phantoms; empty string otherwise. */
const char* ws_sim_points_csv(const ws_sim* sim);

/* ---- reconstruction -------------------------------------------------- */

/* model:  "tik" | "tvi" | "tva" | "wtv" | "wl1" | "cel0".
 * select: "rwp" (noise-level-free) or "dp:<tau>:<sigma>".
 * truth may be NULL; when given, per-iteration ISNR/SSIM traces are kept. */
int ws_solve(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
             const char* model, const char* select, const ws_image* truth,
             ws_report** out);
void ws_report_free(ws_report* rep);
const ws_image* ws_report_x(const ws_report* rep);
double ws_report_mu_star(const ws_report* rep);
double ws_report_tau_star(const ws_report* rep);     /* -1 when sigma unknown */
int ws_report_iterations(const ws_report* rep);
int ws_report_converged(const ws_report* rep);
int ws_report_boundary_hit(const ws_report* rep);
const char* ws_report_traces_csv(const ws_report* rep);

/* ---- parameter sweep and model comparison ---------------------------- */

/* Fixed-mu reconstructions on a log grid of `count` points in [mu_lo, mu_hi].
 * CSV columns mu,tau,W,isnr,ssim; tau needs sigma > 0, isnr/ssim need truth
 * (blank otherwise).  threads <= 0 picks the hardware default.  *csv_out is
 * released with ws_string_free. */
int ws_sweep(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
             const char* model, double mu_lo, double mu_hi, int count,
             const ws_image* truth, double sigma, int threads, char** csv_out);

/* One row per (model, selection rule): rwp always, dp with tau = 1 when
 * sigma > 0.  models is comma-separated.  CSV columns
 * model,select,mu_star,tau_star,iterations,converged,psnr,isnr,ssim. */
int ws_compare(const ws_image* b, const char* kernel, int dr, int dc, int pixel_blur,
               const char* models, const ws_image* truth, double sigma,
               int threads, char** csv_out);

void ws_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
