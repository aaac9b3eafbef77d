/* C interface to the roughdyn library: opaque handles + status codes.
 * All functions are thread-compatible; the last error message is
 * thread-local.  Arrays are row-major doubles. */

#ifndef ROUGHDYN_H_
#define ROUGHDYN_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rd_status {
  RD_OK = 0,
  RD_ERR_INVALID_ARGUMENT = 1,
  RD_ERR_DOMAIN = 2,
  RD_ERR_OUT_OF_RANGE = 3,
  RD_ERR_UNSUPPORTED = 4,
  RD_ERR_SAMPLER = 5,
  RD_ERR_DIVERGENCE = 6,
  RD_ERR_CONFIG = 7,
  RD_ERR_IO = 8,
  RD_ERR_INTERNAL = 9
} rd_status;

const char* rd_status_name(rd_status s);
/* Message for the most recent failure on this thread ("" if none). */
const char* rd_last_error(void);
const char* rd_version(void);

typedef struct rd_grid rd_grid;
typedef struct rd_rough_path rd_rough_path;
typedef struct rd_config rd_config;

/* ---- grids ---- */
rd_status rd_grid_uniform(double t0, double t1, int64_t n_steps, rd_grid** out);
rd_status rd_grid_from_points(const double* points, int64_t n_points, rd_grid** out);
int64_t rd_grid_nodes(const rd_grid* g);
rd_status rd_grid_point(const rd_grid* g, int64_t i, double* out);
void rd_grid_free(rd_grid* g);

/* ---- sampling and lifting ---- */
/* Node values, (n_nodes x dim) row-major, first row zero. */
rd_status rd_fbm_sample(const rd_grid* g, int dim, double hurst, uint64_t seed,
                        double* out_values);
rd_status rd_fbm_rough(const rd_grid* g, int dim, double hurst, uint64_t seed,
                       int lift_level, double p, rd_rough_path** out);
rd_status rd_lift_linear(const rd_grid* g, int dim, const double* values, double p,
                         rd_rough_path** out);
void rd_rough_path_free(rd_rough_path* rp);

int rd_rough_path_dim(const rd_rough_path* rp);
int64_t rd_rough_path_nodes(const rd_rough_path* rp);
double rd_rough_path_p(const rd_rough_path* rp);
/* x_out: dim entries; xx_out: dim*dim row-major (pass NULL to skip either). */
rd_status rd_rough_path_increment(const rd_rough_path* rp, double s, double t,
                                  double* x_out, double* xx_out);
rd_status rd_rough_path_chen_defect(const rd_rough_path* rp, double s, double u, double t,
                                    double* xx_out);
rd_status rd_rough_path_shift(const rd_rough_path* rp, double h, rd_rough_path** out);
rd_status rd_rough_path_save(const rd_rough_path* rp, const char* path, int hex_exact);
rd_status rd_rough_path_load(const char* path, rd_rough_path** out);

/* ---- variation norms ---- */
rd_status rd_pvar_first(const rd_rough_path* rp, double p, double a, double b, double* out);
rd_status rd_qvar_second(const rd_rough_path* rp, double q, double a, double b, double* out);
rd_status rd_rough_pvar(const rd_rough_path* rp, double p, double a, double b, double* out);
rd_status rd_holder_norm(const rd_rough_path* rp, double alpha, double a, double b,
                         double* out);
/* times_out may be NULL; *times_len receives the count actually written. */
rd_status rd_greedy_times(const rd_rough_path* rp, double gamma, double p, double a,
                          double b, int64_t* count, double* count_bound, double* times_out,
                          int64_t times_cap, int64_t* times_len);
/* NaN on p outside (2,3). */
double rd_sewing_constant(double p);
/* +inf when c_g == 0. */
double rd_default_gamma(double c_p, double c_g);

/* ---- configuration and experiments ---- */
rd_status rd_config_parse_file(const char* path, rd_config** out);
rd_status rd_config_parse_text(const char* text, rd_config** out);
rd_status rd_config_set(rd_config* cfg, const char* key, const char* value);
void rd_config_free(rd_config* cfg);

/* Reports are heap JSON strings; release with rd_string_free. */
rd_status rd_validate(const rd_config* cfg, char** report_json);
rd_status rd_run(const rd_config* cfg, const char* out_dir, int force, int no_timestamp,
                 char** report_json);
void rd_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ROUGHDYN_H_ */
