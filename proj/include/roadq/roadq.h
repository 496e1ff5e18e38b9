/*
 * roadq: stationary analysis of finite-capacity road sections modeled as
 * state-dependent M/g/c/c queues.
 *
 * Every call that can fail returns a roadq_status. On failure a message is
 * available from roadq_last_error() on the calling thread until the next
 * failing call. Handles are opaque and owned by the caller; release them
 * with the matching *_destroy function. Output handles are only written on
 * success.
 */
#ifndef ROADQ_ROADQ_H
#define ROADQ_ROADQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  ifdef ROADQ_BUILDING
#    define ROADQ_API __declspec(dllexport)
#  else
#    define ROADQ_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) || defined(__clang__)
#  define ROADQ_API __attribute__((visibility("default")))
#else
#  define ROADQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum roadq_status {
  ROADQ_OK = 0,
  ROADQ_E_INVALID_ARGUMENT = 1, /* out-of-domain value or null pointer */
  ROADQ_E_CONFIG = 2,           /* config document failed validation */
  ROADQ_E_SINGULAR = 3,         /* zero service rate with positive arrivals */
  ROADQ_E_CONVERGENCE = 4,      /* fixed point did not reach tolerance */
  ROADQ_E_ORACLE = 5,           /* exact CTMC solve failed its checks */
  ROADQ_E_IO = 6,
  ROADQ_E_INTERNAL = 7
} roadq_status;

typedef enum roadq_convention { ROADQ_CONVENTION_SHIFTED = 0, ROADQ_CONVENTION_EXACT = 1 } roadq_convention;

typedef enum roadq_model {
  ROADQ_MODEL_TRIANGULAR = 0,
  ROADQ_MODEL_LINEAR = 1,
  ROADQ_MODEL_EXPONENTIAL = 2
} roadq_model;

typedef enum roadq_kind { ROADQ_KIND_SPEED = 0, ROADQ_KIND_TRAVEL_TIME = 1 } roadq_kind;

typedef enum roadq_grid_mode { ROADQ_MODE_PUSHFORWARD = 0, ROADQ_MODE_PAPER_GRID = 1 } roadq_grid_mode;

/* Which occupancy law feeds a triangular speed/time distribution. */
typedef enum roadq_source { ROADQ_SOURCE_SECTION = 0, ROADQ_SOURCE_TANDEM = 1 } roadq_source;

typedef struct roadq_scenario roadq_scenario;
typedef struct roadq_dist roadq_dist;

typedef struct roadq_section_info {
  double length;           /* m */
  double free_speed;       /* m/s */
  double wave_speed;       /* m/s */
  double jam_density;      /* veh/m */
  double max_flow;         /* veh/s, derived */
  double critical_density; /* veh/m, derived */
  int capacity;
  int critical_count;
} roadq_section_info;

typedef struct roadq_measures {
  double blocking;
  double throughput;           /* lambda (1 - P_c) */
  double throughput_departure; /* sum q_n P_n */
  double expected_count;
  double travel_time;
  int travel_time_is_free_flow; /* zero throughput: travel_time = L / v_f */
} roadq_measures;

typedef struct roadq_tandem_result {
  double theta;
  double residual;
  double bracket_lo;
  double bracket_hi;
  int iterations;
  roadq_measures measures;
} roadq_tandem_result;

typedef struct roadq_sim_info {
  uint64_t events;
  uint64_t seed;
  uint64_t blocked_arrivals;
  double elapsed_model_time;
  int absorbed;
  const char* rng_algorithm; /* static string */
} roadq_sim_info;

ROADQ_API const char* roadq_version(void);
ROADQ_API const char* roadq_last_error(void);
ROADQ_API const char* roadq_status_name(roadq_status status);

/* ---- scenarios ---- */
ROADQ_API roadq_status roadq_scenario_parse(const char* json_text, roadq_scenario** out);
ROADQ_API roadq_status roadq_scenario_load(const char* path, roadq_scenario** out);
ROADQ_API roadq_status roadq_scenario_reference(roadq_scenario** out);
ROADQ_API void roadq_scenario_destroy(roadq_scenario* scenario);
/* Canonical JSON; release with roadq_string_free. */
ROADQ_API roadq_status roadq_scenario_to_json(const roadq_scenario* scenario, char** out);
ROADQ_API void roadq_string_free(char* text);

ROADQ_API size_t roadq_scenario_section_count(const roadq_scenario* scenario);
ROADQ_API roadq_status roadq_scenario_section(const roadq_scenario* scenario, size_t index, roadq_section_info* out);
ROADQ_API roadq_status roadq_scenario_set_convention(roadq_scenario* scenario, roadq_convention convention);
ROADQ_API roadq_convention roadq_scenario_convention(const roadq_scenario* scenario);
ROADQ_API roadq_status roadq_scenario_set_model(roadq_scenario* scenario, roadq_model model);
ROADQ_API roadq_model roadq_scenario_model(const roadq_scenario* scenario);
ROADQ_API roadq_status roadq_scenario_set_exponential(roadq_scenario* scenario, double beta, double gamma);
/* Returns 1 and writes *lambda when the document carries one. */
ROADQ_API int roadq_scenario_lambda(const roadq_scenario* scenario, double* lambda);
ROADQ_API int roadq_scenario_sweep(const roadq_scenario* scenario, double* from, double* to, int* steps);

/* ---- single section ---- */
ROADQ_API roadq_status roadq_service_rate(const roadq_scenario* scenario, size_t section, int n, double* out);
/* model = triangular | linear | exponential for the given section. */
ROADQ_API roadq_status roadq_solve_section(const roadq_scenario* scenario, size_t section, roadq_model model,
                                           double lambda, roadq_dist** occupancy, roadq_measures* measures);

/* ---- downstream-supply model (two sections) ----
 * On ROADQ_E_CONVERGENCE, *result (if given) still holds the final bracket,
 * its midpoint as theta and the residual there; measures are zeroed. */
ROADQ_API roadq_status roadq_solve_tandem(const roadq_scenario* scenario, double lambda, double tolerance,
                                          int max_iterations, roadq_tandem_result* result, roadq_dist** marginal,
                                          roadq_dist** downstream);
/* Writes up to capacity roots; *count receives the total found. */
ROADQ_API roadq_status roadq_tandem_roots(const roadq_scenario* scenario, double lambda, int grid_points,
                                          double tolerance, double* roots, size_t capacity, size_t* count);
/* Section-1 marginal of the full joint CTMC. */
ROADQ_API roadq_status roadq_tandem_exact_marginal(const roadq_scenario* scenario, double lambda, roadq_dist** out);

/* ---- oracles ---- */
ROADQ_API roadq_status roadq_section_exact(const roadq_scenario* scenario, size_t section, roadq_model model,
                                           double lambda, roadq_dist** out);
ROADQ_API roadq_status roadq_simulate(const roadq_scenario* scenario, size_t section, roadq_model model,
                                      double lambda, uint64_t events, uint64_t seed, roadq_dist** out,
                                      roadq_sim_info* info);

/* ---- speed and travel-time distributions ----
 * triangular: pushforward of the section-1 occupancy (source selects the
 *             single-section or downstream-supply law); mode must be pushforward.
 * linear:     Jain-Smith linear model on section 1, pushforward or paper grid.
 * *truncated (may be null) is set when the paper grid stops short of v_f or L. */
ROADQ_API roadq_status roadq_distribution(const roadq_scenario* scenario, roadq_model model, roadq_source source,
                                          roadq_kind kind, roadq_grid_mode mode, double lambda, roadq_dist** out,
                                          int* truncated);

ROADQ_API roadq_status roadq_fit_exponential(double free_speed, double a, double speed_a, double b, double speed_b,
                                             double* beta, double* gamma);

/* ---- distributions ----
 * Occupancy laws have values 0..c. */
ROADQ_API size_t roadq_dist_size(const roadq_dist* dist);
ROADQ_API const double* roadq_dist_values(const roadq_dist* dist);
ROADQ_API const double* roadq_dist_probs(const roadq_dist* dist);
ROADQ_API double roadq_dist_mean(const roadq_dist* dist);
ROADQ_API roadq_status roadq_tv_distance(const roadq_dist* p, const roadq_dist* q, double* out);
ROADQ_API void roadq_dist_destroy(roadq_dist* dist);

#ifdef __cplusplus
}
#endif

#endif /* ROADQ_ROADQ_H */
