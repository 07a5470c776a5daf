/*
 * dduffing: lifted periodic orbits of the delayed Duffing equation
 *
 *     x''(t) + x(t - T) + x(t)^3 = 0
 *
 * C interface. Every function that can fail returns a dd_status; on failure
 * dd_last_error() holds a message for the calling thread. Objects behind
 * opaque pointers are immutable once created and may be shared between
 * threads; release them with the matching *_free function.
 */
#ifndef DDUFFING_H
#define DDUFFING_H

#include <stddef.h>

#if defined(DDUFFING_BUILDING_LIBRARY)
#define DD_API __attribute__((visibility("default")))
#else
#define DD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dd_status {
    DD_OK = 0,
    DD_ERR_INVALID_ARGUMENT = 1, /* bad configuration or violated precondition */
    DD_ERR_DOMAIN = 2,           /* outside the mathematical domain */
    DD_ERR_NO_SOLUTION = 3,      /* no lifted orbit for (T, n) */
    DD_ERR_NUMERICAL = 4,        /* iteration failure */
    DD_ERR_DIVERGED = 5,         /* DDE state became non-finite */
    DD_ERR_RANGE = 6,            /* query outside stored range */
    DD_ERR_IO = 7,
    DD_ERR_INTERNAL = 8
} dd_status;

typedef enum dd_parity { DD_PARITY_EVEN = 0, DD_PARITY_ODD = 1 } dd_parity;

typedef struct dd_orbit dd_orbit;
typedef struct dd_trajectory dd_trajectory;

DD_API const char* dd_version(void);
DD_API const char* dd_last_error(void);
DD_API const char* dd_status_string(dd_status status);

/* --- special functions --------------------------------------------------- */

DD_API dd_status dd_elliptic_k(double m, double* out);
DD_API dd_status dd_jacobi_cn_sn_dn(double u, double m, double* cn, double* sn, double* dn);
DD_API double dd_gamma_quarter_squared(void);

/* --- Duffing orbits ------------------------------------------------------ */

DD_API dd_parity dd_parity_of(int n);
DD_API dd_status dd_modulus_frequency(double amplitude, dd_parity parity, double* m, double* omega);
DD_API dd_status dd_minimal_period(double amplitude, dd_parity parity, double* out);
DD_API double dd_energy(double x, double xdot, dd_parity parity);

typedef struct dd_orbit_info {
    int n;
    dd_parity parity;
    double delay;
    double amplitude;
    double modulus;
    double omega;
    double period;
    double energy;
    int boundary_warning; /* even n with A below 1e-8 */
} dd_orbit_info;

/* Lifted orbit x_n for delay T, amplitude from the implicit period equation. */
DD_API dd_status dd_orbit_solve(double delay, int n, dd_orbit** out);
/* Explicit factories: `lifted` checks 4K/omega = 2T/n, `candidate` does not. */
DD_API dd_status dd_orbit_lifted(int n, double delay, double amplitude, dd_orbit** out);
DD_API dd_status dd_orbit_candidate(int n, double delay, double amplitude, dd_orbit** out);
DD_API void dd_orbit_free(dd_orbit* orbit);

DD_API dd_status dd_orbit_get_info(const dd_orbit* orbit, dd_orbit_info* out);
DD_API dd_status dd_orbit_state(const dd_orbit* orbit, double t, double* x, double* xdot);
DD_API dd_status dd_orbit_lift_residual(const dd_orbit* orbit, int sample_count, double* dde_residual,
                                        double* shift_residual);
DD_API dd_status dd_orbit_distance(const dd_orbit* orbit, double x, double xdot, double* out);

/* --- amplitude series ---------------------------------------------------- */

/* p(A) truncated after A^-max_power, max_power in {1, 3, ..., 11}. */
DD_API dd_status dd_series_period(double amplitude, dd_parity parity, int max_power, double* out);
/* A(p) truncated after p^max_power, max_power in {-1, 1, ..., 9}. */
DD_API dd_status dd_series_amplitude(double period, dd_parity parity, int max_power, double* out);
DD_API dd_status dd_shared_amplitude(double delay, int n, double delay2, int n2, int* out);

/* --- DDE integration ----------------------------------------------------- */

typedef enum dd_history_kind {
    DD_HISTORY_ELLIPTIC_CN = 0,
    DD_HISTORY_TABULATED = 1,
    DD_HISTORY_CONSTANT = 2
} dd_history_kind;

typedef struct dd_history {
    dd_history_kind kind;
    /* elliptic_cn */
    double amplitude;
    dd_parity parity;
    /* tabulated: count samples on [-T, 0], t strictly increasing */
    const double* t;
    const double* x;
    const double* xdot;
    size_t count;
    /* constant */
    double x0;
    double xdot0;
} dd_history;

typedef struct dd_solver_config {
    double max_step;
    double t_end;
    double abs_tol;
    double rel_tol;
    int breakpoint_count;
} dd_solver_config;

DD_API void dd_solver_config_default(dd_solver_config* config);

/* On DD_ERR_DIVERGED *out still receives the trajectory up to the last
 * finite step, and must be freed. */
DD_API dd_status dd_integrate(double delay, const dd_history* history, const dd_solver_config* config,
                              dd_trajectory** out);
DD_API void dd_trajectory_free(dd_trajectory* trajectory);

DD_API double dd_trajectory_t_end(const dd_trajectory* trajectory);
DD_API size_t dd_trajectory_step_count(const dd_trajectory* trajectory);
DD_API dd_status dd_trajectory_state_at(const dd_trajectory* trajectory, double t, double* x, double* xdot);
DD_API dd_status dd_trajectory_tail_amplitude(const dd_trajectory* trajectory, double window, double* out);
/* CSV with header "t,x,xdot", one row per stride-th accepted step. */
DD_API dd_status dd_trajectory_write_csv(const dd_trajectory* trajectory, const char* path, size_t stride);

/* --- stability experiments ----------------------------------------------- */

typedef enum dd_outcome { DD_CONVERGED_TO = 0, DD_ESCAPED_FROM = 1, DD_UNDECIDED = 2 } dd_outcome;

typedef struct dd_probe_options {
    double max_step;
    double abs_tol;
    double rel_tol;
    double sample_interval;
    double conv_tol;
    double amp_tol;
    double seed_tol;
    double escape_floor;
} dd_probe_options;

DD_API void dd_probe_options_default(dd_probe_options* options);
DD_API void dd_floquet_options_default(dd_probe_options* options);

typedef struct dd_verdict {
    dd_outcome outcome;
    int target_n;
    double target_amplitude;
    double initial_distance;
    double final_distance;
    double peak_distance;
    double escape_time; /* negative if never */
    double final_amplitude;
    int blew_up;
} dd_verdict;

typedef struct dd_floquet {
    double eta;
    double log_multiplier;
    double fit_start;
    double fit_end;
    double fit_residual;
    int predicted_sign;
    int decided;
    size_t fit_points;
} dd_floquet;

/* options may be NULL for defaults. */
DD_API dd_status dd_convergence_probe(double delay, double initial_amplitude, int target_n, double t_end,
                                      const dd_probe_options* options, dd_verdict* out);
DD_API dd_status dd_heteroclinic_probe(double delay, int near_n, double offset, int target_n, double t_end,
                                       const dd_probe_options* options, double* initial_amplitude,
                                       dd_verdict* departure, dd_verdict* arrival);
DD_API dd_status dd_floquet_estimate(double delay, int n, double perturbation, double t_end,
                                     const dd_probe_options* options, dd_floquet* out);
DD_API dd_status dd_stability_region(double delay, int* out);

typedef struct dd_probe_record {
    double delay;
    int n;
    double initial_amplitude;
    dd_outcome outcome;
    double final_amplitude;
    double eta;
    double fit_residual;
} dd_probe_record;

/* JSON object {T, n, initial_A, outcome, final_amplitude, eta, fit_residual}.
 * Returns NULL on failure; release with dd_string_free. */
DD_API char* dd_probe_record_json(const dd_probe_record* record);
DD_API void dd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DDUFFING_H */
