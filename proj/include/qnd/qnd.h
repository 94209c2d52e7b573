/* C API for the non-destructive dispersive detection toolkit.
 *
 * All entry points return a qnd_status; on failure qnd_last_error() gives a
 * thread-local description of the most recent error. Output paths may be "-"
 * for standard output. Handles are opaque and freed with their _free call.
 */
#ifndef QND_QND_H_
#define QND_QND_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qnd_status {
  QND_OK = 0,
  QND_ERR_USAGE = 2,   /* invalid arguments */
  QND_ERR_CONFIG = 3,  /* config file / override errors */
  QND_ERR_RUNTIME = 4, /* evaluation errors */
} qnd_status;

typedef struct qnd_config qnd_config;

/* Message describing the most recent failure on this thread. */
const char* qnd_last_error(void);

/* Configuration ---------------------------------------------------------- */

/* New handle with shipped defaults. */
qnd_status qnd_config_create(qnd_config** out);
/* New handle from an INI-style config file. */
qnd_status qnd_config_load(const char* path, qnd_config** out);
/* Apply one "section.key" override. */
qnd_status qnd_config_set(qnd_config* config, const char* key,
                          const char* value);
/* Canonical serialization into a caller buffer; *size is in/out. */
qnd_status qnd_config_serialize(const qnd_config* config, char* buffer,
                                size_t* size);
void qnd_config_free(qnd_config* config);

/* Commands (CSV writers) ------------------------------------------------- */

qnd_status qnd_cmd_phase_spectrum(const qnd_config* config, double min_mhz,
                                  double max_mhz, double step_mhz,
                                  const char* out_path);

qnd_status qnd_cmd_noise_psd(const qnd_config* config,
                             const double* detected_powers_nw, size_t count,
                             uint64_t seed, const char* out_path);

/* fit_csv_path may be NULL. */
qnd_status qnd_cmd_retention(const qnd_config* config, double min_er,
                             double max_er, double step_er,
                             const char* fit_csv_path, const char* out_path);

qnd_status qnd_cmd_snr_map(const qnd_config* config, double min_mhz,
                           double max_mhz, double min_depth, double max_depth,
                           const char* out_path);

/* probabilities may be NULL/0 for population-only batches. */
qnd_status qnd_cmd_cycle(const qnd_config* config, const double* atom_numbers,
                         size_t n_atom_numbers, const double* probabilities,
                         size_t n_probabilities, int trials, uint64_t seed,
                         int jobs, const char* out_path);

/* Scalar helpers --------------------------------------------------------- */

/* Wigner symbols over twice-valued angular momenta. On success *out is the
 * floating value; if exact/exact_size are non-NULL the exact form
 * "[-]sqrt(num/den)" is copied into exact (size in/out). */
qnd_status qnd_wigner3j(int two_j1, int two_j2, int two_j3, int two_m1,
                        int two_m2, int two_m3, double* out, char* exact,
                        size_t* exact_size);
qnd_status qnd_wigner6j(int two_j1, int two_j2, int two_j3, int two_j4,
                        int two_j5, int two_j6, double* out, char* exact,
                        size_t* exact_size);

/* Dispersive phase shift (rad) at a probe detuning from the manifold
 * reference, for the configured populations. */
qnd_status qnd_phase_shift(const qnd_config* config, double detuning_hz,
                           double* out);

/* Photons absorbed per atom per pulse for the configured probe. */
qnd_status qnd_absorbed_photons(const qnd_config* config, double* out);

/* Lattice retention fraction after absorbing n_gamma photons per atom. */
qnd_status qnd_retention_fraction(double depth_recoils, double n_gamma,
                                  double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QND_QND_H_ */
