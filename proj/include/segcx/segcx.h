#ifndef SEGCX_SEGCX_H
#define SEGCX_SEGCX_H

#include <stddef.h>
#include <stdint.h>

#if defined(SEGCX_BUILDING)
#define SEGCX_API __attribute__((visibility("default")))
#else
#define SEGCX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum segcx_status {
  SEGCX_OK = 0,
  SEGCX_E_INVALID_ARGUMENT,
  SEGCX_E_INVALID_CONFIG,
  SEGCX_E_USAGE,
  SEGCX_E_MISSING_FILE,
  SEGCX_E_IO,
  SEGCX_E_CORRUPT_PNG,
  SEGCX_E_DIMENSION_MISMATCH,
  SEGCX_E_DUPLICATE_ID,
  SEGCX_E_EMPTY_MASK,
  SEGCX_E_EMPTY_REGION,
  SEGCX_E_DISCONNECTED,
  SEGCX_E_EMPTY_DOMAIN,
  SEGCX_E_EMPTY_AFTER_EROSION,
  SEGCX_E_TOO_FEW_OBJECTS,
  SEGCX_E_EMPTY_SIDE,
  SEGCX_E_NO_REGIONS,
  SEGCX_E_EMPTY_BACKGROUND,
  SEGCX_E_BANK_TOO_SMALL,
  SEGCX_E_BANK_MISSING,
  SEGCX_E_INVALID_SPEC,
  SEGCX_E_OBJECT_VANISHED,
  SEGCX_E_NO_SCENES,
  SEGCX_E_INTERNAL
} segcx_status;

/* Name of a status code, e.g. "EmptyAfterErosion". */
SEGCX_API const char* segcx_status_name(segcx_status status);

/* Nonzero for statuses caused by bad command-line input rather than data. */
SEGCX_API int segcx_status_is_usage(segcx_status status);

/* Message of the last failure on the calling thread ("" if none). */
SEGCX_API const char* segcx_last_error(void);

SEGCX_API const char* segcx_version(void);

/* ---- datasets and scenes ---------------------------------------------- */

typedef struct segcx_dataset segcx_dataset;
typedef struct segcx_scene segcx_scene;

SEGCX_API segcx_status segcx_dataset_open(const char* root, segcx_dataset** out);
SEGCX_API void segcx_dataset_close(segcx_dataset* dataset);
SEGCX_API size_t segcx_dataset_size(const segcx_dataset* dataset);
/* Borrowed pointer, valid until the dataset is closed. */
SEGCX_API const char* segcx_dataset_scene_id(const segcx_dataset* dataset, size_t index);

SEGCX_API segcx_status segcx_scene_load(const segcx_dataset* dataset, size_t index, segcx_scene** out);
SEGCX_API void segcx_scene_free(segcx_scene* scene);
SEGCX_API void segcx_scene_size(const segcx_scene* scene, int* width, int* height);
SEGCX_API size_t segcx_scene_object_count(const segcx_scene* scene);
SEGCX_API uint16_t segcx_scene_object_id(const segcx_scene* scene, size_t index);

/* ---- factors ----------------------------------------------------------- */

SEGCX_API segcx_status segcx_object_color_gradient(const segcx_scene* scene, size_t object, double* out);
SEGCX_API segcx_status segcx_object_shape_concavity(const segcx_scene* scene, size_t object, double* out);
SEGCX_API segcx_status segcx_scene_color_similarity(const segcx_scene* scene, double* out);
SEGCX_API segcx_status segcx_scene_shape_variation(const segcx_scene* scene, double* out);
SEGCX_API segcx_status segcx_bg_color_gradient(const segcx_scene* scene, double* out);
SEGCX_API segcx_status segcx_bg_fg_color_similarity(const segcx_scene* scene, size_t budget, uint64_t seed,
                                                    double* out);
SEGCX_API segcx_status segcx_bg_shape_irregularity(const segcx_scene* scene, double* out);

/* ---- corpus commands --------------------------------------------------- */

typedef struct segcx_prepare_options {
  int crop_size; /* <= 0: largest centered square */
  int target_size;
  int min_objects;
  int max_objects;
  int area_filter;
  double min_area_fraction;
  double max_area_fraction;
  int blank_background;
  double test_fraction; /* < 0: no split, everything goes to `split` */
  const char* split;    /* "train" or "test" */
  int jobs;
} segcx_prepare_options;

SEGCX_API void segcx_prepare_options_init(segcx_prepare_options* options);
/* `kept` (optional) receives the number of scenes written. */
SEGCX_API segcx_status segcx_prepare(const char* raw_dir, const char* out_dir, const segcx_prepare_options* options,
                                     size_t* kept);

typedef struct segcx_analyze_options {
  const char* factors; /* object,scene,background,candidates or all */
  int bins;
  size_t hungarian_budget;
  uint64_t seed;
  int jobs;
} segcx_analyze_options;

SEGCX_API void segcx_analyze_options_init(segcx_analyze_options* options);
/* Writes the JSON report to `json_path` and, when non-NULL, per-sample CSV. */
SEGCX_API segcx_status segcx_analyze(const segcx_dataset* dataset, const segcx_analyze_options* options,
                                     const char* json_path, const char* csv_path);

typedef struct segcx_ablate_options {
  const char* ops;          /* C,S,T,U,bgC,bgT,bgS */
  const char* texture_dir;  /* NULL: built-in bank */
  uint64_t seed;
  int jobs;
} segcx_ablate_options;

SEGCX_API void segcx_ablate_options_init(segcx_ablate_options* options);
SEGCX_API segcx_status segcx_ablate(const segcx_dataset* dataset, const segcx_ablate_options* options,
                                    const char* out_dir);

typedef struct segcx_evaluate_options {
  const char* metrics; /* ap,pq,pr,ari,fgari,arp-arr,mbo,bg-recall or all */
  double iou_threshold;
  int jobs;
} segcx_evaluate_options;

SEGCX_API void segcx_evaluate_options_init(segcx_evaluate_options* options);
SEGCX_API segcx_status segcx_evaluate(const segcx_dataset* dataset, const char* pred_dir,
                                      const segcx_evaluate_options* options, const char* json_path);

/* kind: "dsprites" or "realistic". */
SEGCX_API segcx_status segcx_generate(const char* kind, size_t count, int width, int height, uint64_t seed, int jobs,
                                      const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
