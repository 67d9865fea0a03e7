#include <stdio.h>
#include <string.h>

#include "qconcave.h"

#define CHECK(call)                                                            \
  do {                                                                         \
    QcStatus s_ = (call);                                                      \
    if (s_ != QC_STATUS_OK) {                                                  \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,                        \
              qc_last_error_message());                                        \
      return 1;                                                                \
    }                                                                          \
  } while (0)

int main(void) {
  const double up[3] = {0.0, 0.0, 1.0};
  const double down[3] = {0.0, 0.0, -1.0};
  QcDensity *a = NULL, *b = NULL;
  QcProblem *p = NULL;
  QcReport *r = NULL;
  double gap = 0.0, kim = 0.0;
  bool ok = false;
  char *json = NULL;

  CHECK(qc_density_from_bloch(up, &a));
  CHECK(qc_density_from_bloch(down, &b));
  CHECK(qc_problem_new(0.5, a, b, &p));
  CHECK(qc_report_new(p, 1e-9, &r));
  CHECK(qc_report_get(r, QC_QUANTITY_GAP, &gap));
  CHECK(qc_report_checks_ok(r, QC_CHECKS_ALL, &ok));
  CHECK(qc_report_to_json(r, &json));
  if (qc_report_get(r, QC_QUANTITY_LOWBD0, &kim) != QC_STATUS_NOT_APPLICABLE) {
    return 1;
  }
  printf("gap %.15f ok %d json %zu\n", gap, (int)ok, strlen(json));

  qc_string_free(json);
  qc_report_free(r);
  qc_problem_free(p);
  qc_density_free(a);
  qc_density_free(b);
  return ok ? 0 : 1;
}
