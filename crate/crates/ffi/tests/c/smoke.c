#include <stdio.h>
#include <string.h>

#include "hyperorbit.h"

int main(void) {
    HoPresentation *g = NULL;
    HoReport *r = NULL;
    HoConfig cfg;
    HoVerdict v;
    double w[4];
    size_t needed = 0;

    if (ho_config_default(&cfg) != HO_STATUS_OK) return 10;
    if (ho_presentation_example(0, &g) != HO_STATUS_OK) return 11;
    if (ho_decide(g, &cfg, &r) != HO_STATUS_OK) return 12;
    if (ho_report_verdict(r, &v) != HO_STATUS_OK || v != HO_VERDICT_HYPERCYCLIC) return 13;
    if (ho_report_witness(r, w, 4, &needed) != HO_STATUS_OK || needed != 4) return 14;
    if (w[0] != 0.0 || w[1] != 0.0 || w[2] != 1.0 || w[3] != 0.0) return 15;
    if (strstr(ho_report_json(r), "\"HYPERCYCLIC\"") == NULL) return 16;
    ho_report_free(r);
    ho_presentation_free(g);

    if (ho_presentation_from_json("{\"n\": 1,", &g) != HO_STATUS_PARSE_ERROR) return 17;
    if (ho_last_error() == NULL) return 18;
    printf("ok %s\n", ho_version());
    return 0;
}
