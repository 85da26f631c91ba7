#include <stdio.h>
#include <string.h>
#include "soco.h"

static const double LOADS[] = {0, 4, 9, 3, 0, 6};

int main(int argc, char **argv) {
    if (argc < 2) return 2;
    FILE *f = fopen(argv[1], "rb");
    if (!f) return 2;
    static char model[1 << 16];
    size_t n = fread(model, 1, sizeof model - 1, f);
    fclose(f);
    model[n] = 0;

    SocoSession *s = NULL;
    if (soco_session_new(model, SOCO_KIND_SSCO, "{\"alg\":\"memoryless\"}", 4, 1, &s) != SOCO_STATUS_OK) {
        fprintf(stderr, "%s\n", soco_last_error());
        return 1;
    }
    double x[4], cost = 0;
    size_t d = 0;
    for (int t = 0; t < 6; t++) {
        if (soco_session_step(s, &LOADS[t], 1, NULL, x, 4, &d, &cost) != SOCO_STATUS_OK) {
            fprintf(stderr, "%s\n", soco_last_error());
            return 1;
        }
    }
    if (soco_session_slot(s) != 6 || d != 1 || !(cost > 0)) return 1;
    if (soco_session_new(model, SOCO_KIND_SSCO, "not json", 4, 1, &s) != SOCO_STATUS_PARSE_ERROR) return 1;
    if (strlen(soco_last_error()) == 0) return 1;
    soco_session_free(s);
    printf("%zu %f\n", d, cost);
    return 0;
}
