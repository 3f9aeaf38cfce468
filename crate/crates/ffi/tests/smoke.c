#include <stdio.h>
#include <string.h>
#include "toric_diagonal.h"

static const char *P2 = "{\"dim\":2,\"rays\":[[1,0],[0,1],[-1,-1]],\"max_cones\":[[0,1],[1,2],[2,0]]}";

int main(void) {
    TdFan *fan = NULL;
    TdPipeline *p = NULL;
    size_t f[4], len = 0, h0 = 9, h1 = 9;
    bool ok = false, exact = false, resolves = false;

    if (td_fan_from_json(P2, &fan) != TD_STATUS_OK) return 1;
    if (td_pipeline_new(fan, NULL, NULL, 0, &p) != TD_STATUS_OK) return 2;
    if (td_pipeline_f_vector(p, f, 4, &len) != TD_STATUS_OK || len != 3) return 3;
    if (f[0] != 1 || f[1] != 3 || f[2] != 2) return 4;
    if (td_pipeline_verify_d_squared(p, &ok) != TD_STATUS_OK || !ok) return 5;
    if (td_pipeline_exactness(p, &exact, &resolves) != TD_STATUS_OK || !exact || !resolves) return 6;
    if (td_cech_h_dims(1, 2, -2, &h0, &h1) != TD_STATUS_OK || h0 != 0 || h1 != 0) return 7;
    if (td_cech_h_dims(2, 4, 0, &h0, &h1) != TD_STATUS_INVALID_INPUT) return 8;
    if (strstr(td_last_error(), "coprime") == NULL) return 9;

    td_pipeline_free(p);
    td_fan_free(fan);
    printf("ok\n");
    return 0;
}
