/* cc examples/smoke.c -Iinclude -L../../target/release -l:libweaktype_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "weaktype.h"

int main(void) {
    WtFunction *f = NULL;
    if (wt_function_from_selector("F:10:1", &f) != WT_STATUS_OK) {
        fprintf(stderr, "%s\n", wt_last_error());
        return 1;
    }
    WtEnclosure enc;
    char *exact = NULL;
    WtStatus st = wt_weak_norm(f, "1e-6", 0, &enc, &exact);
    if (st != WT_STATUS_OK && st != WT_STATUS_INCONCLUSIVE) {
        fprintf(stderr, "%s\n", wt_last_error());
        wt_function_free(f);
        return 1;
    }
    printf("||F_1||  in [%.10f, %.10f]  exact ends %s\n", enc.lo, enc.hi, exact);
    wt_string_free(exact);
    wt_function_free(f);
    return st == WT_STATUS_OK ? 0 : 2;
}
