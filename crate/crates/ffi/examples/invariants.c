/* cc -I crates/ffi/include crates/ffi/examples/invariants.c target/debug/librephom_ffi.a -lpthread -ldl -lm */
#include <stdio.h>

#include "rephom.h"

int main(void) {
    RephomSpace *sp = NULL;
    RephomGroup *g = NULL;
    RephomReport *r = NULL;
    if (rephom_space_parse("cp:2", &sp) != REPHOM_STATUS_OK || rephom_group_new("sl2", &g) != REPHOM_STATUS_OK) {
        char *e = rephom_last_error();
        fprintf(stderr, "%s\n", e ? e : "unknown error");
        rephom_string_free(e);
        return 2;
    }
    RephomStatus s = rephom_compute(sp, g, 12, 1, &r);
    if (s != REPHOM_STATUS_OK) {
        char *e = rephom_last_error();
        fprintf(stderr, "%s\n", e ? e : "unknown error");
        rephom_string_free(e);
        return (int)s;
    }
    char *json = rephom_report_json(r);
    printf("%s\n", json);
    rephom_string_free(json);
    if (rephom_space_parse("klein", &sp) == REPHOM_STATUS_INPUT_ERROR) {
        char *e = rephom_last_error();
        printf("%s\n", e);
        rephom_string_free(e);
    }
    rephom_report_free(r);
    rephom_group_free(g);
    rephom_space_free(sp);
    return 0;
}
