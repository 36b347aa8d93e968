/* cc -Icrates/ffi/include crates/ffi/examples/value.c target/release/libweingarten_ffi.a -lm -lpthread -ldl -o wg_value */
#include <stdio.h>
#include "weingarten.h"

int main(void) {
    char buf[128];
    WgEngine *eng = wg_engine_new();
    WgStatus st = wg_value(eng, "u", "2,1", 5, 0, false, false, buf, sizeof buf, NULL);
    if (st != WG_STATUS_OK) {
        wg_last_error(buf, sizeof buf);
        fprintf(stderr, "error %d: %s\n", (int)st, buf);
        wg_engine_free(eng);
        return 1;
    }
    printf("Wg^U([2,1], 5) = %s\n", buf);
    wg_engine_free(eng);
    return 0;
}
