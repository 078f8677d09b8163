#include <stdio.h>
#include <string.h>
#include "polymu.h"

static int fail(const char *what) {
    const char *e = polymu_last_error();
    fprintf(stderr, "%s: %s\n", what, e ? e : "(no message)");
    return 1;
}

int main(void) {
    PolymuFormula *phi = NULL;
    PolymuLts *lts = NULL;
    bool verdict = false;
    size_t tuple[1] = {0};

    if (polymu_formula_parse("mu X. (p(1) | <a>_1 X)", &phi) != POLYMU_STATUS_OK) return fail("parse");
    if (polymu_lts_parse("states 2\ninit 0\nlabel 1 p\ntrans 0 a 1\n", &lts) != POLYMU_STATUS_OK) return fail("lts");
    if (polymu_check(POLYMU_ENGINE_GAME, phi, lts, tuple, 1, &verdict) != POLYMU_STATUS_OK) return fail("check");
    if (!verdict) return fail("verdict");

    if (polymu_formula_parse("(", &phi) != POLYMU_STATUS_PARSE_ERROR) return fail("bad parse accepted");
    if (polymu_last_error() == NULL) return fail("no message");

    char *text = polymu_formula_to_string(phi);
    printf("%s\n", text);
    polymu_string_free(text);
    polymu_formula_free(phi);
    polymu_lts_free(lts);
    return 0;
}
