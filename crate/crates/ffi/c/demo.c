/* Minimal C client: cc demo.c -I../include -L../../../target/debug -lratclos_ffi */
#include <stdio.h>

#include "ratclos.h"

int main(void) {
    const char *kb_text = "penguin |~ bird\npenguin |~ !fly\nbird |~ fly\n";
    RcKb *kb = NULL;
    if (rc_kb_parse(kb_text, &kb) != RC_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", rc_last_error());
        return 2;
    }

    RcQueryResult r;
    if (rc_check(kb, "bird & penguin |~ !fly", &r) != RC_STATUS_OK) {
        fprintf(stderr, "check: %s\n", rc_last_error());
        rc_kb_free(kb);
        return 2;
    }
    printf("answer: %s\n", r.answer ? "yes" : "no");
    printf("rank_antecedent: %lld\n", (long long)r.rank_antecedent);

    char *p = NULL;
    if (rc_eps_probability(kb, "1/10", "penguin |~ !fly", &p) == RC_STATUS_OK) {
        printf("P(!fly | penguin) at 1/10: %s\n", p);
        rc_string_free(p);
    }

    RcStatus s = rc_check(kb, "penguin |~", &r);
    printf("bad query status: %d (%s)\n", (int)s, rc_last_error());

    rc_kb_free(kb);
    return 0;
}
