#include "kloos.h"
#include <stdio.h>

int main(void) {
    KloosField *f = NULL;
    if (kloos_field_new(2, NULL, 0, &f) != KLOOS_STATUS_OK) {
        fprintf(stderr, "%s\n", kloos_last_error());
        return 1;
    }
    int64_t k = 0;
    char *sk = NULL;
    if (kloos_kloosterman(f, 1, &k) == KLOOS_STATUS_OK && kloos_sk_moment(f, 4, &sk) == KLOOS_STATUS_OK) {
        printf("q=%u K(1)=%lld SK^4=%s\n", kloos_field_q(f), (long long)k, sk);
    }
    kloos_string_free(sk);
    kloos_field_free(f);
    return 0;
}
