#include <stdio.h>
#include <string.h>

#include "covarray.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,    \
              ca_last_error());                                 \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  CaArray *a = NULL, *b = NULL, *c = NULL;
  CHECK(ca_construct("hadamard-12x11", 0, &a) == CA_STATUS_OK);
  size_t m = 0, n = 0;
  uint8_t q = 0;
  CHECK(ca_dims(a, &m, &n, &q) == CA_STATUS_OK);
  CHECK(m == 12 && n == 11 && q == 2);
  bool ok = false;
  CHECK(ca_verify(a, 3, &ok) == CA_STATUS_OK && ok);
  CHECK(ca_verify(a, 4, &ok) == CA_STATUS_OK && !ok);

  char *text = ca_to_text(a);
  CHECK(text != NULL);
  CHECK(ca_parse(text, &b) == CA_STATUS_OK);
  ca_string_free(text);
  CHECK(ca_canonical(b, &c) == CA_STATUS_OK);
  CHECK(ca_equivalent(a, c, &ok) == CA_STATUS_OK && ok);

  CHECK(ca_parse("2 2 2\n01\n", &b) == CA_STATUS_PARSE);
  CHECK(strlen(ca_last_error()) > 0);
  size_t count = 0;
  CHECK(ca_count_classes(6, 2, 6, &count) == CA_STATUS_OK && count == 4);

  ca_free(a);
  ca_free(b);
  ca_free(c);
  puts("ok");
  return 0;
}
