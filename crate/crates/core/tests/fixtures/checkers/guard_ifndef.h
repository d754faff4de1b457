/* Public API of the ring buffer. */
#ifndef RING_H
#define RING_H

#include <stdint.h>

typedef struct ring ring_t;
int ring_push(ring_t *r, uint8_t b);

#endif /* RING_H */
