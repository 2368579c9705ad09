#ifndef MONITOR_H
#define MONITOR_H

/* Generated runtime monitor.
 * Single-threaded: callers must serialize input writes
 * and step() calls. */

#include <stdbool.h>

extern double current_consumption;
extern double windspeed;

void step(void);

extern void handlerpropROS_001(void);

#endif /* MONITOR_H */
