#define _MIXED_H
int _mixed_state;
