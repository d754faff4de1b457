/* _hidden is only mentioned here
   #define _NOT_A_MACRO 1 */
// int _nor_here;
const char *msg = "_not_an_identifier";
char c = '_';
int visible;
