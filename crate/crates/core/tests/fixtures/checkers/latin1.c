/* caf� au lait */
int _latin;
