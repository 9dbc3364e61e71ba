#include <cstdio>
int main() { std::puts("pskp: placeholder"); return 0; }
