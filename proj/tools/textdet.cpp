#include <cstdio>
int main() { std::puts("textdet: work in progress"); return 2; }
