#include <cstdio>
int main(int argc, char** argv) { (void)argc; (void)argv; std::puts("FAIL placeholder suite not implemented"); return 1; }
