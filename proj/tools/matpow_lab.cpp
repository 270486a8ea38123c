#include "matpow/harness.hpp"

int main(int argc, char** argv) { return matpow::harness::run_cli(argc, argv); }
