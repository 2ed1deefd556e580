#include "domlab/run.hpp"

int main(int argc, char** argv) { return domlab::run_cli(argc, argv); }
