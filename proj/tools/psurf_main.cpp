#include "psurf/cli.hpp"

int main(int argc, char** argv) { return psurf::cli_dispatch(argc, argv); }
