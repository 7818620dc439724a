#include "heckelab/cli.hpp"

int main(int argc, char** argv) { return heckelab::cli::dispatch(argc, argv); }
