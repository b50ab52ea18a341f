#include "clusterlab/cli.hpp"

int main(int argc, char** argv) { return clusterlab::cli::run(argc, argv); }
