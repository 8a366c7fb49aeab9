#include "gibbs/cli.hpp"

int main(int argc, char** argv) { return gibbs::cli::run(argc, argv); }
