#include "cli.hpp"

int main(int argc, char** argv) { return snnq::cli::run(argc, argv); }
