#include "qecsense/cli.hpp"

int main(int argc, char** argv) { return qecsense::cli::run(argc, argv); }
