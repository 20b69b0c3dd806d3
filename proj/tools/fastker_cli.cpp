#include "fastker/io.hpp"

int main(int argc, char** argv) { return fastker::cli_main(argc, argv); }
