#include "surrokit/io.hpp"

int main(int argc, char** argv) { return surrokit::io::run_cli(argc, argv); }
