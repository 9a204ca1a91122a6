#include "cergm/cli.hpp"

int main(int argc, char** argv) { return cergm::cli::run(argc, argv); }
