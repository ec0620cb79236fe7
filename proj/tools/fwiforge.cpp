#include "fwiforge/cli/app.hpp"

int main(int argc, char** argv) { return fwiforge::cli::run(argc, argv); }
