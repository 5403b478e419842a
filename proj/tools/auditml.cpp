#include "auditml/cli.hpp"

int main(int argc, char** argv) { return auditml::cli::run(argc, argv); }
