#include "liebdx/cli.hpp"

int main(int argc, char** argv) { return liebdx::run_cli(argc, argv); }
