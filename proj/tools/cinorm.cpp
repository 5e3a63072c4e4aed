#include <cinorm/cli.hpp>

int main(int argc, char** argv) { return cinorm::run_cli(argc, argv); }
