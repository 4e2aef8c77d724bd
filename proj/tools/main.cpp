#include "mstperc/cli.hpp"

int main(int argc, char** argv) { return mstperc::run_cli(argc, argv); }
