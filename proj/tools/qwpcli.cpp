#include "qwp/imageio_cli.hpp"

int main(int argc, char** argv) { return qwp::cli_main(argc, argv); }
