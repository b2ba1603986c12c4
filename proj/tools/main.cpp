#include "hkmeans/harness.hpp"

int main(int argc, char** argv) { return hkm::cli_main(argc, argv); }
