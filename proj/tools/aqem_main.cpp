#include "aqem/cli.hpp"

int main(int argc, char** argv) {
    return aqem::cli_dispatch(argc, argv);
}
