#include "cli.hpp"

int main(int argc, char** argv) {
    return qsb::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
