#include <vector>

#include "fairembed/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fairembed::cli::run(args);
}
