#include <string>
#include <vector>

#include "tskit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tskit::cli::run(args);
}
