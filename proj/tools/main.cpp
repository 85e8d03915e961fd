#include <hjhomog/cli.hpp>

#include <string>
#include <vector>

int main(int argc, char** argv) {
    return hjhomog::cli_dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
