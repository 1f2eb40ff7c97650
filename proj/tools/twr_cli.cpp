#include "twr/cli.hpp"

int main(int argc, char** argv)
{
    return twr::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
