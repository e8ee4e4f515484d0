#include <vector>

#include "agewave/cli.hpp"

int main(int argc, char** argv) {
  return agewave::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
