#include <exception>
#include <iostream>

#include "hqc_tools/cli.hpp"

int main(int argc, char** argv) {
  try {
    return hqc::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
