#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "solver.hpp"

int main(int argc, char** argv) {
  std::string text;
  if (argc > 1) {
    std::ifstream f(argv[1], std::ios::binary);
    if (!f) {
      std::cerr << "cannot open " << argv[1] << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  }
  gsolv::Result r = gsolv::solveScript(text);
  std::cout << r.status << "\n";
  if (!r.model.empty()) std::cout << r.model;
  return 0;
}
