// Renders a JSON report in the text layout used by qcmce.
#include <fstream>
#include <iostream>

#include "report.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: render_json report.json\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) return 2;
  qcmce::cli::emit(std::cout, qcmce::cli::Report::parse(in), false);
}
