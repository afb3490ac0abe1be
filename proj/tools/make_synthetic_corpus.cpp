// Regenerates the bundled synthetic corpora: make_synthetic_corpus <data-dir>
#include <cstdlib>
#include <iostream>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_synthetic_corpus <output-dir>\n";
    return EXIT_FAILURE;
  }
  try {
    idiolect::synthetic::write_bundled_corpora(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
