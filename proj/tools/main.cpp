#include "commands.hpp"

int main(int argc, char** argv) {
  sheetqv::cli::tune_allocator();
  return sheetqv::cli::run(argc, argv);
}
