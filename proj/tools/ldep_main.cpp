#include <cstdio>

#include "ldep/ldep.hpp"

int main() {
  std::puts("ldep: placeholder");
  return 0;
}
