#include <cstdio>

int main() {
  std::puts("ea: placeholder");
  return 0;
}
