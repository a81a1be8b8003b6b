#include <cstdio>

int main() {
  std::puts("aht: placeholder");
  return 0;
}
