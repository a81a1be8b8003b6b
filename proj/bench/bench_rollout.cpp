#include <cstdio>

int main() {
  std::puts("bench_rollout: placeholder");
  return 0;
}
