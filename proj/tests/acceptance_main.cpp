// Acceptance suite: one pass/fail line per criterion.
// Full implementation lands after the unit suite is green.
#include <cstdio>

int main() {
  std::printf("acceptance suite placeholder\n");
  return 1;
}
