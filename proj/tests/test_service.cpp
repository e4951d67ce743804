#include <doctest.h>

TEST_SUITE("service") {}
