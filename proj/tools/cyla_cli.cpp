// SPDX-License-Identifier: Apache-2.0
#include "cyla/tensor.hpp"

#include <cstdio>

int main() {
    std::puts("cyla: placeholder CLI");
    return 0;
}
