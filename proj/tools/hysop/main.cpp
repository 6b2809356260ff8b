#include <malloc.h>

#include <iostream>

#include "hysop/cli.hpp"

int main(int argc, char** argv) {
    // Keep freed tensor memory in the heap instead of returning it to the
    // kernel; page faults on fresh pages otherwise dominate training time.
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_TOP_PAD, 64 << 20);
    std::vector<std::string> args(argv + 1, argv + argc);
    return hysop::cli::run(args, std::cout, std::cerr);
}
