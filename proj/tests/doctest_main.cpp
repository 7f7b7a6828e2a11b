#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <malloc.h>

int main(int argc, char** argv) {
    // the derivative engine churns through multi-megabyte temporaries; keep
    // them on the heap instead of mmap round trips
    mallopt(M_MMAP_MAX, 0);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return doctest::Context(argc, argv).run();
}
