#include "polykin/acceptance.hpp"

#include <cstdio>
#include <cstring>

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    const auto results = polykin::acceptance::run_all(quick);
    std::printf("%s", polykin::acceptance::format_table(results).c_str());
    const int bad = polykin::acceptance::unexpected_failures(results);
    std::printf("%d of %zu criteria deviate from expectation\n", bad, results.size());
    return bad == 0 ? 0 : 1;
}
