// Acceptance suite: runs every criterion exactly and prints one line each.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "norma/verify.hpp"

int main(int argc, char** argv) {
    uint64_t seed = 0;
    size_t samples = 100;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
        if (std::strcmp(argv[i], "--samples") == 0 && i + 1 < argc) samples = std::strtoull(argv[++i], nullptr, 10);
    }
    if (const char* env = std::getenv("NORMA_SEED")) seed = std::strtoull(env, nullptr, 10);

    auto results = norma::run_acceptance(seed, samples);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%s  %2d  %s%s%s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        if (!r.passed) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
