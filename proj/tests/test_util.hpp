#pragma once

// Minimal check harness shared by the test binaries: counts failures, prints
// one line per failing check, and the binary's exit code reports the total.

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace testutil {

inline int failures = 0;
inline int checks = 0;

inline bool report(bool ok, const char* file, int line, const char* what) {
    ++checks;
    if (!ok) {
        ++failures;
        std::fprintf(stderr, "FAIL %s:%d  %s\n", file, line, what);
    }
    return ok;
}

inline int summary(const char* suite) {
    std::printf("%s: %d checks, %d failures\n", suite, checks, failures);
    return failures == 0 ? 0 : 1;
}

} // namespace testutil

#define CHECK(cond) ::testutil::report((cond), __FILE__, __LINE__, #cond)

#define CHECK_NEAR(a, b, tol)                                                          \
    do {                                                                               \
        const double va = (a), vb = (b), vtol = (tol);                                 \
        if (!::testutil::report(std::abs(va - vb) <= vtol, __FILE__, __LINE__,         \
                                #a " ~= " #b))                                         \
            std::fprintf(stderr, "      got %.17g, want %.17g (tol %g)\n", va, vb, vtol); \
    } while (0)

#define CHECK_THROWS(ExType, expr)                                                     \
    do {                                                                               \
        bool caught = false;                                                           \
        try {                                                                          \
            (void)(expr);                                                              \
        } catch (const ExType&) {                                                      \
            caught = true;                                                             \
        } catch (...) {                                                                \
        }                                                                              \
        ::testutil::report(caught, __FILE__, __LINE__, #expr " throws " #ExType);      \
    } while (0)
