#include "lipcurv/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace lipcurv;

// Runs every criterion and prints one line each.  Failing certificates are
// listed under their criterion.  Usage: acceptance [id ...]
int main(int argc, char** argv)
{
    std::vector<const Criterion*> list;
    for (int i = 1; i < argc; ++i) {
        int id = std::atoi(argv[i]);
        for (const auto& c : criteria())
            if (c.id == id) list.push_back(&c);
    }
    if (argc == 1) list = select_criteria("all");

    int failed = 0;
    run_criteria(list, 1, 1, [&](const CriterionResult& res) {
        const auto& c = *res.criterion;
        std::printf("criterion %2d %-26s %s  (%.1f s)  %s\n", c.id, c.slug.c_str(), res.pass() ? "PASS" : "FAIL",
                    res.seconds, c.title.c_str());
        if (!res.error.empty()) std::printf("    error: %s\n", res.error.c_str());
        for (const auto& cert : res.report.certificates)
            if (!cert.pass) std::printf("    failed: %s: %s\n", cert.name.c_str(), cert.check.c_str());
        std::fflush(stdout);
        failed += !res.pass();
    });
    std::printf("%zu criteria, %d failed\n", list.size(), failed);
    return failed ? 1 : 0;
}
