#include <doctest.h>

#include <set>

#include "hysop/verify/suites.hpp"

using namespace hysop::verify;

namespace {

void check_suite(const SuiteResult& r) {
    CHECK_FALSE(r.checks.empty());
    std::set<std::string> names;
    for (const auto& c : r.checks) {
        INFO(r.name << ": " << c.name << " = " << c.value << " (limit " << c.limit << ")");
        CHECK(c.pass);
        CHECK(c.limit >= 0.0);
        CHECK(names.insert(c.name).second);
    }
    CHECK(r.passed());
    CHECK(r.seconds >= 0.0);
}

}  // namespace

TEST_CASE("worst picks the first failure, else the tightest margin") {
    SuiteResult r;
    CHECK_FALSE(r.passed());
    r.checks = {{"a", 1.0, 10.0, true}, {"b", 5.0, 10.0, true}, {"c", 0.1, 1.0, true}};
    CHECK(r.passed());
    CHECK(r.worst().name == "b");
    r.checks.push_back({"d", 3.0, 1.0, false});
    r.checks.push_back({"e", 9.0, 1.0, false});
    CHECK_FALSE(r.passed());
    CHECK(r.worst().name == "d");
}

TEST_CASE("transform suite passes") { check_suite(transform_suite()); }

TEST_CASE("preisach suite passes") { check_suite(preisach_suite()); }

TEST_CASE("gradient suite passes within a minute") {
    const auto r = gradient_suite();
    check_suite(r);
    CHECK(r.seconds < 60.0);
}
