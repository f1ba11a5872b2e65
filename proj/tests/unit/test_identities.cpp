#include <catch_amalgamated.hpp>

#include <set>

#include "curlmat/format.hpp"
#include "curlmat/identities.hpp"

using namespace curlmat;

namespace {

OperatorSource mutated_source(std::size_t r, std::size_t c)
{
    OperatorSource src;
    const OpMatrix flipped = flip_entry_sign(build_curl_cg(1), r, c);
    src.curl = [flipped](int l) { return l == 1 ? flipped : build_curl_cg(l); };
    return src;
}

void require_all_pass(const std::vector<IdentityReport>& reports)
{
    for (const auto& r : reports) {
        INFO(r.identity_id);
        REQUIRE(r.passed());
        REQUIRE_FALSE(r.witness.has_value());
        REQUIRE(r.symbol_residual <= 1e-10);
    }
}

} // namespace

TEST_CASE("core identities hold for l <= 6")
{
    const auto reports = verify_core_identities(6);
    require_all_pass(reports);
    std::set<std::string> ids;
    for (const auto& r : reports) ids.insert(r.identity_id);
    CHECK(ids.size() == reports.size());
    for (const char* id : {"core.curl-grad", "core.div-curl", "core.curl-curl", "core.curl-grad-intertwine",
                           "core.div-curl-intertwine", "core.curl-squared[l=6]", "cartesian.similarity"})
        CHECK(ids.count(id) == 1);
    CHECK_THROWS_AS(verify_core_identities(0), std::domain_error);
    CHECK_THROWS_AS(verify_core_identities(7), std::domain_error);
}

TEST_CASE("power laws hold for n <= 4")
{
    const auto reports = verify_power_laws(4);
    require_all_pass(reports);
    CHECK(reports.size() == 2 * (2 * 4 + (2 * 4 + 1)));
}

TEST_CASE("truncated exponential identity for N = 0..3")
{
    for (int N = 0; N <= 3; ++N) {
        INFO("N = " << N);
        CHECK(verify_exponential(N).passed());
        CHECK(verify_exponential_cartesian(N).passed());
    }
    CHECK(verify_exponential(3).identity_id == "exp.curl[N=3]");
}

TEST_CASE("hermitian and complex suites hold for l <= 4")
{
    require_all_pass(verify_hermitian_complex_suites(4));
}

TEST_CASE("run_suite partitions")
{
    const auto all = run_suite(Suite::all, 4, 4);
    require_all_pass(all);
    const auto h = run_suite(Suite::hermitian, 4, 4);
    const auto c = run_suite(Suite::complex, 4, 4);
    for (const auto& r : h) CHECK((r.identity_id.rfind("hermitian.", 0) == 0 || r.identity_id.rfind("adjoint.", 0) == 0 ||
                                   r.identity_id.rfind("cartesian.hermitian.", 0) == 0));
    for (const auto& r : c) CHECK((r.identity_id.rfind("complex.", 0) == 0 || r.identity_id.rfind("cartesian.complex.", 0) == 0));
    CHECK(h.size() + c.size() == verify_hermitian_complex_suites(4).size());
    CHECK(run_suite(Suite::exp, 4, 3).size() == 2);
    CHECK(count_failures(all) == 0);
}

TEST_CASE("degree cap is enforced before work")
{
    ScopedDegreeCap cap(4);
    CHECK_THROWS_AS(verify_exponential(3), degree_cap_exceeded);
    CHECK_THROWS_AS(verify_power_laws(3), degree_cap_exceeded);
    CHECK_NOTHROW(verify_exponential(1));
}

TEST_CASE("every single-entry sign flip in CURL(1) is caught by at least three identities")
{
    const OpMatrix c1 = build_curl_cg(1);
    int flips = 0;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
            if (c1(r, c).is_zero()) continue;
            ++flips;
            INFO("flipped entry " << r << "," << c);
            const auto reports = run_suite(Suite::all, 4, 4, mutated_source(r, c));
            const std::size_t failures = count_failures(reports);
            CHECK(failures >= 3);
            for (const auto& rep : reports)
                if (!rep.passed()) {
                    REQUIRE(rep.witness.has_value());
                    CHECK_FALSE(rep.witness->is_zero());
                }
        }
    CHECK(flips == 6);
}

TEST_CASE("symbol residual reflects a mismatch")
{
    const auto reports = verify_core_identities(2, mutated_source(0, 0));
    bool any = false;
    for (const auto& r : reports)
        if (!r.passed()) any = any || r.symbol_residual > 1e-3;
    CHECK(any);
}

TEST_CASE("symbol check seed is configurable and deterministic")
{
    const std::uint64_t old = symbol_check_seed();
    set_symbol_check_seed(12345);
    CHECK(symbol_check_seed() == 12345);
    const auto a = verify_core_identities(2, mutated_source(1, 0));
    const auto b = verify_core_identities(2, mutated_source(1, 0));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].symbol_residual == b[i].symbol_residual);
    set_symbol_check_seed(old);
}

TEST_CASE("report json")
{
    const auto ok = verify_exponential(1);
    const auto j = to_json(ok);
    CHECK(j["identity_id"] == "exp.curl[N=1]");
    CHECK(j["status"] == "exact-pass");
    CHECK(j["witness"].is_null());
    CHECK(j["l_range"] == nlohmann::json({1}));

    const auto bad = verify_core_identities(1, mutated_source(0, 0));
    for (const auto& r : bad)
        if (!r.passed()) {
            const auto jb = to_json(r);
            CHECK(jb["status"] == "fail");
            CHECK(jb["witness"]["rows"].is_number());
            break;
        }
}
