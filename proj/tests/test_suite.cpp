#include <gtest/gtest.h>

#include <set>

#include "dehn/suite.hpp"

using namespace dehn;

namespace {

std::string dump_all(const std::vector<json>& records) {
    std::string out;
    for (const auto& r : records) out += r.dump() + "\n";
    return out;
}

}  // namespace

TEST(Verify, DefaultAllPass) {
    RunConfig cfg;
    const auto result = verify_suite(cfg);
    EXPECT_EQ(result.failed, 0) << dump_all(result.records);
    EXPECT_GT(result.passed, 20);
    EXPECT_EQ(result.exit_code(), 0);
    int audit = 0;
    for (const auto& r : result.records)
        if (r["check"] == "convention_audit") ++audit;
    EXPECT_EQ(audit, 5);
}

TEST(Verify, SabotagedTolerance) {
    RunConfig cfg;
    cfg.tol.eq_tol = 1e-30;
    const auto result = verify_suite(cfg);
    EXPECT_GT(result.failed, 0);
    EXPECT_EQ(result.exit_code(), 1);
}

TEST(Verify, PglSweep) {
    RunConfig cfg;
    cfg.group = GroupContext(Family::PGL, 2);
    cfg.genera = {2, 3, 4};
    const auto result = verify_suite(cfg);
    EXPECT_EQ(result.failed, 0) << dump_all(result.records);
    std::set<int> orders;
    for (const auto& r : result.records)
        if (r["check"] == "thm5_simple") orders.insert(r["params"]["n"].get<int>());
    EXPECT_EQ(orders, (std::set<int>{2, 3, 4}));
}

TEST(Verify, HigherRank) {
    for (const char* name : {"SL3", "GL2"}) {
        RunConfig cfg;
        cfg.group = GroupContext::parse(name);
        const auto result = verify_suite(cfg);
        EXPECT_EQ(result.failed, 0) << name << "\n" << dump_all(result.records);
    }
}

TEST(Verify, ConfigValidation) {
    RunConfig cfg;
    cfg.genera = {0};
    EXPECT_THROW(verify_suite(cfg), InvalidArgument);
    cfg = RunConfig{};
    cfg.workers = 0;
    EXPECT_THROW(verify_suite(cfg), InvalidArgument);
    cfg = RunConfig{};
    cfg.tol.eq_tol = 0.1;
    EXPECT_THROW(verify_suite(cfg), InvalidArgument);
}

TEST(Verify, Deterministic) {
    RunConfig cfg;
    cfg.seed = 42;
    const std::string a = dump_all(verify_suite(cfg).records);
    cfg.workers = 3;
    const std::string b = dump_all(verify_suite(cfg).records);
    EXPECT_EQ(a, b);
}

TEST(Search, AllExceptional) {
    RunConfig cfg;
    cfg.samples = 1000;
    const auto result = search_exceptional(cfg, 2);
    EXPECT_EQ(result.summary["exceptional"], 1000);
    EXPECT_EQ(result.exit_code(), 0);
}

TEST(Search, ForcedIdentity) {
    RunConfig cfg;
    cfg.samples = 1000;
    cfg.force_identity = true;
    const auto result = search_exceptional(cfg, 2);
    EXPECT_EQ(result.summary["exceptional"], 0);
    EXPECT_EQ(result.summary["by_verdict"]["in_image_possible"], 1000);
    EXPECT_EQ(result.exit_code(), 0);
}

TEST(Search, CentralSl3) {
    RunConfig cfg;
    cfg.group = GroupContext(Family::SL, 3);
    cfg.samples = 40;
    cfg.central_lambda = true;
    const auto result = search_exceptional(cfg, 2);
    EXPECT_EQ(result.summary["exceptional"], 40);
    for (const auto& r : result.records) EXPECT_EQ(r["lambda_order"], 3);
}

TEST(Search, Deterministic) {
    RunConfig cfg;
    cfg.samples = 50;
    cfg.seed = 9;
    const auto a = search_exceptional(cfg, 1);
    cfg.workers = 4;
    const auto b = search_exceptional(cfg, 1);
    EXPECT_EQ(dump_all(a.records) + a.summary.dump(), dump_all(b.records) + b.summary.dump());
}

TEST(Search, CentralNeedsCenter) {
    RunConfig cfg;
    cfg.group = GroupContext(Family::PGL, 2);
    cfg.central_lambda = true;
    EXPECT_THROW(search_exceptional(cfg, 2), InvalidArgument);
}

TEST(Conjecture, DefaultSweep) {
    for (const char* name : {"SL2", "SL3", "PGL2"}) {
        RunConfig cfg;
        cfg.group = GroupContext::parse(name);
        const auto result = conjecture_scan(cfg);
        EXPECT_EQ(result.violations, 0) << name;
        EXPECT_EQ(result.errors, 0) << name << "\n" << dump_all(result.records);
        for (const auto& r : result.records) {
            if (r["family"] == "sec6") EXPECT_EQ(r["classification"], "pseudo_only");
            if (r["family"] == "perturb_thm4" || r["family"] == "perturb_separating")
                EXPECT_EQ(r["classification"], "consistent");
        }
    }
}

TEST(Conjecture, EmptySweep) {
    RunConfig cfg;
    cfg.families = {"none"};
    const auto result = conjecture_scan(cfg);
    EXPECT_TRUE(result.records.empty());
    EXPECT_EQ(result.exit_code(), 0);
    cfg.families = {"bogus"};
    EXPECT_THROW(conjecture_scan(cfg), InvalidArgument);
}

TEST(Conjecture, Deterministic) {
    RunConfig cfg;
    cfg.seed = 5;
    cfg.families = {"perturb_thm4", "perturb_generic", "thm5_dense"};
    const auto a = conjecture_scan(cfg);
    cfg.workers = 2;
    const auto b = conjecture_scan(cfg);
    EXPECT_EQ(dump_all(a.records), dump_all(b.records));
}

TEST(Audit, Records) {
    for (int n = 1; n <= 5; ++n) {
        const json rec = convention_audit_record(n, {});
        EXPECT_TRUE(rec["pass"].get<bool>());
        EXPECT_TRUE(rec["t_squared_inverse_s"]["holds"].get<bool>());
        EXPECT_EQ(rec["t_squared_s"]["holds"].get<bool>(), n <= 2);
    }
}
