#include <doctest.h>

#include <hjhomog/runrecord.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <string>

using namespace hjhomog;

TEST_CASE("the required anchor manifest is nonempty and duplicate-free") {
    const auto& req = RunRecord::required_anchors();
    CHECK(req.size() >= 20);
    const std::set<std::string> uniq(req.begin(), req.end());
    CHECK(uniq.size() == req.size());
    for (const auto& a : req) {
        CHECK(!a.empty());
        CHECK(a.find(' ') == std::string::npos);
    }
}

TEST_CASE("missing anchors are the manifest minus the record") {
    RunRecord rec;
    CHECK(rec.missing_anchors() == RunRecord::required_anchors());

    StageRecord st;
    st.name = "demo";
    const std::string covered = RunRecord::required_anchors().front();
    st.checks.push_back({covered, 0.0, 1.0, true, "covered"});
    st.checks.push_back({"not-in-manifest", 0.0, 1.0, true, "extra"});
    rec.add(std::move(st));

    const auto missing = rec.missing_anchors();
    CHECK(missing.size() == RunRecord::required_anchors().size() - 1);
    CHECK(std::find(missing.begin(), missing.end(), covered) == missing.end());
}

TEST_CASE("pass/fail tallies follow the entries") {
    RunRecord rec;
    StageRecord st;
    st.name = "demo";
    st.checks.push_back({"a", 0.1, 1.0, true, ""});
    st.checks.push_back({"b", 2.0, 1.0, false, ""});
    st.checks.push_back({"c", 3.0, 1.0, false, ""});
    rec.add(std::move(st));
    CHECK(!rec.all_pass());
    CHECK(rec.failed_count() == 2);
    CHECK(rec.find("b") != nullptr);
    CHECK(rec.find("b")->measured == 2.0);
    CHECK(rec.find("zzz") == nullptr);

    RunRecord ok;
    StageRecord st2;
    st2.checks.push_back({"a", 0.1, 1.0, true, ""});
    ok.add(std::move(st2));
    CHECK(ok.all_pass());
    CHECK(ok.failed_count() == 0);
}

TEST_CASE("records serialize with their verdicts and coverage") {
    RunRecord rec;
    rec.config_digest = "0123456789abcdef";
    StageRecord st;
    st.name = "demo";
    st.wall_seconds = 1.5;
    st.outputs = {"out/demo/table.csv"};
    st.checks.push_back({"a", 0.25, 1.0, true, "detail text"});
    rec.add(std::move(st));

    const nlohmann::json j = rec.to_json();
    CHECK(j["config_digest"] == "0123456789abcdef");
    CHECK(j["all_pass"] == true);  // no failing checks; coverage is separate
    CHECK(j["failed_checks"] == 0);
    REQUIRE(j["stages"].size() == 1);
    CHECK(j["stages"][0]["name"] == "demo");
    CHECK(j["stages"][0]["checks"][0]["anchor"] == "a");
    CHECK(j["stages"][0]["checks"][0]["pass"] == true);
    CHECK(j.contains("missing_anchors"));
}
