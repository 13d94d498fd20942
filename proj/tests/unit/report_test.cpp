#include "secoda/report.hpp"
#include "secoda/error.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>

namespace secoda {
namespace {

Dataset small_table() {
    const std::vector<std::optional<std::string>> color{"red", "red", std::nullopt, "blue"};
    return Dataset({Column::numeric("x", {1.5, 1.5, 2.0, NAN}), Column::categorical("color", color)});
}

TEST(Scores, WrittenInRankOrderAndReadBackById) {
    const auto d = small_table();
    const auto s = run_secoda(d, EngineConfig{});
    std::stringstream buffer;
    write_scores(buffer, s);
    std::string header;
    std::getline(buffer, header);
    EXPECT_EQ(header, "case_id,score,rank,pruned_at");
    std::string first;
    std::getline(buffer, first);
    EXPECT_TRUE(first.starts_with(std::to_string(s.order().front()) + ","));
    EXPECT_TRUE(first.ends_with(",1,"));
    buffer.clear();
    buffer.seekg(0);
    EXPECT_EQ(read_scores(buffer), s.scores);
}

TEST(Scores, ReadRejectsMisalignedIds) {
    std::stringstream gap("case_id,score,rank,pruned_at\n0,1,1,\n2,3,2,\n");
    EXPECT_THROW(read_scores(gap), InputError);
    std::stringstream repeated("case_id,score,rank,pruned_at\n0,1,1,\n0,3,2,\n");
    EXPECT_THROW(read_scores(repeated), InputError);
    std::stringstream header("id,score\n0,1\n");
    EXPECT_THROW(read_scores(header), InputError);
    std::stringstream bad_score("case_id,score\n0,abc\n");
    EXPECT_THROW(read_scores(bad_score), InputError);
}

TEST(Scores, PrunedColumnHoldsIteration) {
    ScoreVector s;
    s.scores = {1.0, 20.5};
    s.ranks = {1, 2};
    s.pruned_at = {std::nullopt, 10};
    std::stringstream out;
    write_scores(out, s);
    EXPECT_EQ(out.str(), "case_id,score,rank,pruned_at\n0,1,1,\n1,20.5,2,10\n");
}

EvalReport sample_report() {
    const std::vector<double> s{1, 2, 3, 3, 4, 5};
    const std::vector<AnomalyLabel> l{AnomalyLabel::TypeVI, AnomalyLabel::Normal, AnomalyLabel::TypeVI,
                                      AnomalyLabel::Normal, AnomalyLabel::Normal, AnomalyLabel::TypeII};
    return evaluate(s, l, parse_task("VI"), 2);
}

TEST(Report, TextLines) {
    std::stringstream out;
    write_report_text(out, sample_report());
    const auto text = out.str();
    EXPECT_TRUE(text.starts_with("n_cases=6\ntask=VI\npositives=2\nk=2\n"));
    EXPECT_NE(text.find("pauc_0.9="), std::string::npos);
    EXPECT_NE(text.find("pauc_0.95="), std::string::npos);
    EXPECT_NE(text.find("pauc_0.99="), std::string::npos);
    EXPECT_NE(text.find("topk_VI=1\n"), std::string::npos);
    EXPECT_NE(text.find("total_II=1\n"), std::string::npos);
}

TEST(Report, JsonFields) {
    std::stringstream out;
    const auto report = sample_report();
    write_report_json(out, report);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["n_cases"], 6);
    EXPECT_EQ(j["auc"].get<double>(), report.auc);
    ASSERT_EQ(j["partial_auc"].size(), 3u);
    EXPECT_EQ(j["partial_auc"][1]["floor"].get<double>(), 0.95);
    EXPECT_EQ(j["topk_hits"]["VI"], 1);
    EXPECT_EQ(j["label_totals"]["NORMAL"], 3);
    EXPECT_EQ(j["roc"].size(), report.roc.size());
    EXPECT_EQ(j["prc"].size(), report.prc.size());
}

TEST(Manifest, RoundTrip) {
    RunManifest m;
    m.input = "data/in file.csv";
    m.schema = "x:num,color:cat";
    m.config.method = BinningMethod::Equidepth;
    m.config.pruning_enabled = false;
    m.config.arity_schedule = {2, 5, 9};
    m.config.arity_growth = 1.7;
    m.config.counting_partitions = 4;
    m.scores_path = "out.csv";
    m.iterations = 3;
    std::stringstream buffer;
    write_manifest(buffer, m);
    const auto j = nlohmann::json::parse(buffer.str());
    EXPECT_EQ(j["tool"], "secoda");
    EXPECT_EQ(j["version"], std::string(kToolVersion));
    EXPECT_TRUE(j["seed"].is_null());
    buffer.seekg(0);
    const auto back = read_manifest(buffer);
    EXPECT_EQ(back.input, m.input);
    EXPECT_EQ(back.schema, m.schema);
    EXPECT_EQ(back.config.method, m.config.method);
    EXPECT_EQ(back.config.pruning_enabled, false);
    EXPECT_EQ(back.config.arity_schedule, m.config.arity_schedule);
    EXPECT_EQ(back.config.arity_growth, 1.7);
    EXPECT_EQ(back.config.counting_partitions, 4u);
    EXPECT_EQ(back.scores_path, "out.csv");
    EXPECT_FALSE(back.seed.has_value());
}

TEST(Manifest, MalformedIsConfigError) {
    std::stringstream garbage("{not json");
    EXPECT_THROW(read_manifest(garbage), ConfigError);
    std::stringstream missing(R"({"tool": "secoda", "input": "a.csv"})");
    EXPECT_THROW(read_manifest(missing), ConfigError);
    std::stringstream foreign(R"({"tool": "other"})");
    EXPECT_THROW(read_manifest(foreign), ConfigError);
}

TEST(PlotRecords, OneObjectPerCase) {
    const auto d = small_table();
    const std::vector<double> scores{2, 2, 1, 1};
    const std::vector<AnomalyLabel> labels{AnomalyLabel::Normal, AnomalyLabel::Normal, AnomalyLabel::TypeII,
                                           AnomalyLabel::TypeIII};
    std::stringstream out;
    write_plot_records(out, d, &labels, scores, 1);
    std::string line;
    std::vector<nlohmann::json> records;
    while (std::getline(out, line)) records.push_back(nlohmann::json::parse(line));
    ASSERT_EQ(records.size(), 4u);
    EXPECT_EQ(records[2]["rank"], 1);
    EXPECT_TRUE(records[2]["top_k"].get<bool>());
    EXPECT_FALSE(records[3]["top_k"].get<bool>());
    EXPECT_EQ(records[2]["label"], "II");
    EXPECT_TRUE(records[2]["values"]["color"].is_null());
    EXPECT_TRUE(records[3]["values"]["x"].is_null());
    EXPECT_EQ(records[0]["values"]["x"].get<double>(), 1.5);
    EXPECT_EQ(records[0]["values"]["color"], "red");

    std::stringstream unlabeled;
    write_plot_records(unlabeled, d, nullptr, scores, 0);
    std::getline(unlabeled, line);
    const auto j = nlohmann::json::parse(line);
    EXPECT_FALSE(j.contains("label"));
    EXPECT_FALSE(j["top_k"].get<bool>());
}

TEST(Comparison, TablePrintsEveryType) {
    MethodComparison cmp;
    cmp.k = 3;
    TypeComparison row;
    row.label = AnomalyLabel::TypeVI;
    row.planted = 2;
    row.hits_ed = 2;
    row.auc_ew = 0.5;
    row.auc_ed = 0.75;
    row.verdict = "ED only";
    row.favored = "ED";
    cmp.rows.push_back(row);
    std::stringstream out;
    write_comparison(out, cmp);
    EXPECT_NE(out.str().find("0.7500"), std::string::npos);
    EXPECT_NE(out.str().find("ED only"), std::string::npos);
    EXPECT_TRUE(out.str().ends_with("k=3\n"));
}

}  // namespace
}  // namespace secoda
