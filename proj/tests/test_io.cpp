#include <gtest/gtest.h>

#include "asymlab/config.hpp"
#include "asymlab/io.hpp"

using namespace asymlab;
using nlohmann::json;

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("1.25"), "1.25");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RoundTripWithMetadata) {
  CsvTable t;
  t.header = {"k", "value", "note"};
  t.add({"0", "-1.5e-20", "plain"});
  t.add({"1", "2", "with, comma"});
  t.add({"2", "3", "quote \" and\nnewline"});
  json meta = {{"precision_bits", 626}, {"t", "1.6"}};
  std::string text = render_csv(t, meta);
  EXPECT_EQ(text.rfind("# config: {", 0), 0u);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  json back_meta;
  CsvTable back = parse_csv(text, &back_meta);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back_meta, meta);
}

TEST(Csv, RowWidthChecked) {
  CsvTable t;
  t.header = {"a", "b"};
  EXPECT_THROW(t.add({"1"}), ConsistencyError);
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), ConsistencyError);
  EXPECT_THROW(parse_csv("a,b\n\"1,2\n"), ConsistencyError);
}

TEST(Json, Envelope) {
  json doc = json::parse(render_json({{"x", "1"}}, json::array({1, 2})));
  EXPECT_EQ(doc["metadata"]["x"], "1");
  EXPECT_EQ(doc["data"].size(), 2u);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.beta = "2.5";
  c.t = "1.61";
  c.max_level = 6;
  c.gamma = {"0.3"};
  json j = c;
  RunConfig back = j.get<RunConfig>();
  EXPECT_EQ(back, c);
}

TEST(Config, NumbersOrStrings) {
  RunConfig c = json::parse(R"({"beta": 3, "scale_right": "2", "max_level": 4})").get<RunConfig>();
  EXPECT_EQ(c.beta, "3");
  EXPECT_EQ(c.scale_right, "2");
  EXPECT_EQ(c.max_level, 4);
  EXPECT_EQ(c.t, "auto:12");  // untouched fields keep their defaults
}

TEST(Config, Rejections) {
  EXPECT_THROW(json::parse(R"({"bta": 2})").get<RunConfig>(), ConfigError);
  EXPECT_THROW(json::parse(R"({"max_level": "4"})").get<RunConfig>(), ConfigError);
  EXPECT_THROW(json::parse(R"({"gamma": 1})").get<RunConfig>(), ConfigError);
  EXPECT_THROW(json::parse(R"([1])").get<RunConfig>(), ConfigError);
}

TEST(Config, TSpec) {
  TSpec a = parse_t_spec("auto:12");
  ASSERT_TRUE(a.auto_level.has_value());
  EXPECT_EQ(*a.auto_level, 12);
  TSpec b = parse_t_spec("1.7");
  EXPECT_FALSE(b.auto_level.has_value());
  EXPECT_EQ(b.literal, "1.7");
  EXPECT_THROW(parse_t_spec("auto:"), ConfigError);
  EXPECT_THROW(parse_t_spec("auto:x1"), ConfigError);
  EXPECT_THROW(parse_t_spec("auto:0"), ConfigError);
}

TEST(Config, AutoPrecision) {
  RunConfig c;
  EXPECT_EQ(resolve_precision(c), 626);  // auto:12 anchors at level 13
  c.precision_bits = "300";
  EXPECT_EQ(resolve_precision(c), 300);
  c.precision_bits = "30";
  EXPECT_THROW(resolve_precision(c), ConfigError);
  c.precision_bits = "12x";
  EXPECT_THROW(resolve_precision(c), ConfigError);
}

TEST(Config, ResolveLiteralParameter) {
  RunConfig c;
  c.t = "1.75";
  c.max_level = 2;
  ResolvedRun r = resolve(c);
  EXPECT_EQ(r.anchor_level, 0);
  EXPECT_TRUE(r.map.t() == BigReal("1.75", r.precision_bits));
  json m = r.metadata(10);
  EXPECT_TRUE(m["t"].is_string());
  EXPECT_FALSE(m.contains("t_anchor_level"));
  RenormLadder L = run_ladder(r);
  EXPECT_GE(L.depth(), 2);
}

TEST(Config, ResolveAnchorAndNotBorn) {
  RunConfig c;
  c.t = "auto:3";
  c.max_level = 2;
  ResolvedRun r = resolve(c);
  EXPECT_EQ(r.anchor_level, 3);
  RenormLadder L = run_ladder(r);
  EXPECT_EQ(L.depth(), 3);  // capped at the anchor
  c.t = "1.2";
  EXPECT_THROW(run_ladder(resolve(c)), LevelNotBornError);
  c.rel_tol = "0";
  EXPECT_THROW(resolve(c), ConfigError);
}
