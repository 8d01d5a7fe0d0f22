#include <gtest/gtest.h>

#include <random>

#include "setproof/error.hpp"
#include "setproof/script.hpp"
#include "setproof/session.hpp"
#include "support.hpp"

using namespace setproof;
using setproof::testing::F;

namespace {

Session make(std::vector<std::string> givens, const std::string& goal) {
  Theorem t;
  for (const auto& g : givens) t.givens.push_back(F(g));
  t.goal = F(goal);
  return Session(std::move(t));
}

void apply(Session& s, const char* line) { s.apply(parse_step_line(line)); }

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::ParseError, "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos == std::string::npos) return s;
  return s.replace(pos, from.size(), to);
}

const char* kTransitivity[] = {
    "suppose goal=0",
    "and-elim goal=0.0 given=H1",
    "unfold-subset-goal goal=0.0.0",
    "reexpress-given goal=0.0.0.0 given=H2 path= rule=subset-def dir=forward",
    "forall-elim goal=0.0.0.0.0 given=H2 term=x",
    "modus-ponens goal=0.0.0.0.0.0 given=H5 given2=H4",
    "comment goal=0.0.0.0.0.0.0 text=\"a <quoted> & \\\"escaped\\\" remark\"",
};

}  // namespace

TEST(Session, New) {
  auto s = make({}, "A sub A");
  EXPECT_EQ(s.version(), 0u);
  EXPECT_EQ(open_goals(s.state()).size(), 1u);
  EXPECT_TRUE(s.log().empty());
  auto p = make({"x in A"}, "x in A");
  EXPECT_EQ(open_goals(p.state())[0].givens[0].label, "H1");
  EXPECT_EQ(error_of([] { make({"contra"}, "x in A"); }).code(), ErrorCode::InvalidTheorem);
}

TEST(Session, DoUndoRedo) {
  auto s = make({}, "x in A -> x in A");
  auto before = s.outline(OutlineStyle::Text);
  auto root = s.state().root;
  apply(s, "suppose goal=0");
  EXPECT_EQ(s.version(), 1u);
  s.undo();
  EXPECT_EQ(s.state().root.get(), root.get());
  EXPECT_EQ(s.outline(OutlineStyle::Text), before);
  EXPECT_EQ(s.version(), 2u);
  EXPECT_TRUE(s.log().empty());
  ASSERT_EQ(s.redo_log().size(), 1u);
  s.redo();
  EXPECT_EQ(s.log().size(), 1u);
  EXPECT_TRUE(s.redo_log().empty());
  EXPECT_EQ(s.version(), 3u);
  EXPECT_EQ(error_of([&] { s.redo(); }).code(), ErrorCode::NothingToRedo);
}

TEST(Session, FailedStepChangesNothing) {
  auto s = make({}, "x in A -> x in A");
  apply(s, "suppose goal=0");
  s.undo();
  auto v = s.version();
  EXPECT_EQ(error_of([&] { apply(s, "split-and goal=0"); }).code(), ErrorCode::NotApplicable);
  EXPECT_EQ(s.version(), v);
  EXPECT_TRUE(s.log().empty());
  EXPECT_TRUE(s.can_redo());  // a failed step does not discard the redo side
}

TEST(Session, FreshUndoFails) {
  auto s = make({}, "A sub A");
  EXPECT_EQ(error_of([&] { s.undo(); }).code(), ErrorCode::NothingToUndo);
  EXPECT_EQ(s.version(), 0u);
}

TEST(Session, HundredStepsNoCap) {
  auto s = make({}, "A sub A");
  for (int i = 0; i < 100; ++i) s.apply(StepDescriptor{.kind = StepKind::Comment, .text = std::to_string(i)});
  EXPECT_EQ(s.undo_depth(), 100u);
  for (int i = 0; i < 100; ++i) s.undo();
  EXPECT_TRUE(s.log().empty());
  EXPECT_EQ(s.redo_depth(), 100u);
}

TEST(Session, HistoryMatchesReplayUnderRandomInterleaving) {
  std::mt19937 rng(17);
  auto s = make({"A sub B", "B sub C"}, "A sub B & B sub C -> A sub C");
  for (int i = 0; i < 300; ++i) {
    int op = std::uniform_int_distribution<int>(0, 3)(rng);
    if (op == 0 && s.can_undo()) {
      s.undo();
    } else if (op == 1 && s.can_redo()) {
      s.redo();
    } else if (auto goals = open_goals(s.state()); !goals.empty()) {
      std::vector<StepDescriptor> ready;
      for (const auto& t : applicable_steps(s.state(), goals[0].id)) {
        if (t.needs.empty()) ready.push_back(t.step);
      }
      ready.push_back(StepDescriptor{.kind = StepKind::Comment, .target = goals[0].id, .text = "c"});
      s.apply(ready[std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng)]);
    }
    Session replay(s.theorem());
    for (const auto& step : s.log()) replay.apply(step);
    ASSERT_EQ(replay.outline(OutlineStyle::Text), s.outline(OutlineStyle::Text));
  }
}

TEST(Persistence, FreshSessionHasEmptySteps) {
  auto xml = save_session(make({"A sub B"}, "A sub B"));
  EXPECT_NE(xml.find("<steps/>"), std::string::npos);
  EXPECT_NE(xml.find("<proof-session version=\"1\""), std::string::npos);
  EXPECT_NE(xml.find("<given label=\"H1\">A sub B</given>"), std::string::npos);
}

TEST(Persistence, RoundTrip) {
  auto s = make({}, "A sub B & B sub C -> A sub C");
  for (const char* line : kTransitivity) apply(s, line);
  s.undo();
  s.undo();
  auto xml = save_session(s);
  auto loaded = load_session(xml);
  EXPECT_EQ(save_session(loaded), xml);
  EXPECT_EQ(loaded.log(), s.log());
  EXPECT_EQ(loaded.redo_log(), s.redo_log());
  EXPECT_EQ(loaded.version(), s.version());
  for (auto style : {OutlineStyle::Text, OutlineStyle::Unicode, OutlineStyle::Html}) {
    EXPECT_EQ(loaded.outline(style), s.outline(style));
  }
  // Both history sides survive the round trip.
  loaded.redo();
  loaded.redo();
  EXPECT_NE(loaded.outline(OutlineStyle::Text).find("escaped"), std::string::npos);
  loaded.undo();
  EXPECT_EQ(loaded.log().size(), s.log().size() + 1);
  while (loaded.can_undo()) loaded.undo();
  EXPECT_TRUE(loaded.log().empty());
}

TEST(Persistence, CustomLabelsSurvive) {
  Theorem t;
  t.givens = {F("A sub B")};
  t.labels = {"hAB"};
  t.goal = F("A sub B");
  Session s(t);
  apply(s, "conclude goal=0 given=hAB");
  auto loaded = load_session(save_session(s));
  EXPECT_TRUE(is_complete(loaded.state()));
  EXPECT_EQ(save_session(loaded), save_session(s));
}

TEST(Persistence, UnknownKindNamed) {
  auto s = make({}, "x in A -> x in A");
  apply(s, "suppose goal=0");
  auto bad = replace(save_session(s), "kind=\"suppose\"", "kind=\"frobnicate\"");
  auto e = error_of([&] { load_session(bad); });
  EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  EXPECT_NE(std::string(e.what()).find("frobnicate"), std::string::npos);
}

TEST(Persistence, MalformedXmlReportsLine) {
  auto xml = save_session(make({"A sub B"}, "A sub B"));
  auto bad = replace(xml, "</theorem>", "</theorm>");
  auto e = error_of([&] { load_session(bad); });
  EXPECT_EQ(e.code(), ErrorCode::MalformedXml);
  EXPECT_EQ(e.position(), 6u);
}

TEST(Persistence, SchemaChecks) {
  auto xml = save_session(make({"A sub B"}, "A sub B"));
  for (const auto& bad : {
           replace(xml, " version=\"1\"", ""),
           replace(xml, "version=\"1\"", "version=\"2\""),
           replace(xml, "<steps/>", ""),
           replace(xml, "<goal>A sub B</goal>", ""),
           replace(xml, "<goal>A sub B</goal>", "<goal>A sub</goal>"),
           replace(xml, "<steps/>", "<steps><step goal=\"0\"/></steps>"),
           replace(xml, "<steps/>", "<steps><step kind=\"suppose\" goal=\"0\" colour=\"red\"/></steps>"),
           replace(xml, "<steps/>", "<steps/><extra/>"),
       }) {
    EXPECT_EQ(error_of([&] { load_session(bad); }).code(), ErrorCode::SchemaViolation) << bad;
  }
}

TEST(Persistence, ReplayFailureNamesStep) {
  auto s = make({}, "x in A -> x in A");
  apply(s, "suppose goal=0");
  apply(s, "conclude goal=0.0 given=H1");
  auto bad = replace(save_session(s), "given=\"H1\"", "given=\"H2\"");
  auto e = error_of([&] { load_session(bad); });
  EXPECT_EQ(e.code(), ErrorCode::ReplayFailure);
  EXPECT_EQ(e.position(), 2u);
  EXPECT_NE(std::string(e.what()).find("UnknownGiven"), std::string::npos);
}

TEST(Export, Html) {
  auto html = export_html(make({}, "A sub A"));
  EXPECT_TRUE(html.starts_with("<!DOCTYPE html>"));
  std::size_t n = 0;
  for (auto p = html.find("<li class=\"placeholder\""); p != std::string::npos;
       p = html.find("<li class=\"placeholder\"", p + 1)) {
    ++n;
  }
  EXPECT_EQ(n, 1u);

  auto done = make({"A sub A"}, "A sub A");
  apply(done, "comment goal=0 text=\"trivial\"");
  apply(done, "conclude goal=0 given=H1");
  auto out = export_html(done);
  EXPECT_EQ(out.find("<li class=\"placeholder\""), std::string::npos);
  EXPECT_NE(out.find("trivial"), std::string::npos);
  EXPECT_NE(out.find("∎"), std::string::npos);
}
