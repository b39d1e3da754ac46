#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mcsim/engine.hpp"
#include "mcsim/trace.hpp"

using namespace mcsim;

namespace {

Trace fig4_trace(Algorithm a) {
  const auto ts = test::table1();
  SimOptions opts;
  opts.algorithm = a;
  opts.horizon = 60;
  return simulate(ts, Scenario::load_script_file(test::fixture("fig4.script"), ts), opts).trace;
}

}  // namespace

TEST(Export, EmptyTraceIsHeaderOnly) {
  EXPECT_EQ(export_csv({}), "t,kind,task,job,value,info\n");
  EXPECT_EQ(export_jsonl({}), "");
  EXPECT_EQ(export_gantt({}), "task,start,end,mode,pattern\n");
}

TEST(Export, CsvAndJsonlRoundTrip) {
  for (auto a : kAllAlgorithms) {
    const auto trace = fig4_trace(a);
    ASSERT_FALSE(trace.empty());
    EXPECT_EQ(parse_csv(export_csv(trace)), trace);
    EXPECT_EQ(parse_jsonl(export_jsonl(trace)), trace);
    EXPECT_EQ(parse_csv(export_trace(trace, TraceFormat::Csv)), trace);
  }
}

TEST(Export, GanttFirstPeriodFollowsPriorityOrder) {
  const auto segs = gantt_segments(fig4_trace(Algorithm::Multimode));
  ASSERT_GE(segs.size(), 4u);
  const std::vector<GanttSegment> expected{{"pi3", 0, 5, "Normal", "Regular"},
                                           {"pi1", 5, 10, "Normal", "Regular"},
                                           {"pi4", 10, 14, "Normal", "Regular"},
                                           {"pi2", 14, 19, "Normal", "Regular"}};
  EXPECT_EQ(std::vector<GanttSegment>(segs.begin(), segs.begin() + 4), expected);
}

TEST(Export, GanttCarriesModeAndPattern) {
  const auto segs = gantt_segments(fig4_trace(Algorithm::Multimode));
  bool critical = false;
  for (const auto& s : segs) {
    if (s.task == "pi2" && s.start == 32) {
      critical = true;
      EXPECT_EQ(s.end, 37);
      EXPECT_EQ(s.mode, "Critical");
      EXPECT_EQ(s.pattern, "Stretching");
    }
  }
  EXPECT_TRUE(critical);
}

TEST(Export, FormatNames) {
  EXPECT_EQ(trace_format_from_string("gantt-rows"), TraceFormat::Gantt);
  EXPECT_EQ(trace_format_from_string("jsonl"), TraceFormat::Jsonl);
  EXPECT_THROW(trace_format_from_string("xml"), std::invalid_argument);
  EXPECT_THROW(parse_csv("a,b\n"), std::invalid_argument);
  EXPECT_EQ(event_kind_from_string("NestedPressure"), EventKind::NestedPressure);
}

TEST(EventLog, CountsWithoutRecording) {
  EventLog log(false);
  int seen = 0;
  log.set_observer([&](const TraceEvent&) { ++seen; });
  log.emit({1, EventKind::Idle, "", 0, 0, ""});
  EXPECT_EQ(log.count(), 1u);
  EXPECT_TRUE(log.events().empty());
  EXPECT_EQ(seen, 1);
}
