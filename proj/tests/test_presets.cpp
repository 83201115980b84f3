#include "npisim/tokyo/scenario.hpp"

#include <gtest/gtest.h>

using namespace npisim;
using namespace npisim::tokyo;
using engine::Breakpoint;
using engine::Schedule;

namespace {

using Bps = std::vector<Breakpoint>;

void expect_common(const ScenarioSpec& s)
{
    EXPECT_EQ(s.start_date, make_date(2020, 3, 1));
    EXPECT_EQ(s.mid_term_consciousness, Schedule(0, Bps{{26, 1}, {90, 0}}));
    EXPECT_EQ(s.long_term_consciousness, Schedule(0, Bps{{26, 1}}));
    EXPECT_EQ(s.school_closure_psych, Schedule(1, Bps{{86, 0}}));
    EXPECT_EQ(s.school_closure_commute, Schedule(1, Bps{{86, 0}}));
    EXPECT_EQ(s.focused_intervention, Schedule(0));
    EXPECT_EQ(s.new_normal, Schedule(0, Bps{{45, 1}}));
    EXPECT_TRUE(check_scenario(s).empty());
}

} // namespace

TEST(Presets, Realistic)
{
    const auto s = preset(PresetId::realistic);
    EXPECT_EQ(s.name, "realistic");
    expect_common(s);
    EXPECT_EQ(s.short_term_consciousness, Schedule(0, Bps{{26, 1}, {90, 0}, {126, 1}, {198, 0}}));
    EXPECT_EQ(s.stay_at_home, Schedule(0, Bps{{38, 1}, {86, 0}}));
}

TEST(Presets, SecondEmergency)
{
    const auto s = preset(PresetId::second_emergency);
    EXPECT_EQ(s.name, "second_emergency");
    expect_common(s);
    EXPECT_EQ(s.short_term_consciousness, Schedule(0, Bps{{26, 1}, {90, 0}, {126, 1}, {184, 0}}));
    EXPECT_EQ(s.stay_at_home, Schedule(0, Bps{{38, 1}, {86, 0}, {140, 1}, {184, 0}}));
}

TEST(Presets, PreEmptiveShorter)
{
    const auto s = preset(PresetId::pre_emptive_shorter);
    EXPECT_EQ(s.name, "pre_emptive_shorter");
    expect_common(s);
    EXPECT_EQ(s.short_term_consciousness, Schedule(0, Bps{{26, 1}, {90, 0}, {119, 1}, {149, 0}}));
    EXPECT_EQ(s.stay_at_home, Schedule(0, Bps{{38, 1}, {86, 0}, {119, 1}, {149, 0}}));
}

TEST(Presets, Exhaustive)
{
    const auto s = preset(PresetId::exhaustive);
    EXPECT_EQ(s.name, "exhaustive");
    expect_common(s);
    EXPECT_EQ(s.short_term_consciousness, Schedule(0, Bps{{26, 1}, {90, 0}, {124, 1}, {184, 0}}));
    EXPECT_EQ(s.stay_at_home, Schedule(0, Bps{{28, 1}, {90, 0}, {94, 1}, {184, 0}}));
    EXPECT_EQ(s.stay_at_home.at(28), 1.0);
    EXPECT_EQ(s.stay_at_home.at(27), 0.0);
}

TEST(Presets, LookupByName)
{
    for (const auto& [name, id] : preset_ids) {
        EXPECT_EQ(preset(name), preset(id));
    }
    EXPECT_EQ(all_presets().size(), 4u);
}

TEST(Presets, UnknownNameListsValidOnes)
{
    try {
        preset("bogus");
        FAIL() << "expected UnknownPreset";
    }
    catch (const UnknownPreset& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("bogus"), std::string::npos);
        for (const auto& [name, id] : preset_ids) {
            EXPECT_NE(msg.find(name), std::string::npos);
        }
    }
}

TEST(CheckScenario, FlagsNonBinaryAndNegativeDays)
{
    auto s = preset(PresetId::realistic);
    s.stay_at_home = Schedule(0, Bps{{-1, 1}, {10, 2}});
    s.focused_intervention = Schedule(0.5);
    const auto v = check_scenario(s);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NE(v[0].find("stay_at_home"), std::string::npos);
    EXPECT_NE(v[1].find("stay_at_home"), std::string::npos);
    EXPECT_NE(v[2].find("focused_intervention"), std::string::npos);
}
