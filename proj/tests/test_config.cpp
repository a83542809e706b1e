// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "wsnemu/config.hpp"

using namespace wsnemu;

namespace {

const char* kRecorderExcerpt =
    "**.server.numPcapRec = 1\n"
    "**.server.pcapRecorder[0].networkEnabled = true\n"
    "**.server.pcapRecorder[0].serverIP = \"localhost\"\n"
    "**.server.pcapRecorder[0].serverPort = 4242\n"
    "**.server.pcapRecorder[0].pcapFile = \"results/server.pcap\"\n";

} // namespace

TEST_CASE("recorder socket excerpt parses to the expected settings")
{
    auto cfg = ScenarioConfig::parse(kRecorderExcerpt);
    CHECK(cfg.getInt("server.numPcapRec", 0) == 1);
    CHECK(cfg.getBool("server.pcapRecorder[0].networkEnabled", false) == true);
    CHECK(cfg.getString("server.pcapRecorder[0].serverIP", "") == "localhost");
    CHECK(cfg.getInt("server.pcapRecorder[0].serverPort", 0) == 4242);
    CHECK(cfg.getString("server.pcapRecorder[0].pcapFile", "") == "results/server.pcap");

    // wildcard form also matches longer module paths
    CHECK(cfg.getInt("Net.host[3].server.pcapRecorder[0].serverPort", 0) == 4242);
}

TEST_CASE("empty file yields defaults")
{
    auto cfg = ScenarioConfig::parse("");
    CHECK(cfg.getInt("emuci.port", 4242) == 4242);
    CHECK(cfg.getString("run.mode", "lockstep") == "lockstep");
    CHECK(cfg.getUint("run.seed", 1) == 1);
}

TEST_CASE("wrong value class raises a type error with the line")
{
    auto cfg = ScenarioConfig::parse("a = 1\nserverPort = \"hello\"\n");
    try {
        cfg.getInt("serverPort", 0);
        FAIL("expected ConfigTypeError");
    } catch (const ConfigTypeError& e) {
        CHECK(e.line == 2);
    }

    auto cfg2 = ScenarioConfig::parse("flag = 42\n");
    CHECK_THROWS_AS(cfg2.getBool("flag", false), ConfigTypeError);
}

TEST_CASE("syntax errors carry line numbers")
{
    try {
        ScenarioConfig::parse("ok = 1\nbroken line\n");
        FAIL("expected ConfigSyntaxError");
    } catch (const ConfigSyntaxError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(ScenarioConfig::parse("[unclosed\n"), ConfigSyntaxError);
    CHECK_THROWS_AS(ScenarioConfig::parse("x = \"unterminated\n"), ConfigSyntaxError);
}

TEST_CASE("sections, comments, hex and negative values")
{
    auto cfg = ScenarioConfig::parse("[General]\n"
                                     "# a comment\n"
                                     "pan = 0x22  # trailing comment\n"
                                     "sens = -85\n"
                                     "name = bare_word\n");
    CHECK(cfg.getInt("pan", 0) == 0x22);
    CHECK(cfg.getInt("sens", 0) == -85);
    CHECK(cfg.getString("name", "") == "bare_word");
    CHECK(cfg.entries()[0].section == "General");
}

TEST_CASE("exact keys override wildcard keys")
{
    auto cfg = ScenarioConfig::parse("**.port = 1\n"
                                     "emuci.port = 2\n");
    CHECK(cfg.getInt("emuci.port", 0) == 2);
    CHECK(cfg.getInt("other.port", 0) == 1);

    // longer wildcard suffix beats shorter
    auto cfg2 = ScenarioConfig::parse("**.port = 1\n"
                                      "**.emuci.port = 3\n");
    CHECK(cfg2.getInt("x.emuci.port", 0) == 3);
    CHECK(cfg2.getInt("x.other.port", 0) == 1);
}

TEST_CASE("property: exact wins over wildcard for generated configs")
{
    std::mt19937 rng(23);
    const char* segs[] = {"a", "b", "node", "port", "srv"};
    for (int trial = 0; trial < 300; ++trial) {
        // build a random two- or three-segment path
        std::string path = segs[rng() % 5];
        int depth = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < depth; ++i)
            path += std::string(".") + segs[rng() % 5];

        int exactVal = static_cast<int>(rng() % 1000);
        int wildVal = exactVal + 1;
        std::string text;
        bool exactFirst = rng() % 2;
        std::string wildcardKey = "**." + path.substr(path.find('.') + 1);
        if (exactFirst)
            text = path + " = " + std::to_string(exactVal) + "\n" + wildcardKey + " = " +
                   std::to_string(wildVal) + "\n";
        else
            text = wildcardKey + " = " + std::to_string(wildVal) + "\n" + path + " = " +
                   std::to_string(exactVal) + "\n";
        auto cfg = ScenarioConfig::parse(text);
        CHECK(cfg.getInt(path, -1) == exactVal);
    }
}

TEST_CASE("collectIndices finds node definitions")
{
    auto cfg = ScenarioConfig::parse("**.world.node[2].behavior = \"echo\"\n"
                                     "**.world.node[2].shortAddr = 2\n"
                                     "**.world.node[7].behavior = \"sink\"\n");
    auto ids = cfg.collectIndices("world.node[");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == 2);
    CHECK(ids[1] == 7);
}
