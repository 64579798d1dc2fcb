#include <map>
#include <random>
#include <thread>

#include "doctest.h"
#include "rsp/generator.hpp"
#include "rsp/ntriples.hpp"
#include "rsp/topic_log.hpp"
#include "test_util.hpp"

using namespace rsp;
using namespace rsp::testutil;

namespace {

TimedTriple event(int i, const std::string& topic = "t") {
    return {{iri("s" + std::to_string(i)), iri("p"), iri("o")}, i, topic};
}

std::multiset<std::string> payload_multiset(const std::vector<Message>& messages) {
    std::multiset<std::string> out;
    for (const Message& m : messages)
        for (const TimedTriple& e : m.payload) out.insert(serialize_replay_line(e));
    return out;
}

}  // namespace

TEST_CASE("offsets are contiguous per partition and publish is round-robin") {
    TopicLog log;
    log.create_topic("t", 3);
    CHECK(log.partition_count("t") == 3);
    // 6 publishes -> each partition gets offsets 0 then 1.
    for (int i = 0; i < 6; ++i) CHECK(log.publish("t", {event(i)}) == static_cast<unsigned>(i / 3));

    auto res = log.poll("t", log.begin_offsets("t"), 100);
    CHECK(res.messages.size() == 6);
    for (const auto& [partition, next] : res.next) CHECK(next == 2);
}

TEST_CASE("unknown topic and out-of-range offsets throw") {
    TopicLog log;
    CHECK_THROWS_AS(log.publish("missing", {event(0)}), UnknownTopic);
    CHECK_THROWS_AS(log.poll("missing", {}, 1), UnknownTopic);
    log.create_topic("t", 1);
    log.publish("t", {event(0)});
    OffsetMap past{{0, 5}};
    CHECK_THROWS_AS(log.poll("t", past, 1), OffsetOutOfRange);
}

TEST_CASE("resuming from returned offsets yields each message exactly once") {
    TopicLog log;
    log.create_topic("t", 4);
    std::multiset<std::string> published;
    for (int i = 0; i < 137; ++i) {
        log.publish("t", {event(i)});
        published.insert(serialize_replay_line(event(i)));
    }

    std::mt19937_64 rng(11);
    std::multiset<std::string> consumed;
    OffsetMap at = log.begin_offsets("t");
    while (true) {
        auto res = log.poll("t", at, 1 + rng() % 10);  // ragged chunk sizes
        if (res.messages.empty()) break;
        for (const std::string& line : payload_multiset(res.messages)) consumed.insert(line);
        at = res.next;
    }
    CHECK(consumed == published);
}

TEST_CASE("concurrent publishers lose nothing") {
    TopicLog log;
    log.create_topic("t", 4);
    constexpr int kThreads = 4, kPerThread = 250;
    std::vector<std::thread> workers;
    for (int w = 0; w < kThreads; ++w)
        workers.emplace_back([&log, w] {
            for (int i = 0; i < kPerThread; ++i) log.publish("t", {event(w * kPerThread + i)});
        });
    for (auto& t : workers) t.join();

    auto res = log.poll("t", log.begin_offsets("t"), 10000);
    auto seen = payload_multiset(res.messages);
    CHECK(seen.size() == kThreads * kPerThread);
    for (int i = 0; i < kThreads * kPerThread; ++i)
        CHECK(seen.count(serialize_replay_line(event(i))) == 1);
}

TEST_CASE("trim drops old messages but preserves later offsets") {
    TopicLog log;
    log.create_topic("t", 1);
    for (int i = 0; i < 10; ++i) log.publish("t", {event(i)});
    log.trim("t", {{0, 7}});
    CHECK_THROWS_AS(log.poll("t", {{0, 3}}, 1), OffsetOutOfRange);
    auto res = log.poll("t", {{0, 7}}, 100);
    REQUIRE(res.messages.size() == 3);
    CHECK(res.messages.front().offset == 7);
    CHECK(res.messages.front().payload.front() == event(7));
}

TEST_CASE("mix schedule parsing") {
    auto sched = MixSchedule::parse(
        "# comment\n"
        "segment 0 flow=0.8,temperature=0.1,chlorine=0.1\n"
        "\n"
        "segment 10 flow=0.1,temperature=0.1,chlorine=0.8\n");
    REQUIRE(sched.segments.size() == 2);
    CHECK(sched.segment_for(0).proportions[0].second == doctest::Approx(0.8));
    CHECK(sched.segment_for(9).start_window == 0);
    CHECK(sched.segment_for(10).start_window == 10);
    CHECK(sched.segment_for(99).start_window == 10);
    CHECK(sched.observation_types() ==
          std::vector<std::string>{"chlorine", "flow", "temperature"});

    CHECK_THROWS_AS(MixSchedule::parse(""), ConfigError);
    CHECK_THROWS_AS(MixSchedule::parse("segment 0 flow=0.5,temp=0.4"), ConfigError);  // sum != 1
    CHECK_THROWS_AS(MixSchedule::parse("segment 0 flow=1\nsegment 0 flow=1"), ConfigError);
    CHECK_THROWS_AS(MixSchedule::parse("window 0 flow=1"), ConfigError);
}

TEST_CASE("largest-remainder apportionment") {
    auto counts = apportion({{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}, 10);
    CHECK(counts == std::vector<std::pair<std::string, int>>{{"a", 5}, {"b", 3}, {"c", 2}});

    // Every type stays within one of its exact share, totals always match.
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        int k = 2 + static_cast<int>(rng() % 4);
        std::vector<double> raw(k);
        double sum = 0;
        for (double& r : raw) sum += (r = 1 + static_cast<double>(rng() % 100));
        std::vector<std::pair<std::string, double>> props;
        for (int i = 0; i < k; ++i) props.emplace_back("t" + std::to_string(i), raw[i] / sum);
        int total = static_cast<int>(rng() % 500);
        auto result = apportion(props, total);
        int got = 0;
        for (int i = 0; i < k; ++i) {
            got += result[i].second;
            CHECK(std::abs(result[i].second - props[i].second * total) < 1.0);
        }
        CHECK(got == total);
    }
}

TEST_CASE("generator is deterministic and honors the rate") {
    auto sched = MixSchedule::parse("segment 0 flow=0.6,temperature=0.4\n");
    GeneratorParams p;
    p.rate_tps = 300;
    p.windows = 4;
    p.window_ms = 10000;
    p.batch_ms = 5000;
    p.seed = 42;

    auto a = generate_stream(sched, p);
    auto b = generate_stream(sched, p);
    CHECK(a == b);

    // 300 tps * 10 s windows = 3000 triples per window.
    CHECK(a.size() == 4u * 3000u);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) CHECK(a[i].event_time_ms <= a[i + 1].event_time_ms);
    for (const TimedTriple& e : a) {
        CHECK(e.event_time_ms >= 0);
        CHECK(e.event_time_ms < 40000);
    }

    p.seed = 43;
    CHECK(generate_stream(sched, p) != a);
}

TEST_CASE("generator mix flip changes per-window type histogram") {
    auto sched = MixSchedule::parse(
        "segment 0 flow=0.8,temperature=0.2\n"
        "segment 2 flow=0.2,temperature=0.8\n");
    GeneratorParams p;
    p.rate_tps = 600;  // 200 observations per 1 s window
    p.windows = 4;
    p.window_ms = 1000;
    p.batch_ms = 500;

    auto stream = generate_stream(sched, p);
    std::map<int, std::map<std::string, int>> histogram;  // window -> topic -> events
    for (const TimedTriple& e : stream)
        ++histogram[static_cast<int>(e.event_time_ms / p.window_ms)][e.topic];
    for (int w : {0, 1}) {
        CHECK(histogram[w]["flow"] == 3 * 160);
        CHECK(histogram[w]["temperature"] == 3 * 40);
    }
    for (int w : {2, 3}) {
        CHECK(histogram[w]["flow"] == 3 * 40);
        CHECK(histogram[w]["temperature"] == 3 * 160);
    }
}

TEST_CASE("each observation expands to a three-triple star") {
    auto sched = MixSchedule::parse("segment 0 flow=1\n");
    GeneratorParams p;
    p.rate_tps = 30;
    p.windows = 1;
    auto stream = generate_stream(sched, p);
    REQUIRE(stream.size() % kTriplesPerObservation == 0);
    for (std::size_t i = 0; i < stream.size(); i += 3) {
        const Triple& has_value = stream[i].triple;
        const Triple& type = stream[i + 1].triple;
        const Triple& unit = stream[i + 2].triple;
        CHECK(has_value.predicate == Term::iri(vocab::kHasValue));
        CHECK(type.predicate == Term::iri(vocab::kType));
        CHECK(unit.predicate == Term::iri(vocab::kUnit));
        CHECK(has_value.object == type.subject);
        CHECK(has_value.object == unit.subject);
        CHECK(type.object == Term::iri(vocab::kObservationNs + "flow"));
    }
    // Distinct observations mint distinct value nodes.
    std::set<Term> values;
    for (std::size_t i = 0; i < stream.size(); i += 3) values.insert(stream[i].triple.object);
    CHECK(values.size() == stream.size() / 3);
}
