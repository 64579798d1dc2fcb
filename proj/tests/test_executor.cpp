#include <random>

#include "doctest.h"
#include "rsp/execute.hpp"
#include "rsp/planner.hpp"
#include "rsp/window.hpp"
#include "test_util.hpp"

using namespace rsp;
using namespace rsp::testutil;

namespace {

std::vector<Triple> sample_data() {
    return {
        {iri("alice"), iri("knows"), iri("bob")},
        {iri("alice"), iri("knows"), iri("carol")},
        {iri("bob"), iri("knows"), iri("carol")},
        {iri("alice"), iri("age"), Term::typed_literal("30", "http://t/int")},
        {iri("bob"), iri("age"), Term::typed_literal("31", "http://t/int")},
        {iri("loop"), iri("knows"), iri("loop")},
    };
}

}  // namespace

TEST_CASE("scan binds variables in subject, predicate, object order") {
    auto data = sample_data();

    auto all = scan_pattern(data, tp(var("s"), var("p"), var("o")));
    CHECK(all.schema == std::vector<std::string>{"s", "p", "o"});
    CHECK(all.cardinality() == data.size());

    auto knows = scan_pattern(data, tp(var("s"), iri("knows"), var("o")));
    CHECK(knows.schema == std::vector<std::string>{"s", "o"});
    CHECK(knows.cardinality() == 4);

    auto fully_bound = scan_pattern(data, tp(iri("alice"), iri("knows"), iri("bob")));
    CHECK(fully_bound.schema.empty());
    CHECK(fully_bound.cardinality() == 1);

    CHECK(scan_pattern(data, tp(iri("nobody"), var("p"), var("o"))).cardinality() == 0);
}

TEST_CASE("repeated variable in a pattern requires equal terms") {
    auto table = scan_pattern(sample_data(), tp(var("x"), iri("knows"), var("x")));
    CHECK(table.schema == std::vector<std::string>{"x"});
    REQUIRE(table.cardinality() == 1);
    CHECK(table.rows[0][0] == iri("loop"));
}

TEST_CASE("hash join keeps bag semantics and schema order") {
    auto data = sample_data();
    auto knows = scan_pattern(data, tp(var("s"), iri("knows"), var("o")));
    auto ages = scan_pattern(data, tp(var("s"), iri("age"), var("a")));

    auto joined = hash_join(knows, ages);
    CHECK(joined.schema == std::vector<std::string>{"s", "o", "a"});
    // alice has 2 knows rows, bob 1; loop has no age.
    CHECK(joined.cardinality() == 3);

    // Duplicate build rows multiply: join knows with itself on s.
    auto knows2 = scan_pattern(data, tp(var("s"), iri("knows"), var("o2")));
    auto self = hash_join(knows, knows2);
    // alice: 2*2, bob: 1*1, loop: 1*1.
    CHECK(self.cardinality() == 6);
    CHECK(hash_join(knows, knows2).cardinality() == hash_join(knows2, knows).cardinality());
}

TEST_CASE("join without shared variables is a cartesian product") {
    auto data = sample_data();
    auto knows = scan_pattern(data, tp(var("a"), iri("knows"), var("b")));
    auto ages = scan_pattern(data, tp(var("x"), iri("age"), var("y")));
    auto cross = hash_join(knows, ages);
    CHECK(cross.cardinality() == knows.cardinality() * ages.cardinality());
    CHECK(cross.schema == std::vector<std::string>{"a", "b", "x", "y"});
}

TEST_CASE("project and union keep multiplicity") {
    auto data = sample_data();
    auto knows = scan_pattern(data, tp(var("s"), iri("knows"), var("o")));
    auto projected = project(knows, {Variable{"s"}});
    CHECK(projected.schema == std::vector<std::string>{"s"});
    CHECK(projected.cardinality() == 4);  // alice twice, no dedup

    BindingTable reordered;
    reordered.schema = {"o", "s"};
    reordered.rows.push_back({iri("z"), iri("y")});
    auto merged = union_tables(knows, reordered);
    CHECK(merged.schema == knows.schema);
    CHECK(merged.cardinality() == 5);
    CHECK(merged.rows.back() == std::vector<Term>{iri("y"), iri("z")});
}

TEST_CASE("static plans match the nested-loop oracle") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 150; ++i) {
        RandomInstance inst = random_instance(rng, /*allow_union=*/true);
        LogicalPlan plan = static_plan(inst.algebra);
        BindingTable result = execute_plan(plan, inst.data);
        CHECK(sorted_row_keys(result) == oracle_evaluate(inst.data, inst.algebra));
    }
}

TEST_CASE("results do not depend on worker count or counting") {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 40; ++i) {
        RandomInstance inst = random_instance(rng, true);
        LogicalPlan plan = static_plan(inst.algebra);
        ExecOptions serial{/*counting=*/false, nullptr, /*workers=*/1};
        ExecOptions parallel{/*counting=*/true, nullptr, /*workers=*/4};
        ExecTrace trace;
        CHECK(sorted_row_keys(execute_plan(plan, inst.data, serial)) ==
              sorted_row_keys(execute_plan(plan, inst.data, parallel, &trace)));
    }
}

TEST_CASE("trace records exact per-node cardinalities") {
    auto data = sample_data();
    auto scan_a = make_scan(tp(var("s"), iri("knows"), var("o")), 0);
    auto scan_b = make_scan(tp(var("s"), iri("age"), var("a")), 0);
    LogicalPlan plan = finish_plan(make_join(scan_a, scan_b, 0), {Variable{"s"}});

    ExecTrace trace;
    execute_plan(plan, data, {}, &trace);
    REQUIRE(trace.nodes.size() == 3);
    std::size_t scans = 0, joins = 0;
    for (const auto& node : trace.nodes) {
        if (node.is_operator) {
            CHECK(node.cardinality == 3);
            CHECK(node.height == 1);
            ++joins;
        } else {
            CHECK((node.cardinality == 4 || node.cardinality == 2));
            CHECK(node.height == 0);
            ++scans;
        }
    }
    CHECK(scans == 2);
    CHECK(joins == 1);
    CHECK(trace.intermediate_tuples() == 3);
}

TEST_CASE("scan cache is filled and reused") {
    auto data = sample_data();
    auto pattern = tp(var("s"), iri("knows"), var("o"));
    LogicalPlan plan = finish_plan(make_scan(pattern, 0), {Variable{"s"}, Variable{"o"}});

    ScanCache cache;
    ExecOptions opt;
    opt.scan_cache = &cache;
    auto first = execute_plan(plan, data, opt);
    REQUIRE(cache.count(pattern.key()) == 1);

    // A poisoned cache entry must be what leaves actually read.
    auto poisoned = std::make_shared<BindingTable>(*cache[pattern.key()]);
    poisoned->rows.pop_back();
    cache[pattern.key()] = poisoned;
    auto second = execute_plan(plan, data, opt);
    CHECK(second.cardinality() == first.cardinality() - 1);
}

TEST_CASE("window union concatenates batch multisets") {
    auto b1 = std::make_shared<MicroBatch>();
    b1->triples = {sample_data()[0], sample_data()[0]};
    auto b2 = std::make_shared<MicroBatch>();
    b2->triples = {sample_data()[1]};
    WindowInstance w{0, 0, 10, {b1, b2}};
    CHECK(w.input_triples() == 3);
    CHECK(union_window(w).size() == 3);
}

TEST_CASE("tumbling assembler tiles each window with its batches") {
    BatchAssembler assembler(10000, 10000, 5000);
    for (int i = 0; i < 4; ++i)
        assembler.add({sample_data()[0], i * 5000 + 100, "t"});

    auto none = assembler.tick(9999);
    CHECK(none.empty());
    auto first = assembler.tick(10000);
    REQUIRE(first.size() == 1);
    CHECK(first[0].window_index == 0);
    CHECK(first[0].start_ms == 0);
    CHECK(first[0].end_ms == 10000);
    REQUIRE(first[0].batches.size() == 2);
    CHECK(first[0].batches[0]->start_ms == 0);
    CHECK(first[0].batches[1]->start_ms == 5000);
    CHECK(first[0].input_triples() == 2);

    auto second = assembler.tick(20000);
    REQUIRE(second.size() == 1);
    CHECK(second[0].window_index == 1);
    CHECK(second[0].input_triples() == 2);
}

TEST_CASE("sliding windows share batches and late events are dropped") {
    BatchAssembler assembler(10000, 5000, 5000);
    for (int i = 0; i < 3; ++i) CHECK(assembler.add({sample_data()[0], i * 5000 + 1, "t"}));

    auto w0 = assembler.tick(10000);
    REQUIRE(w0.size() == 1);
    CHECK(w0[0].input_triples() == 2);

    CHECK_FALSE(assembler.add({sample_data()[0], 3000, "t"}));  // before the clock
    CHECK(assembler.late_dropped() == 1);

    auto w1 = assembler.tick(15000);
    REQUIRE(w1.size() == 1);
    CHECK(w1[0].start_ms == 5000);
    CHECK(w1[0].end_ms == 15000);
    CHECK(w1[0].input_triples() == 2);  // batch [5000,10000) shared with w0
    CHECK(w0[0].batches[1] == w1[0].batches[0]);

    CHECK_THROWS_AS(assembler.tick(14000), ClockRegression);
}

TEST_CASE("a long tick catches up on every due window") {
    BatchAssembler assembler(2000, 2000, 1000);
    for (int i = 0; i < 8; ++i) assembler.add({sample_data()[0], i * 1000 + 5, "t"});
    auto windows = assembler.tick(8000);
    REQUIRE(windows.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(windows[i].window_index == i);
        CHECK(windows[i].input_triples() == 2);
    }
    CHECK(assembler.pending_batches() == 0);
}
