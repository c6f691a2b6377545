#include "doctest.h"

#include "ndnet/ndtm.hpp"
#include "ndnet/correctness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ndnet;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path corpus() { return NDNET_CORPUS_DIR; }

Machine load_machine(const std::string& name) {
    return parse_machine(read_file(corpus() / "machines" / name));
}

std::vector<Move> sorted_moves(std::vector<Move> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("machine files parse and serialize") {
    Machine m = load_machine("m1.tm");
    CHECK(m.p() == 2);
    CHECK(m.q() == 1);
    CHECK(m.symbols == std::vector<std::string>{"0", "1"});
    CHECK(m.states == std::vector<std::string>{"s0"});
    REQUIRE(m.trans.size() == 3);
    CHECK(m.trans[0].in_sym == 0);
    CHECK(m.trans[0].in_state == 0);
    CHECK(m.trans[0].out == Move{1, 0, Dir::Right});

    // serialization parses back to the same machine
    Machine m2 = parse_machine(serialize_machine(m));
    CHECK(m2.symbols == m.symbols);
    CHECK(m2.states == m.states);
    CHECK(m2.trans.size() == m.trans.size());
    for (std::size_t i = 0; i < m.trans.size(); ++i) {
        CHECK(m2.trans[i].in_sym == m.trans[i].in_sym);
        CHECK(m2.trans[i].in_state == m.trans[i].in_state);
        CHECK(m2.trans[i].out == m.trans[i].out);
    }
}

TEST_CASE("machine parse errors") {
    CHECK_THROWS_AS(parse_machine(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_machine("symbols 0\n"), std::invalid_argument);  // no states
    CHECK_THROWS_AS(parse_machine("symbols 0 0\nstates s\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_machine("symbols 0\nstates halt\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_machine("symbols 0\nstates s\ntrans 0 s -> 1 s R\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_machine("symbols 0\nstates s\ntrans 0 s -> 0 s X\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_machine("symbols 0\nstates s\ntrans 0 s -> 0 s R\ntrans 0 s -> 0 s R\n"),
        std::invalid_argument);  // duplicate transition
    // halt is fine as a target
    Machine m = parse_machine("symbols 0\nstates s\ntrans 0 s -> 0 halt L\n");
    CHECK(m.trans[0].out.state == 1);  // q == 1, halt state index
}

TEST_CASE("padding fills every configuration up to the branching factor") {
    Machine m = load_machine("m1.tm");
    CHECK(branching_factor(m) == 2);
    PaddedMachine pm = pad_with_halt(m);
    CHECK(pm.m == 2);
    CHECK(pm.in_space() == 2);
    CHECK(pm.out_space() == 8);

    // (0, s0) has its two table moves
    CHECK(sorted_moves(oracle_step(pm, 0, 0)) ==
          sorted_moves({Move{1, 0, Dir::Right}, Move{0, 0, Dir::Left}}));
    // (1, s0) has one table move and one halting pad
    CHECK(sorted_moves(oracle_step(pm, 1, 0)) ==
          sorted_moves({Move{1, 0, Dir::Right}, Move{1, 1, Dir::Right}}));

    Machine det = load_machine("m2_det.tm");
    CHECK(branching_factor(det) == 1);
    PaddedMachine pdet = pad_with_halt(det);
    // the unlisted configuration (1, s1) halts in place
    CHECK(oracle_step(pdet, 1, 1) == std::vector<Move>{Move{1, 2, Dir::Right}});

    CHECK_THROWS_AS(branching_factor(Machine{{"0"}, {"s"}, {}}), std::invalid_argument);
}

TEST_CASE("configuration indexing round trips") {
    PaddedMachine pm = pad_with_halt(load_machine("m2_det.tm"));  // p=2 q=2
    CHECK(pm.out_space() == 12);
    for (int i = 0; i < pm.out_space(); ++i) {
        Move mv = pm.move_of(i);
        CHECK(pm.out_index(mv) == i);
    }
    int seen[4] = {0, 0, 0, 0};
    for (int sym = 0; sym < pm.p; ++sym)
        for (int st = 0; st < pm.q; ++st) seen[pm.in_index(sym, st)]++;
    for (int i = 0; i < 4; ++i) CHECK(seen[i] == 1);
}

TEST_CASE("selector values encode and decode") {
    Formula y = Formula::pos_atom("y");
    Formula b3 = bool_formula(3, y);
    // right-nested sums of the dual, then par with y
    CHECK(b3.str() == "((~y + (~y + ~y)) @ y)");
    CHECK(bool_formula(1, y).str() == "(~y @ y)");

    for (int k : {1, 2, 3, 5}) {
        for (int i = 0; i < k; ++i) {
            ProofPtr p = encode_bool_value(k, i, y);
            CHECK(!check_proof(*p).has_value());
            REQUIRE(p->conclusion.size() == 1);
            CHECK(p->conclusion[0] == bool_formula(k, y));
            DeseqResult r = desequentialize(*p);
            CHECK(validate(r.structure).ok());
            CHECK(decode_bool_value(r.structure, k, y) == i);
        }
    }
    CHECK_THROWS_AS(encode_bool_value(3, 3, y), std::invalid_argument);
}

TEST_CASE("decode rejects nets that are not selector values") {
    Formula y = Formula::pos_atom("y");
    DeseqResult r = desequentialize(*encode_bool_value(3, 1, y));
    CHECK_THROWS_AS(decode_bool_value(r.structure, 2, y), DecodeError);  // wrong k
    CHECK_THROWS_AS(decode_bool_value(r.structure, 3, Formula::pos_atom("z")), DecodeError);

    DeseqResult ax = desequentialize(*parse_proof("(ax y)"));
    CHECK_THROWS_AS(decode_bool_value(ax.structure, 1, y), DecodeError);
}

TEST_CASE("the move relation net is a well-formed superposition") {
    PaddedMachine pm = pad_with_halt(load_machine("m1.tm"));
    ProofPtr rel = encode_move_relation(pm);
    CHECK(!check_proof(*rel).has_value());
    REQUIRE(rel->conclusion.size() == 2);

    // one nondeterministic join between consecutive moves of each block,
    // plus the same number again in the shared dual pad
    auto h = rule_histogram(*rel);
    CHECK(h[RuleKind::NWithR] == (pm.in_space() + 1) * (pm.m - 1));
    CHECK(h[RuleKind::WithR] == pm.in_space() - 1);  // the configuration table
    CHECK(h[RuleKind::TensorR] == 1);

    DeseqResult r = desequentialize(*rel);
    CHECK(validate(r.structure).ok());
}

TEST_CASE("one machine step agrees with the table") {
    for (const char* name : {"m1.tm", "m2_det.tm", "m3_branch3.tm"}) {
        INFO(name);
        PaddedMachine pm = pad_with_halt(load_machine(name));
        for (int sym = 0; sym < pm.p; ++sym)
            for (int st = 0; st < pm.q; ++st) {
                INFO(sym << " " << st);
                std::vector<Move> got = run_step(pm, sym, st);
                CHECK(got.size() == static_cast<std::size_t>(pm.m));
                CHECK(sorted_moves(got) == sorted_moves(oracle_step(pm, sym, st)));
            }
    }
}

TEST_CASE("run_step rejects out-of-range configurations") {
    PaddedMachine pm = pad_with_halt(load_machine("m1.tm"));
    CHECK_THROWS_AS(run_step(pm, 9, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_step(pm, 0, 9), std::invalid_argument);
}
