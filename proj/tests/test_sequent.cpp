#include "doctest.h"

#include "ndnet/correctness.hpp"
#include "ndnet/sequent.hpp"

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

std::vector<std::filesystem::path> corpus_proofs() {
    std::vector<std::filesystem::path> out;
    for (auto& e : std::filesystem::directory_iterator(corpus() / "proofs"))
        out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("rule constructors compute conclusions") {
    ProofPtr ax = make_ax(parse_formula("a"));
    CHECK(sequent_str(ax->conclusion) == "|- a, ~a");

    ProofPtr p = make_par(0, ax);
    CHECK(sequent_str(p->conclusion) == "|- (a @ ~a)");

    ProofPtr t = make_tensor(0, 0, make_ax(parse_formula("a")), make_ax(parse_formula("b")));
    CHECK(sequent_str(t->conclusion) == "|- ~a, ~b, (a * b)");

    ProofPtr w = make_with(0, make_ax(parse_formula("a")), make_ax(parse_formula("a")));
    CHECK(sequent_str(w->conclusion) == "|- (a & a), ~a");

    ProofPtr n = make_nwith(1, make_ax(parse_formula("~x")), make_ax(parse_formula("~x")));
    CHECK(sequent_str(n->conclusion) == "|- ~x, (x ^ x)");

    ProofPtr p1 = make_plus1(0, parse_formula("b"), make_ax(parse_formula("a")));
    CHECK(sequent_str(p1->conclusion) == "|- (a + b), ~a");

    ProofPtr p2 = make_plus2(0, parse_formula("b"), make_ax(parse_formula("a")));
    CHECK(sequent_str(p2->conclusion) == "|- (b + a), ~a");

    ProofPtr c = make_cut(parse_formula("a"), 0, 1, make_ax(parse_formula("a")),
                          make_ax(parse_formula("a")));
    CHECK(sequent_str(c->conclusion) == "|- ~a, a");
}

TEST_CASE("rule constructors reject bad applications") {
    ProofPtr axa = make_ax(parse_formula("a"));
    ProofPtr axb = make_ax(parse_formula("b"));

    CHECK_THROWS_AS(make_par(5, axa), ProofError);
    CHECK_THROWS_AS(make_tensor(0, 5, axa, axb), ProofError);
    // with needs identical contexts in identical order
    CHECK_THROWS_AS(make_with(0, axa, axb), ProofError);
    CHECK_THROWS_AS(make_nwith(0, axa, axb), ProofError);
    // cut needs dual formulas at the named positions
    CHECK_THROWS_AS(make_cut(parse_formula("a"), 0, 0, axa, axa), ProofError);
}

TEST_CASE("check_proof re-verifies recorded sequents") {
    ProofPtr good = make_with(0, make_ax(parse_formula("a")), make_ax(parse_formula("a")));
    CHECK(!check_proof(*good).has_value());

    // hand-build a broken node: conclusion does not follow from the premise
    auto bad = std::make_shared<SequentProof>();
    bad->rule = RuleKind::ParR;
    bad->conclusion = {parse_formula("(a @ b)")};
    bad->i = 0;
    bad->premises = {make_ax(parse_formula("a"))};
    auto err = check_proof(*bad);
    REQUIRE(err.has_value());
    CHECK(!err->empty());

    // tensor conclusions are compared as multisets, so reordering the
    // context is still a correct proof (exchange stays implicit)
    auto t = std::make_shared<SequentProof>(
        *make_tensor(0, 0, make_ax(parse_formula("a")), make_ax(parse_formula("b"))));
    std::swap(t->conclusion[0], t->conclusion[1]);  // |- ~b, ~a, (a * b)
    CHECK(!check_proof(*t).has_value());

    // but a conclusion with the wrong multiset is rejected
    auto t2 = std::make_shared<SequentProof>(*t);
    t2->conclusion[0] = parse_formula("~c");
    CHECK(check_proof(*t2).has_value());
}

TEST_CASE("corpus proofs all check") {
    int n = 0;
    for (auto& path : corpus_proofs()) {
        INFO(path.string());
        ProofPtr p = parse_proof(read_file(path));
        auto err = check_proof(*p);
        if (err) INFO(*err);
        CHECK(!err.has_value());
        ++n;
    }
    CHECK(n >= 30);
}

TEST_CASE("corpus exercises every rule") {
    std::map<RuleKind, int> total;
    int nwith_proofs = 0;
    for (auto& path : corpus_proofs()) {
        ProofPtr p = parse_proof(read_file(path));
        auto h = rule_histogram(*p);
        for (auto& [k, c] : h) total[k] += c;
        if (h.count(RuleKind::NWithR)) ++nwith_proofs;
    }
    for (RuleKind k : {RuleKind::Ax, RuleKind::ParR, RuleKind::TensorR, RuleKind::WithR,
                       RuleKind::NWithR, RuleKind::Plus1R, RuleKind::Plus2R, RuleKind::CutR})
        CHECK(total[k] > 0);
    CHECK(nwith_proofs >= 5);
}

TEST_CASE("proof terms round trip") {
    for (const char* term : {
             "(ax a)",
             "(ax (a ^ b))",
             "(par 0 (ax a))",
             "(tensor 0 0 (ax a) (ax b))",
             "(with 0 (plus1 1 ~b (ax a)) (plus2 1 ~a (ax b)))",
             "(nwith 1 (ax ~x) (ax ~x))",
             "(cut (x ^ x) 1 1 (nwith 1 (ax ~x) (ax ~x)) (nwith 1 (ax x) (ax x)))",
         }) {
        ProofPtr p = parse_proof(term);
        CHECK(print_proof_term(*p) == term);
        // the pretty format parses back to the same term
        ProofPtr q = parse_proof(format_proof(*p));
        CHECK(print_proof_term(*q) == term);
    }
}

TEST_CASE("proof term parse errors") {
    CHECK_THROWS_AS(parse_proof(""), ParseError);
    CHECK_THROWS_AS(parse_proof("(ax)"), ParseError);
    CHECK_THROWS_AS(parse_proof("(frob 0 (ax a))"), ParseError);
    CHECK_THROWS_AS(parse_proof("(par x (ax a))"), ParseError);
    CHECK_THROWS_AS(parse_proof("(par 0 (ax a)) junk"), ParseError);
    CHECK_THROWS_AS(parse_proof("(par 5 (ax a))"), ParseError);  // position out of range
}

TEST_CASE("desequentialize the par axiom") {
    DeseqResult r = desequentialize(*parse_proof("(par 0 (ax a))"));
    const ProofStructure& s = r.structure;
    CHECK(r.conclusion_ids == std::vector<OccId>{1});
    CHECK(serialize_structure(s) ==
          "occ 1 (a @ ~a)\n"
          "occ 2 a\n"
          "occ 3 ~a\n"
          "link 1 ID prem=- conc=2,3 w=1\n"
          "link 2 PAR prem=2,3 conc=1 w=1\n");
    CHECK(validate(s).ok());
}

TEST_CASE("desequentialized conclusions line up with the sequent") {
    for (auto& path : corpus_proofs()) {
        INFO(path.string());
        ProofPtr p = parse_proof(read_file(path));
        DeseqResult r = desequentialize(*p);
        ValidationReport rep = validate(r.structure);
        INFO(rep.str());
        REQUIRE(rep.ok());
        REQUIRE(r.conclusion_ids.size() == p->conclusion.size());
        for (std::size_t k = 0; k < r.conclusion_ids.size(); ++k) {
            CHECK(r.conclusion_ids[k] == static_cast<OccId>(k) + 1);
            CHECK(r.structure.occs.at(r.conclusion_ids[k]) == p->conclusion[k]);
        }
    }
}

TEST_CASE("superposition shares the context occurrence") {
    DeseqResult r = desequentialize(*parse_proof("(nwith 1 (ax ~x) (ax ~x))"));
    const ProofStructure& s = r.structure;
    CHECK(s.occs.size() == 4);  // not 6: the two ~x copies merge
    int ids = 0;
    for (auto& [lid, l] : s.links)
        if (l.kind == LinkKind::Id) {
            ++ids;
            CHECK(l.weight.lits.size() == 1);
            CHECK(l.conclusions[0] == 1);  // both conclude the shared ~x
        }
    CHECK(ids == 2);
}

TEST_CASE("removal splits a cut into its two sides") {
    DeseqResult r = desequentialize(*parse_proof("(cut a 0 1 (ax a) (ax a))"));
    LinkId cut = -1;
    for (auto& [lid, l] : r.structure.links)
        if (l.kind == LinkKind::Cut) cut = lid;
    REQUIRE(cut != -1);
    auto parts = removal(r.structure, cut);
    REQUIRE(parts.size() == 2);
    for (auto& part : parts) {
        CHECK(part.links.size() == 1);
        CHECK(part.links.begin()->second.kind == LinkKind::Id);
        CHECK(validate(part).ok());
    }
}

TEST_CASE("removal of a with produces the two restrictions") {
    DeseqResult r = desequentialize(
        *parse_proof("(with 0 (plus1 1 ~b (ax a)) (plus2 1 ~a (ax b)))"));
    LinkId w = -1;
    for (auto& [lid, l] : r.structure.links)
        if (l.kind == LinkKind::With) w = lid;
    REQUIRE(w != -1);
    auto parts = removal(r.structure, w);
    REQUIRE(parts.size() == 2);
    // each part is one branch; the with link and the dead branch are gone
    for (auto& part : parts) {
        CHECK(validate(part).ok());
        CHECK(part.links.count(w) == 0);
        for (auto& [lid, l] : part.links) CHECK(l.weight.is_one());
    }
    CHECK(parts[0].occs != parts[1].occs);
}

TEST_CASE("removal refuses non-terminal and atomic links") {
    DeseqResult r = desequentialize(*parse_proof("(par 0 (tensor 0 0 (ax a) (ax b)))"));
    LinkId tensor = -1, id = -1, par = -1;
    for (auto& [lid, l] : r.structure.links) {
        if (l.kind == LinkKind::Tensor) tensor = lid;
        if (l.kind == LinkKind::Id && id == -1) id = lid;
        if (l.kind == LinkKind::Par) par = lid;
    }
    CHECK_THROWS_AS(removal(r.structure, tensor), RemovalError);  // conclusion is consumed
    CHECK_THROWS_AS(removal(r.structure, id), RemovalError);
    CHECK(removal(r.structure, par).size() == 1);

    // splitting a tensor whose removal disconnects nothing is refused
    ProofStructure loop = parse_structure(read_file(corpus() / "nonnets" / "tensor_loop.net"));
    CHECK_THROWS_AS(removal(loop, 2), RemovalError);
}

TEST_CASE("sequentialize round trips the corpus proofs") {
    for (auto& path : corpus_proofs()) {
        INFO(path.string());
        ProofPtr p = parse_proof(read_file(path));
        DeseqResult r = desequentialize(*p);
        SeqResult sr = sequentialize(r.structure);
        REQUIRE(sr.outcome == SeqOutcome::Proved);
        REQUIRE(sr.proof != nullptr);
        CHECK(!check_proof(*sr.proof).has_value());
        CHECK(sr.proof->conclusion == p->conclusion);
        // the reconstructed proof may pick rules in another order, but it
        // rebuilds a structure of the same shape
        DeseqResult r2 = desequentialize(*sr.proof);
        CHECK(r2.structure.occs.size() == r.structure.occs.size());
        CHECK(r2.structure.links.size() == r.structure.links.size());
        std::map<LinkKind, int> ka, kb;
        for (auto& [lid, l] : r.structure.links) ka[l.kind]++;
        for (auto& [lid, l] : r2.structure.links) kb[l.kind]++;
        CHECK(ka == kb);
        CHECK(is_proof_net(r2.structure).outcome == NetVerdict::Outcome::Net);
    }
}

TEST_CASE("sequentialize reproduces simple proofs exactly") {
    for (const char* term : {"(ax a)", "(par 0 (ax a))", "(nwith 1 (ax ~x) (ax ~x))"}) {
        DeseqResult r = desequentialize(*parse_proof(term));
        SeqResult sr = sequentialize(r.structure);
        REQUIRE(sr.outcome == SeqOutcome::Proved);
        CHECK(print_proof_term(*sr.proof) == term);
    }
}

TEST_CASE("sequentialize fails on every non-net") {
    for (auto& e : std::filesystem::directory_iterator(corpus() / "nonnets")) {
        INFO(e.path().string());
        ProofStructure s = parse_structure(read_file(e.path()));
        SeqResult sr = sequentialize(s);
        CHECK(sr.outcome == SeqOutcome::Failed);
        CHECK(sr.proof == nullptr);
    }
}

TEST_CASE("sequentialize reports budget exhaustion") {
    DeseqResult r = desequentialize(
        *parse_proof("(cut (x ^ x) 1 1 (nwith 1 (ax ~x) (ax ~x)) (nwith 1 (ax x) (ax x)))"));
    SeqResult sr = sequentialize(r.structure, 1);
    CHECK(sr.outcome == SeqOutcome::BudgetExhausted);
}

TEST_CASE("generalized axioms cannot be sequentialized") {
    ProofStructure s = parse_structure(read_file(corpus() / "gax" / "gax_two.net"));
    CHECK(sequentialize(s).outcome == SeqOutcome::Failed);
}
