#include "doctest.h"

#include "ndnet/structure.hpp"

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

Monomial mono(std::initializer_list<std::pair<LinkId, bool>> lits) {
    Monomial m;
    for (auto& [id, sign] : lits) m.lits[id] = sign;
    return m;
}

}  // namespace

TEST_CASE("monomial algebra") {
    Monomial one;
    CHECK(one.is_one());
    CHECK(one.str() == "1");

    Monomial p = mono({{3, true}});
    Monomial np = mono({{3, false}});
    CHECK(p.str() == "p3");
    CHECK(np.str() == "!p3");
    CHECK(mono({{3, true}, {5, false}}).str() == "p3.!p5");

    auto prod = Monomial::product(p, mono({{5, false}}));
    REQUIRE(prod.has_value());
    CHECK(prod->str() == "p3.!p5");
    CHECK(Monomial::product(p, p) == p);
    CHECK(!Monomial::product(p, np).has_value());  // contradiction is zero

    Valuation v{{3, true}, {5, false}};
    CHECK(p.eval(v));
    CHECK(!np.eval(v));
    CHECK(one.eval(v));
    CHECK_THROWS_AS(mono({{9, true}}).eval(v), std::out_of_range);

    auto sub = mono({{3, true}, {5, false}}).substitute({{3, true}});
    REQUIRE(sub.has_value());
    CHECK(sub->str() == "!p5");
    CHECK(!mono({{3, true}}).substitute({{3, false}}).has_value());
    CHECK(mono({{3, true}}).substitute({{7, true}}) == mono({{3, true}}));
}

TEST_CASE("weight sums tile their target exactly") {
    Monomial one;
    Monomial p = mono({{1, true}});
    Monomial np = mono({{1, false}});
    Monomial pq = mono({{1, true}, {2, true}});
    Monomial pnq = mono({{1, true}, {2, false}});

    CHECK(weight_sum_equals_monomial({one}, one));
    CHECK(weight_sum_equals_monomial({p, np}, one));
    CHECK(weight_sum_equals_monomial({np, p}, one));
    CHECK(weight_sum_equals_monomial({p}, p));
    CHECK(weight_sum_equals_monomial({pq, pnq}, p));

    CHECK(!weight_sum_equals_monomial({}, one));
    CHECK(!weight_sum_equals_monomial({p}, one));          // half is missing
    CHECK(!weight_sum_equals_monomial({pq, np}, one));     // quarter + half
    CHECK(!weight_sum_equals_monomial({pq}, p));
    CHECK(!weight_sum_equals_monomial({np}, p));           // term outside the target
    CHECK(!weight_sum_equals_monomial({p, np}, p));        // overshoots
}

TEST_CASE("structure text format round trips") {
    std::string text = read_file(corpus() / "nonnets" / "with_tensor_cycle.net");
    ProofStructure s = parse_structure(text);
    CHECK(s.occs.size() == 5);
    CHECK(s.links.size() == 4);
    CHECK(s.links.at(1).weight == mono({{3, true}}));
    CHECK(s.links.at(2).weight == mono({{3, false}}));
    CHECK(s.links.at(3).kind == LinkKind::With);

    // serialization is canonical: parse(serialize(s)) == serialize-identical
    std::string ser = serialize_structure(s);
    ProofStructure s2 = parse_structure(ser);
    CHECK(serialize_structure(s2) == ser);
    CHECK(s2.occs.size() == s.occs.size());
    CHECK(s2.links.at(4).premises == s.links.at(4).premises);
}

TEST_CASE("structure parse errors") {
    CHECK_THROWS_AS(parse_structure("occ 1\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("occ 1 a\nocc 1 b\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("wat 1 a\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("occ 1 a\nlink 1 FROB prem=- conc=1 w=1\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("occ 1 a\nlink 1 ID prem=- conc=1,2 w=1\nlink 1 ID prem=- conc=1,2 w=1\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("occ 1 a\nlink 1 ID prem=- conc=1,2 w=oops\n"), ParseError);
}

TEST_CASE("validator accepts the corpus structures") {
    for (const char* dir : {"structures", "nonnets", "gax"}) {
        for (auto& e : std::filesystem::directory_iterator(corpus() / dir)) {
            INFO(e.path().string());
            ProofStructure s = parse_structure(read_file(e.path()));
            ValidationReport rep = validate(s);
            INFO(rep.str());
            CHECK(rep.ok());
        }
    }
}

TEST_CASE("validator rejects structural defects") {
    // premise pointing at a missing occurrence
    ProofStructure s = parse_structure("occ 1 a\nlink 1 ID prem=- conc=1,2 w=1\n");
    CHECK(validate(s).has("struct"));

    // occurrence concluded by nothing
    s = parse_structure("occ 1 a\nocc 2 ~a\nocc 3 b\nlink 1 ID prem=- conc=1,2 w=1\n");
    CHECK(validate(s).has("a"));

    // occurrence used as a premise twice
    s = parse_structure(
        "occ 1 a\nocc 2 ~a\nocc 3 (a + b)\nocc 4 (a + c)\n"
        "link 1 ID prem=- conc=1,2 w=1\n"
        "link 2 PLUS1 prem=1 conc=3 w=1\n"
        "link 3 PLUS1 prem=1 conc=4 w=1\n");
    CHECK(validate(s).has("a"));

    // identity link with non-dual conclusions
    s = parse_structure("occ 1 a\nocc 2 b\nlink 1 ID prem=- conc=1,2 w=1\n");
    CHECK(validate(s).has("a"));

    // tensor conclusion that is not the product of its premises
    s = parse_structure(
        "occ 1 a\nocc 2 ~a\nocc 3 b\nocc 4 ~b\nocc 5 (a * a)\n"
        "link 1 ID prem=- conc=1,2 w=1\nlink 2 ID prem=- conc=3,4 w=1\n"
        "link 3 TENSOR prem=1,3 conc=5 w=1\n");
    CHECK(validate(s).has("a"));
}

TEST_CASE("validator rejects weight defects") {
    // weight names a link that owns no eigenweight
    ProofStructure s = parse_structure("occ 1 a\nocc 2 ~a\nlink 1 ID prem=- conc=1,2 w=p1\n");
    CHECK(validate(s).has("d"));

    // conclusion occurrences carry weight p3 / !p3 instead of 1
    s = parse_structure(
        "occ 1 a\nocc 2 a\nocc 3 (a & a)\nocc 4 ~a\nocc 5 ~a\n"
        "link 1 ID prem=- conc=1,4 w=p3\n"
        "link 2 ID prem=- conc=2,5 w=!p3\n"
        "link 3 WITH prem=1,2 conc=3 w=1\n");
    CHECK(validate(s).has("c"));

    // with premises must weigh w(L).p and w(L).!p: here both branches use p3
    s = parse_structure(
        "occ 1 a\nocc 2 a\nocc 3 (a & a)\nocc 4 ~a\n"
        "link 1 ID prem=- conc=1,4 w=p3\n"
        "link 2 ID prem=- conc=2,4 w=p3\n"
        "link 3 WITH prem=1,2 conc=3 w=1\n");
    ValidationReport rep = validate(s);
    CHECK(rep.has("f"));
    CHECK(rep.has("g"));  // the two identity links overlap on the shared occurrence

    // a weight mentioning p7 must sit below w(link 7) = !p3; bare p7 does not
    s = parse_structure(
        "occ 1 a\nocc 2 (a & a)\nocc 3 (a & (a & a))\nocc 4 ~a\nocc 5 a\nocc 6 a\n"
        "link 3 WITH prem=1,2 conc=3 w=1\n"
        "link 7 WITH prem=5,6 conc=2 w=!p3\n"
        "link 1 ID prem=- conc=1,4 w=p3\n"
        "link 2 ID prem=- conc=5,4 w=p7\n"
        "link 4 ID prem=- conc=6,4 w=!p3.!p7\n");
    CHECK(validate(s).has("e"));
}

TEST_CASE("validator accepts nested additive weights") {
    ProofStructure s = parse_structure(
        "occ 1 a\nocc 2 (a & a)\nocc 3 (a & (a & a))\nocc 4 ~a\nocc 5 a\nocc 6 a\n"
        "link 3 WITH prem=1,2 conc=3 w=1\n"
        "link 7 WITH prem=5,6 conc=2 w=!p3\n"
        "link 1 ID prem=- conc=1,4 w=p3\n"
        "link 2 ID prem=- conc=5,4 w=!p3.p7\n"
        "link 4 ID prem=- conc=6,4 w=!p3.!p7\n");
    ValidationReport rep = validate(s);
    INFO(rep.str());
    CHECK(rep.ok());
}

TEST_CASE("formula weight collects concluder weights") {
    ProofStructure s = parse_structure(read_file(corpus() / "nonnets" / "with_tensor_cycle.net"));
    WeightSum w = formula_weight(s, 4);  // shared ~a occurrence
    CHECK(w.terms.size() == 2);
    CHECK(w.str() == "!p3 + p3");  // terms are sorted
    CHECK(formula_weight(s, 5).terms.size() == 1);
    CHECK(formula_weight(s, 5).terms[0].is_one());
}

TEST_CASE("slices select the surviving material") {
    ProofStructure s = parse_structure(read_file(corpus() / "nonnets" / "with_tensor_cycle.net"));
    Valuation v{{3, true}};
    Slice sl = slice(s, v);
    CHECK(sl.links == std::set<LinkId>{1, 3, 4});
    CHECK(sl.occs == std::set<OccId>{1, 3, 4, 5});  // occ 2 lives in the dead branch
    // under p3 the with link keeps its left premise
    CHECK(slice_premise(s.links.at(3), v) == 1);
    CHECK(slice_premise(s.links.at(3), Valuation{{3, false}}) == 2);
    CHECK_THROWS_AS(slice_premise(s.links.at(4), v), std::invalid_argument);
}

TEST_CASE("conclusions are the occurrences no link consumes") {
    ProofStructure s = parse_structure(read_file(corpus() / "nonnets" / "with_tensor_cycle.net"));
    CHECK(conclusion_ids(s) == std::vector<OccId>{5});
    CHECK(sequent_str(conclusions(s)) == "|- ((a & a) * ~a)");
}

TEST_CASE("merge_disjoint shifts the second structure") {
    ProofStructure a = parse_structure("occ 1 a\nocc 2 ~a\nlink 1 ID prem=- conc=1,2 w=1\n");
    ProofStructure b = parse_structure("occ 1 b\nocc 2 ~b\nlink 1 ID prem=- conc=1,2 w=1\n");
    std::map<OccId, OccId> om;
    std::map<LinkId, LinkId> lm;
    ProofStructure m = merge_disjoint(a, b, &om, &lm);
    CHECK(m.occs.size() == 4);
    CHECK(m.links.size() == 2);
    CHECK(om.at(1) == 3);
    CHECK(om.at(2) == 4);
    CHECK(lm.at(1) == 2);
    CHECK(m.occs.at(3).str() == "b");
    CHECK(validate(m).ok());
}

TEST_CASE("relabel_canonical renumbers occurrences, links and eigenweights") {
    // same net as with_tensor_cycle but with scattered ids
    ProofStructure s = parse_structure(
        "occ 10 a\nocc 20 a\nocc 30 (a & a)\nocc 40 ~a\nocc 50 ((a & a) * ~a)\n"
        "link 12 ID prem=- conc=10,40 w=p31\n"
        "link 22 ID prem=- conc=20,40 w=!p31\n"
        "link 31 WITH prem=10,20 conc=30 w=1\n"
        "link 44 TENSOR prem=30,40 conc=50 w=1\n");
    REQUIRE(validate(s).ok());
    std::vector<OccId> lead{50};
    std::vector<OccId> lead_out;
    ProofStructure c = relabel_canonical(s, lead, &lead_out);
    CHECK(lead_out == std::vector<OccId>{1});
    CHECK(c.occs.at(1).str() == "((a & a) * ~a)");
    CHECK(c.occs.size() == 5);
    std::vector<LinkId> lids;
    for (auto& [lid, l] : c.links) {
        (void)l;
        lids.push_back(lid);
    }
    CHECK(lids == std::vector<LinkId>{1, 2, 3, 4});
    REQUIRE(validate(c).ok());
    // the eigenweight literal now names the renumbered with link
    LinkId with_id = -1;
    for (auto& [lid, l] : c.links)
        if (l.kind == LinkKind::With) with_id = lid;
    REQUIRE(with_id != -1);
    for (auto& [lid, l] : c.links)
        if (l.kind == LinkKind::Id) {
            REQUIRE(l.weight.lits.size() == 1);
            CHECK(l.weight.lits.begin()->first == with_id);
        }
}

TEST_CASE("substitute_eigen keeps one branch and drops the other") {
    ProofStructure s = parse_structure(
        "occ 1 a\nocc 2 a\nocc 3 (a & a)\nocc 4 ~a\nocc 5 ((a & a) * ~a)\n"
        "link 1 ID prem=- conc=1,4 w=p3\n"
        "link 2 ID prem=- conc=2,4 w=!p3\n"
        "link 3 WITH prem=1,2 conc=3 w=1\n"
        "link 4 TENSOR prem=3,4 conc=5 w=1\n");
    ProofStructure t = substitute_eigen(s, {{3, true}});
    CHECK(t.links.count(1) == 1);
    CHECK(t.links.count(2) == 0);  // the right branch vanished
    CHECK(t.links.at(1).weight.is_one());
    CHECK(t.occs.count(2) == 0);
    CHECK(t.occs.count(4) == 1);   // shared occurrence survives
}
