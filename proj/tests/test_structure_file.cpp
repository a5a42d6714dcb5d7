#include <gtest/gtest.h>

#include "ainf/cli.hpp"
#include "ainf/notation.hpp"
#include "ainf/structure_file.hpp"

using namespace ainf;

namespace {

StructureFile build(Scalar p, int q, int max_arity, bool verify = false)
{
    auto rec = make_cyclic_record(p, q, default_truncation(max_arity, 2), SectionMode::closed_form, {});
    rec->compute_structure(max_arity);
    std::optional<VerificationReport> rep;
    if (verify) {
        VerifyOptions vo;
        vo.max_arity = verification_arity(*rec, max_arity);
        rep = verify_structure(*rec, vo);
    }
    return make_structure_file(*rec, {max_arity, SectionMode::closed_form}, rep);
}

} // namespace

TEST(Notation, Printing)
{
    ff::Field k(3);
    EXPECT_EQ(monomial_name(0), "1");
    EXPECT_EQ(monomial_name(1), "x");
    EXPECT_EQ(monomial_name(4), "y²");
    EXPECT_EQ(monomial_name(5), "xy²");
    EXPECT_EQ(superscript(12), "¹²");
    EXPECT_EQ(scaled_name(k, 2, "y"), "-y");
    EXPECT_EQ(scaled_name(k, 1, "y"), "y");
    EXPECT_EQ(scaled_name(k, 0, "y"), "0");
    EXPECT_EQ(class_to_string(k, HomologyClass{2, {2}}), "-y");
    EXPECT_EQ(class_to_string(k, HomologyClass{3, {0}}), "0");
    std::vector<Scalar> a{0, 1, 0, 2};
    EXPECT_EQ(algebra_to_string(k, a), "α - α³");
}

TEST(Notation, ParsingElements)
{
    ff::Field k(5);
    auto e = parse_element(k, "y²");
    EXPECT_FALSE(e.zero);
    EXPECT_EQ(e.degree, 4);
    EXPECT_EQ(e.coeff, 1);
    e = parse_element(k, "-y");
    EXPECT_EQ(e.degree, 2);
    EXPECT_EQ(e.coeff, 4);
    e = parse_element(k, "y·x");
    EXPECT_EQ(e.degree, 3);
    e = parse_element(k, "3*x*y^2");
    EXPECT_EQ(e.degree, 5);
    EXPECT_EQ(e.coeff, 3);
    EXPECT_TRUE(parse_element(k, "x^2").zero);
    EXPECT_TRUE(parse_element(k, "y - y").zero);
    EXPECT_EQ(parse_element(k, "1").degree, 0);
    EXPECT_THROW(parse_element(k, "x + y"), Error);
    EXPECT_THROW(parse_element(k, "z"), Error);
    EXPECT_THROW(parse_element(k, "y)"), Error);
}

TEST(Notation, ParsingQueries)
{
    ff::Field k(2);
    auto q = parse_query(k, "product (x,x,x,x)");
    EXPECT_EQ(q.kind, QueryKind::product);
    EXPECT_EQ(q.args.size(), 4u);
    q = parse_query(k, "f(y·x, x)");
    EXPECT_EQ(q.kind, QueryKind::map);
    EXPECT_EQ(q.args[0].degree, 3);
    try {
        parse_query(k, "sum (x)");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse_error);
    }
    EXPECT_THROW(parse_query(k, "m(x,x"), Error);
}

TEST(StructureFile, RoundTrip)
{
    for (auto [p, q] : std::vector<std::pair<Scalar, int>>{{2, 4}, {3, 3}}) {
        auto s = build(p, q, 2 * q, true);
        auto text = serialize(s);
        auto back = parse_structure_file(text);
        EXPECT_EQ(back, s);
        EXPECT_EQ(serialize(back), text);
        EXPECT_TRUE(s.verification.performed);
        EXPECT_TRUE(s.verification.passed);
        EXPECT_EQ(s.header.status, "complete");
        EXPECT_EQ(s.header.halting_arity, q + 1);
        ASSERT_TRUE(s.header.mq_coefficient);
        EXPECT_EQ(*s.header.mq_coefficient, p == 2 ? 1 : -1);
    }
}

TEST(StructureFile, ByteReproducible)
{
    EXPECT_EQ(serialize(build(5, 5, 10)), serialize(build(5, 5, 10)));
    auto s = build(2, 4, 8);
    for (std::size_t i = 1; i < s.products.size(); ++i)
        EXPECT_LE(s.products[i - 1].arity, s.products[i].arity);
}

TEST(StructureFile, PeriodicMapsAreCompact)
{
    auto s = build(2, 4, 8);
    ASSERT_FALSE(s.maps.empty());
    for (const auto& m : s.maps) {
        EXPECT_EQ(m.period, 2);
        EXPECT_EQ(m.components.size(), 2u);
    }
    EXPECT_EQ(s.zeta.period, 2);
}

TEST(StructureFile, LoadedRecordAnswersLikeTheOriginal)
{
    auto rec = make_cyclic_record(3, 3, default_truncation(6, 2), SectionMode::closed_form, {});
    rec->compute_structure(6);
    auto loaded = load_record(parse_structure_file(serialize(make_structure_file(*rec, {6, SectionMode::closed_form}, {}))));
    EXPECT_EQ(loaded->computed_through(), rec->computed_through());
    EXPECT_TRUE(loaded->halting().complete);
    for (const auto* q : {"product (x,x,x)", "product (y·x, x, x)", "map (x,x)", "map (x, y, x)",
                          "product (x,x,x,x,x,x,x,x,x)"})
        EXPECT_EQ(answer_query(*loaded, q), answer_query(*rec, q)) << q;
    EXPECT_EQ(answer_query(*loaded, "product (x,x,x)"), "-y");
    EXPECT_EQ(answer_query(*loaded, "product (x^2, x)"), "0");
}

TEST(StructureFile, Malformed)
{
    auto expect_parse_error = [](const std::string& text) {
        try {
            load_record(parse_structure_file(text));
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::parse_error);
        }
    };
    expect_parse_error("{");
    expect_parse_error("{}");
    expect_parse_error("[1,2]");

    auto s = build(2, 4, 8);
    auto bad_status = s;
    bad_status.header.status = "open";
    expect_parse_error(serialize(bad_status));

    auto bad_coeff = s;
    bad_coeff.products.back().coords.at(0) = 7;
    expect_parse_error(serialize(bad_coeff));

    auto misaligned = s;
    std::swap(misaligned.maps.front(), misaligned.maps.back());
    expect_parse_error(serialize(misaligned));
}
