#include <doctest.h>

#include "workdyn/ingest.hpp"

using namespace workdyn;

TEST_CASE("bundled sample parses to the 12 printed rows") {
    const Dataset& d = caged_sample();
    REQUIRE(d.records.size() == 12);
    CHECK(d.records.front() == LaborRecord{{1996, 1}, -12626, 23743110, 336946});
    CHECK(d.records.back() == LaborRecord{{1996, 12}, -258516, 24105767, 298644});
    CHECK(d.records[4] == LaborRecord{{1996, 5}, 172930, 24040867, 344896});
    CHECK(d.gaps.empty());
}

TEST_CASE("single brazilian line round-trips to the expected values") {
    const Dataset d = parse_dataset("01/1996;-12.626;23.743.110;336.946\n");
    REQUIRE(d.records.size() == 1);
    CHECK(d.records[0].period == YearMonth{1996, 1});
    CHECK(d.records[0].balance == -12626);
    CHECK(d.records[0].workers == 23743110);
    CHECK(d.records[0].employers == 336946);
}

TEST_CASE("comma and tab delimiters and YYYY-MM periods also parse") {
    const Dataset comma = parse_dataset("1996-01,-12.626,23.743.110,336.946\n");
    CHECK(comma.records[0].workers == 23743110);
    const Dataset tab = parse_dataset("01/1996\t-12.626\t23.743.110\t336.946\n");
    CHECK(tab.records[0].employers == 336946);
}

TEST_CASE("plain locale accepts bare integers and refuses dotted values") {
    ParseOptions plain;
    plain.locale = NumberLocale::Plain;
    const Dataset d = parse_dataset("1996-01,-12626,23743110,336946\n", plain);
    CHECK(d.records[0].balance == -12626);

    // locale safety: a brazilian file must fail loudly in plain mode
    CHECK_THROWS_AS(parse_dataset("01/1996;-12.626;23.743.110;336.946\n", plain), ParseError);
    CHECK_THROWS_AS(parse_dataset("1996-01,-12.626,23743110,336946\n", plain), ParseError);
}

TEST_CASE("brazilian locale enforces 3-digit grouping") {
    CHECK_THROWS_AS(parse_dataset("01/1996;-12.62;23.743.110;336.946\n"), ParseError);
    CHECK_THROWS_AS(parse_dataset("01/1996;-1.2.3;23.743.110;336.946\n"), ParseError);
    // ungrouped digits are fine
    const Dataset d = parse_dataset("01/1996;-12626;23743110;336946\n");
    CHECK(d.records[0].workers == 23743110);
}

TEST_CASE("empty and malformed inputs") {
    CHECK_THROWS_AS(parse_dataset(""), EmptyInput);
    CHECK_THROWS_AS(parse_dataset("\n\n  \n"), EmptyInput);
    CHECK_THROWS_AS(parse_dataset("01/1996;-12.626;23.743.110\n"), SchemaError);
    CHECK_THROWS_AS(parse_dataset("Period;B;W;A\nPeriod;B;W;A\n"), ParseError);
    // a bad month after the (possible) header line is a hard error
    CHECK_THROWS_AS(
        parse_dataset("01/1996;-12.626;23.743.110;336.946\n13/1996;-4.094;23.739.016;334.349\n"),
        ParseError);
    // a lone unparseable line is consumed as a header, leaving no data
    CHECK_THROWS_AS(parse_dataset("13/1996;-12.626;23.743.110;336.946\n"), EmptyInput);
}

TEST_CASE("parse errors carry line and column positions") {
    try {
        parse_dataset("01/1996;-12.626;23.743.110;336.946\n02/1996;oops;23.739.016;334.349\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 2);
    }
}

TEST_CASE("period ordering is enforced") {
    CHECK_THROWS_AS(
        parse_dataset("02/1996;-4.094;23.739.016;334.349\n01/1996;-12.626;23.743.110;336.946\n"),
        MonotonicityError);
    CHECK_THROWS_AS(
        parse_dataset("01/1996;-12.626;23.743.110;336.946\n01/1996;-12.626;23.743.110;336.946\n"),
        MonotonicityError);
}

TEST_CASE("gaps are an error unless opted in, then become markers") {
    const std::string text =
        "01/1996;-12.626;23.743.110;336.946\n04/1996;118.918;23.867.937;349.273\n";
    CHECK_THROWS_AS(parse_dataset(text), DataGapError);
    ParseOptions tolerant;
    tolerant.allow_gaps = true;
    const Dataset d = parse_dataset(text, tolerant);
    REQUIRE(d.gaps.size() == 2);
    CHECK(d.gaps[0] == YearMonth{1996, 2});
    CHECK(d.gaps[1] == YearMonth{1996, 3});
}

TEST_CASE("balance validation is empty on the bundled sample") {
    CHECK(validate_balances(caged_sample()).empty());
}

TEST_CASE("a single corrupted value yields the matching discrepancy") {
    Dataset d = caged_sample();
    d.records.back().workers += 1000;  // 12/1996 stock: only one difference touched
    const auto bad = validate_balances(d);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].period == YearMonth{1996, 12});
    CHECK(bad[0].discrepancy == 1000);

    Dataset mid = caged_sample();
    mid.records[5].workers += 1000;  // a mid-series stock sits in two differences
    const auto pair = validate_balances(mid);
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].period == YearMonth{1996, 6});
    CHECK(pair[0].discrepancy == 1000);
    CHECK(pair[1].period == YearMonth{1996, 7});
    CHECK(pair[1].discrepancy == -1000);

    Dataset one = caged_sample();
    one.records.back().balance += 5;  // corrupt a balance instead
    const auto single = validate_balances(one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].period == YearMonth{1996, 12});
    CHECK(single[0].discrepancy == -5);
}

TEST_CASE("too few records for balance validation") {
    Dataset d;
    d.records.push_back({{1996, 1}, 0, 10, 1});
    CHECK_THROWS_AS(validate_balances(d), TooFewRecords);
}

TEST_CASE("normalized CSV round-trips exactly") {
    const Dataset& d = caged_sample();
    const std::string csv = to_csv(d);
    ParseOptions plain;
    plain.locale = NumberLocale::Plain;
    const Dataset back = parse_dataset(csv, plain);
    CHECK(back.records == d.records);
    CHECK(to_csv(back) == csv);
}

TEST_CASE("bundled text and bundled dataset agree") {
    const Dataset reparsed = parse_dataset(caged_sample_text());
    CHECK(reparsed.records == caged_sample().records);
}
