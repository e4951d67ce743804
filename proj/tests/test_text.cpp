#include <doctest.h>

#include "poaas/text.hpp"

using namespace poaas::text;

TEST_SUITE("text") {

TEST_CASE("utf8 round trip and replacement") {
  const std::string good = "café — ok";
  CHECK(encode_utf8(decode_utf8(good)) == good);
  CHECK(char_count(good) == 9);

  // dangling continuation bytes decode to replacement characters
  const std::string bad = "a\x80z";
  const auto u = decode_utf8(bad);
  CHECK(u.size() == 3);
  CHECK(u[1] == char32_t{0xFFFD});
}

TEST_CASE("whitespace splitting and joining") {
  CHECK(split_ws("  a  b\tc \n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_ws("") == std::vector<std::string>{});
  CHECK(join({"a", "b"}, " ") == "a b");
  CHECK(normalize_ws_lower("  The   CAT ") == "the cat");
}

TEST_CASE("token normalization strips surrounding punctuation only") {
  CHECK(normalize_token("(France).") == "france");
  CHECK(normalize_token("don't") == "don't");
  CHECK(normalize_token("“quote”") == "quote");
  CHECK(strip_surrounding_punct("...") == "");
}

TEST_CASE("levenshtein distances") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "ab") == 2);
  CHECK(levenshtein("abc", "abc") == 0);
}

TEST_CASE("number literal shapes") {
  CHECK(is_number_literal("42"));
  CHECK(is_number_literal("-3.14"));
  CHECK(is_number_literal("+7"));
  CHECK_FALSE(is_number_literal("3."));
  CHECK_FALSE(is_number_literal("1,000"));
  CHECK_FALSE(is_number_literal("v2"));
}

TEST_CASE("fnv digest is stable") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("poaas") == fnv1a64_hex("poaas"));
  CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
}

}  // TEST_SUITE
