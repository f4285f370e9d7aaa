#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gcae/corpus.hpp"
#include "gcae/lexer.hpp"
#include "gcae/training.hpp"
#include "helpers.hpp"

namespace lx = gcae::lexer;
using gcae::ErrorKind;
using Lexemes = std::vector<std::string>;

namespace {

Lexemes texts(const std::vector<lx::RawToken>& tokens) {
  Lexemes out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

const lx::Vocabulary& vocab() { return lx::Vocabulary::standard(); }

}  // namespace

TEST_SUITE("tokenize") {
  TEST_CASE("multi-character operators win over single characters") {
    CHECK(texts(lx::tokenize("x<=y;")) == Lexemes{"x", "<=", "y", ";"});
    CHECK(texts(lx::tokenize("a+=b->c")) == Lexemes{"a", "+=", "b", "->", "c"});
    CHECK(texts(lx::tokenize("i++ + --j")) == Lexemes{"i", "++", "+", "--", "j"});
  }

  TEST_CASE("empty and whitespace-only input") {
    CHECK(lx::tokenize("").empty());
    CHECK(lx::tokenize("  \n\t ").empty());
  }

  TEST_CASE("comments are discarded") {
    CHECK(texts(lx::tokenize("a // b c\n d /* e\n f */ g")) == Lexemes{"a", "d", "g"});
  }

  TEST_CASE("literal kinds") {
    const auto t = lx::tokenize(R"(42 3.5 1e3 2f 10L 0x1F "s\"q" 'c' '\n' true null)");
    REQUIRE(t.size() == 11);
    CHECK(t[0].kind == lx::TokenKind::IntLiteral);
    CHECK(t[1].kind == lx::TokenKind::FloatLiteral);
    CHECK(t[2].kind == lx::TokenKind::FloatLiteral);
    CHECK(t[3].kind == lx::TokenKind::FloatLiteral);
    CHECK(t[4].kind == lx::TokenKind::IntLiteral);
    CHECK(t[5].kind == lx::TokenKind::IntLiteral);
    CHECK(t[6].kind == lx::TokenKind::StringLiteral);
    CHECK(t[6].text == R"("s\"q")");
    CHECK(t[7].kind == lx::TokenKind::CharLiteral);
    CHECK(t[8].kind == lx::TokenKind::CharLiteral);
    CHECK(t[9].kind == lx::TokenKind::BoolLiteral);
    CHECK(t[10].kind == lx::TokenKind::NullLiteral);
  }

  TEST_CASE("spans point into the source") {
    const std::string src = "int  x = 10;";
    for (const auto& t : lx::tokenize(src)) {
      CHECK(src.substr(t.span.begin, t.span.end - t.span.begin) == t.text);
    }
  }

  TEST_CASE("errors carry positions") {
    try {
      lx::tokenize("x = \"abc");
      FAIL("expected an error");
    } catch (const gcae::Error& e) {
      CHECK(e.kind() == ErrorKind::UnterminatedLiteral);
      CHECK(e.position() == 4u);
    }
    try {
      lx::tokenize("a # b");
      FAIL("expected an error");
    } catch (const gcae::Error& e) {
      CHECK(e.kind() == ErrorKind::IllegalCharacter);
      CHECK(e.position() == 2u);
    }
    CHECK_GCAE_ERROR(lx::tokenize("\"abc"), ErrorKind::UnterminatedLiteral);
    CHECK_GCAE_ERROR(lx::tokenize("/* open"), ErrorKind::UnterminatedLiteral);
  }

  TEST_CASE("lenient mode skips what strict mode rejects") {
    const auto t = lx::tokenize_lenient("@Override void f() { x # y; }");
    CHECK(t.front().text == "@");
    CHECK(texts(t).back() == "}");
  }
}

TEST_SUITE("vocabulary") {
  TEST_CASE("standard vocabulary contents") {
    const auto& v = vocab();
    CHECK(v.size() == 126);
    for (const char* required :
         {"if", "else", "do", "while", "for", "return", "method", "id", "other_method", "i", "j",
          "n", "0", "9", "int_lit", "float_lit", "str_lit", "char_lit", "bool_lit", "null_lit",
          "==", "<=", ">=", "!=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "->", "(", ")",
          "{", "}", ";", "int", "String"}) {
      CHECK_MESSAGE(v.contains(required), required);
    }
  }

  TEST_CASE("serialize and parse round trip keeps indices and checksum") {
    const auto& v = vocab();
    const auto back = lx::Vocabulary::parse(v.serialize());
    CHECK(back.lexemes() == v.lexemes());
    CHECK(back.checksum() == v.checksum());
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(back.index_of(v.lexeme(k)) == k);
  }

  TEST_CASE("malformed vocabularies are rejected") {
    CHECK_GCAE_ERROR(lx::Vocabulary(Lexemes{}), ErrorKind::Format);
    CHECK_GCAE_ERROR(lx::Vocabulary(Lexemes{"a", "a"}), ErrorKind::Format);
    CHECK(lx::Vocabulary(Lexemes{"a", "b"}).checksum() !=
          lx::Vocabulary(Lexemes{"b", "a"}).checksum());
  }
}

TEST_SUITE("anonymize") {
  TEST_CASE("the published original row is a fixed point") {
    const Lexemes row = lx::split_ws(
        "method ( int n ) { int id = 1 ; for ( int i = 2 ; i <= n ; i ++ ) { id *= i ; } "
        "return id ; }");
    CHECK(lx::anonymize(row, "") == row);
  }

  TEST_CASE("own name, callees and other identifiers") {
    CHECK(lx::anonymize(lx::tokenize("foo ( x )"), "foo") == Lexemes{"method", "(", "id", ")"});
    CHECK(lx::anonymize(lx::tokenize("bar ( x )"), "foo") ==
          Lexemes{"other_method", "(", "id", ")"});
    CHECK(lx::anonymize(lx::tokenize("x = helper ;"), "foo", {"helper"}) ==
          Lexemes{"id", "=", "other_method", ";"});
    CHECK(lx::anonymize(lx::tokenize("i = j + n + k ;"), "f") ==
          Lexemes{"i", "=", "j", "+", "n", "+", "id", ";"});
  }

  TEST_CASE("literal classes") {
    const auto out =
        lx::anonymize(lx::tokenize(R"(7 12 1.5 "s" 'c' false null)"), "f");
    CHECK(out == Lexemes{"7", "int_lit", "float_lit", "str_lit", "char_lit", "bool_lit", "null_lit"});
  }

  TEST_CASE("kept type names pass through") {
    CHECK(lx::anonymize(lx::tokenize("String s = Math . max ( a , b ) ;"), "f") ==
          Lexemes{"String", "id", "=", "Math", ".", "other_method", "(", "id", ",", "id", ")", ";"});
  }

  TEST_CASE("idempotent on generated methods") {
    for (const auto& m : gcae::corpus::generate_synthetic(3, 60)) {
      const auto once = lx::anonymize(lx::tokenize(m.body), m.name);
      CHECK(lx::anonymize(once, m.name) == once);
      CHECK(lx::anonymize(once, "") == once);
    }
  }

  TEST_CASE("variable groups follow first appearance") {
    const auto tokens = lx::tokenize("a = b ; b = a + c ;");
    const auto anon = lx::anonymize(tokens, "f");
    CHECK(lx::variable_groups(tokens, anon) == std::vector<std::size_t>{0, 1, 1, 0, 2});
  }
}

TEST_SUITE("numericalize") {
  TEST_CASE("empty sequence is rejected") {
    CHECK_GCAE_ERROR(lx::numericalize({}, vocab()), ErrorKind::EmptySequence);
  }

  TEST_CASE("the vocabulary's own ordering maps to 0..V-1") {
    const auto seq = lx::numericalize(vocab().lexemes(), vocab());
    for (std::size_t k = 0; k < seq.size(); ++k) CHECK(seq.indices[k] == k);
  }

  TEST_CASE("unknown lexeme reports its position") {
    try {
      lx::numericalize({"id", "=", "foo"}, vocab());
      FAIL("expected an error");
    } catch (const gcae::Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownLexeme);
      CHECK(e.position() == 2u);
    }
  }
}

TEST_SUITE("one_hot") {
  TEST_CASE("small examples") {
    CHECK(lx::one_hot(std::vector<std::size_t>{0}, 3) == gcae::nn::Matrix{{1, 0, 0}});
    CHECK(lx::one_hot(std::vector<std::size_t>{2, 0}, 3) ==
          gcae::nn::Matrix{{0, 0, 1}, {1, 0, 0}});
    CHECK_GCAE_ERROR(lx::one_hot(std::vector<std::size_t>{3}, 3), ErrorKind::IndexOutOfRange);
  }

  TEST_CASE("rows sum to one and argmax recovers the indices") {
    for (const auto& m : gcae::corpus::generate_synthetic(8, 20)) {
      const auto prepared = lx::prepare_method(m.body, m.name, vocab());
      const auto x = lx::one_hot(prepared.sequence, vocab().size());
      for (std::size_t r = 0; r < x.rows(); ++r) {
        double sum = 0.0;
        for (double v : x.row(r)) sum += v;
        CHECK(sum == 1.0);
      }
      CHECK(gcae::train::argmax_rows(x) == prepared.sequence.indices);
    }
  }
}

TEST_SUITE("pipeline") {
  TEST_CASE("prepare_method trims the signature prefix") {
    const auto p = lx::prepare_method("public static int f(int n) { return g(n); }", "f", vocab());
    CHECK(lx::join(p.lexemes) == "method ( int n ) { return other_method ( n ) ; }");
    CHECK(p.sequence.size() == p.lexemes.size());
    CHECK(p.sequence.spans.size() == p.lexemes.size());
  }

  TEST_CASE("declared_name finds the declaration, not calls") {
    CHECK(lx::declared_name(lx::tokenize("int f(int n) { return g(n); }")) == "f");
    CHECK(lx::declared_name(lx::tokenize("void run() throws Exception { go(); }")) == "run");
    CHECK_FALSE(lx::declared_name(lx::tokenize("x = g(n);")).has_value());
  }

  TEST_CASE("join and split_ws are inverse on single spaces") {
    const Lexemes l{"a", "(", "b", ")"};
    CHECK(lx::split_ws(lx::join(l)) == l);
    CHECK(lx::split_ws("  a \t b\n").size() == 2);
  }
}
