#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cms/shift_space.hpp"

using namespace cms;

namespace {

// Independent oracle: generate all words over 1..M and filter by the
// incidence table directly.
std::vector<Word> brute_words(const TruncatedShift& s, int n) {
    std::vector<Word> all{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<Word> next;
        for (const auto& w : all)
            for (Letter b = 1; b <= s.letters(); ++b) {
                Word x = w;
                x.push_back(b);
                next.push_back(std::move(x));
            }
        all = std::move(next);
    }
    std::vector<Word> out;
    for (auto& w : all)
        if (s.word_admissible(w)) out.push_back(w);
    return out;
}

} // namespace

TEST_CASE("word enumeration on full and golden-mean shifts", "[shift]") {
    auto full2 = TruncatedShift::full(2);
    CHECK(enumerate_words(full2, 3).size() == 8);
    CHECK(enumerate_words(full2, 0) == std::vector<Word>{Word{}});

    auto gm = TruncatedShift::golden_mean();
    auto w3 = enumerate_words(gm, 3);
    REQUIRE(w3.size() == 5);
    CHECK(w3 == brute_words(gm, 3));
    // 111,112,121,211,212 in lexicographic order
    CHECK(w3.front() == Word{1, 1, 1});
    CHECK(w3.back() == Word{2, 1, 2});
}

TEST_CASE("full shift counts are M^n", "[shift]") {
    for (int M = 1; M <= 5; ++M) {
        auto s = TruncatedShift::full(M);
        std::size_t expect = 1;
        for (int n = 0; n <= 8; ++n) {
            if (n > 0) expect *= static_cast<std::size_t>(M);
            if (expect > 500000) break;
            CHECK(enumerate_words(s, n).size() == expect);
        }
    }
}

TEST_CASE("golden-mean counts follow the Fibonacci recurrence", "[shift]") {
    auto gm = TruncatedShift::golden_mean();
    std::vector<std::size_t> counts;
    for (int n = 1; n <= 12; ++n) counts.push_back(enumerate_words(gm, n).size());
    for (int n = 3; n <= 12; ++n)
        CHECK(counts[n - 1] == counts[n - 2] + counts[n - 3]);
}

TEST_CASE("flat enumeration agrees with the vector form", "[shift]") {
    for (const auto& s : {TruncatedShift::full(3), TruncatedShift::golden_mean()}) {
        for (int n : {0, 1, 2, 5}) {
            auto vec = enumerate_words(s, n);
            auto flat = enumerate_words_flat(s, n);
            REQUIRE(flat.size() == vec.size());
            if (n > 0)
                for (std::size_t i = 0; i < vec.size(); ++i) CHECK(flat.get(i) == vec[i]);
            for (const auto& w : vec)
                if (n > 0) CHECK(flat.find_prefix(w).has_value());
        }
    }
}

TEST_CASE("enumeration cap raises a resource error", "[shift]") {
    auto s = TruncatedShift::full(3);
    CHECK_THROWS_AS(enumerate_words(s, 6, 100), ResourceError);
}

TEST_CASE("dead letters are rejected at construction", "[shift]") {
    // letter 2 has no successor
    CHECK_THROWS_AS(TruncatedShift::from_rows({{1, 1}, {0, 0}}), PreconditionError);
    // letter 2 has no predecessor
    CHECK_THROWS_AS(TruncatedShift::from_rows({{1, 0}, {1, 0}}), PreconditionError);
}

TEST_CASE("preimage words respect the anchor seam", "[shift]") {
    auto full2 = TruncatedShift::full(2);
    CHECK(preimage_words(full2, Word{1}, 2).size() == 4);
    CHECK(preimage_words(full2, Word{1}, 0) == std::vector<Word>{Word{}});

    auto gm = TruncatedShift::golden_mean();
    auto pre = preimage_words(gm, Word{2}, 1);
    REQUIRE(pre.size() == 1);
    CHECK(pre[0] == Word{1});

    // every returned word concatenated with its anchor is admissible
    for (int n : {1, 2, 3, 4}) {
        for (Letter a : {1, 2}) {
            for (const auto& w : preimage_words(gm, Word{a}, n)) {
                Word cat = w;
                cat.push_back(a);
                CHECK(gm.word_admissible(cat));
            }
        }
    }
}

TEST_CASE("periodic orbit enumeration", "[shift]") {
    auto full2 = TruncatedShift::full(2);
    CHECK(enumerate_periodic_orbits(full2, 1).size() == 2);

    auto gm = TruncatedShift::golden_mean();
    CHECK(enumerate_periodic_orbits(gm, 1).size() == 1);  // only the fixed point 1
    auto p2 = enumerate_periodic_orbits(gm, 2);
    REQUIRE(p2.size() == 3);  // 11, 12, 21; 22 excluded
    std::set<Word> words;
    for (const auto& o : p2) words.insert(o.word);
    CHECK(words == std::set<Word>{{1, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("finite irreducibility witnesses", "[shift]") {
    for (int M : {1, 2, 3, 5}) {
        auto rep = check_finitely_irreducible(TruncatedShift::full(M), 2);
        REQUIRE(rep.ok);
        CHECK(rep.connectors == std::vector<Word>{Word{}});
    }

    auto gm = TruncatedShift::golden_mean();
    auto rep = check_finitely_irreducible(gm, 2);
    REQUIRE(rep.ok);
    CHECK(rep.connectors == std::vector<Word>{Word{}, Word{1}});

    // two disconnected 1-loops: pair (1,2) cannot be connected
    auto split = TruncatedShift::from_rows({{1, 0}, {0, 1}});
    auto bad = check_finitely_irreducible(split, 3);
    REQUIRE_FALSE(bad.ok);
    CHECK(bad.failing_pair == std::pair<Letter, Letter>{1, 2});
}

TEST_CASE("canonical extension is admissible, minimal and periodic", "[shift]") {
    auto gm = TruncatedShift::golden_mean();
    auto a = canonical_extension(gm, Word{2});
    CHECK(anchor_valid(gm, a));
    CHECK(a.letter_at(0) == 2);
    for (int i = 1; i < 8; ++i) CHECK(a.letter_at(static_cast<std::size_t>(i)) == 1);

    // a cycle-forcing shift: 1 -> 2 -> 3 -> 1 only
    auto rot = TruncatedShift::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    auto b = canonical_extension(rot, Word{1});
    CHECK(anchor_valid(rot, b));
    CHECK(b.letter_at(0) == 1);
    CHECK(b.letter_at(1) == 2);
    CHECK(b.letter_at(2) == 3);
    CHECK(b.letter_at(3) == 1);
    CHECK(b.letter_at(30) == b.letter_at(33));
}
